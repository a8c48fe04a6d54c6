#include "page_entropy/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace page_entropy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundarySnap = 1e-9;
constexpr int kMaxBracketSteps = 200;

void check_density(const LocalModel& model, double n) {
    if (!(n > 0.0)) throw std::domain_error("density n = " + std::to_string(n) + " must be positive");
    if (model.is_finite() && !(n < static_cast<double>(*model.n_max())))
        throw std::domain_error("density n = " + std::to_string(n) + " must be below n_max = " +
                                std::to_string(*model.n_max()));
}

}  // namespace

LocalMoments local_moments(const LocalModel& model, double z) {
    if (!(z > 0.0)) throw std::domain_error("saddle moments need z > 0");
    if (model.is_finite()) {
        // Weights a_k z^k normalized by their largest member, so z far above 1
        // never overflows.
        const auto a = model.coefficients(*model.n_max() + 1);
        const double lz = std::log(z);
        std::vector<double> lw(a.size(), -kInf);
        double top = -kInf;
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (a[k].is_zero()) continue;
            lw[k] = ln_big(a[k]) + static_cast<double>(k) * lz;
            top = std::max(top, lw[k]);
        }
        double s0 = 0.0, s1 = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double w = std::exp(lw[k] - top);
            s0 += w;
            s1 += static_cast<double>(k) * w;
        }
        const double mean = s1 / s0;
        double var = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double d = static_cast<double>(k) - mean;
            var += std::exp(lw[k] - top) * d * d;
        }
        return {top + std::log(s0), mean, var / s0};
    }
    const ZetaValues v = model.eval_zeta(z);
    const double mean = z * v.zeta1 / v.zeta;
    const double var = z * z * v.zeta2 / v.zeta + mean - mean * mean;
    return {std::log(v.zeta), mean, var};
}

double saddle_z(const LocalModel& model, double z) {
    if (z == 0.0) return 0.0;
    return local_moments(model, z).mean;
}

double solve_z0(const LocalModel& model, double n) {
    check_density(model, n);
    double lo = 0.0;
    double hi = 0.0;
    if (model.is_finite()) {
        hi = 1.0;
        int steps = 0;
        while (saddle_z(model, hi) <= n) {
            lo = hi;
            hi *= 2.0;
            if (++steps > kMaxBracketSteps)
                throw NumericalError("saddle bracket failed after 200 expansions at n = " + std::to_string(n));
        }
    } else {
        const double R = model.radius();
        double eps = 0.25;
        int steps = 0;
        for (;;) {
            lo = eps * R;
            hi = (1.0 - eps) * R;
            if (!(hi < R)) throw NumericalError("saddle bracket reached the radius of convergence at n = " + std::to_string(n));
            if (saddle_z(model, lo) < n && saddle_z(model, hi) > n) break;
            eps *= 0.5;
            if (++steps > kMaxBracketSteps)
                throw NumericalError("saddle bracket failed after 200 contractions at n = " + std::to_string(n));
        }
    }

    while (hi - lo > 1e-6 * hi) {
        const double mid = 0.5 * (lo + hi);
        (saddle_z(model, mid) < n ? lo : hi) = mid;
    }

    // Safeguarded Newton; dZ/dz = variance / z at any z.
    double z = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        const LocalMoments m = local_moments(model, z);
        const double g = m.mean - n;
        if (g == 0.0) return z;
        (g < 0 ? lo : hi) = z;
        double next = z - g * z / m.variance;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - z);
        z = next;
        if (step <= 1e-15 * z || hi - lo <= 1e-15 * hi) return z;
    }
    return z;
}

SaddleSolution beta_family(const LocalModel& model, double n) {
    check_density(model, n);
    SaddleSolution s;
    s.n = n;
    if (n < kBoundarySnap) {
        s.z0 = 0.0;
        s.beta = ln_big(model.coefficient(0));
        s.beta1 = kInf;
        s.beta2 = -kInf;
        s.alpha = kInf;
        s.at_boundary = true;
        return s;
    }
    if (model.is_finite() && static_cast<double>(*model.n_max()) - n < kBoundarySnap) {
        s.z0 = kInf;
        s.beta = ln_big(model.coefficient(*model.n_max()));
        s.beta1 = -kInf;
        s.beta2 = -kInf;
        s.alpha = kInf;
        s.at_boundary = true;
        return s;
    }
    const auto star = n_star(model);
    s.z0 = star && std::abs(n - *star) < 1e-12 ? 1.0 : solve_z0(model, n);
    const LocalMoments m = local_moments(model, s.z0);
    s.beta = m.log_zeta - n * std::log(s.z0);
    s.beta1 = s.z0 == 1.0 ? 0.0 : -std::log(s.z0);
    s.beta2 = -1.0 / m.variance;
    s.alpha = std::sqrt(-s.beta2 / (2.0 * kPi));
    return s;
}

std::optional<double> n_star(const LocalModel& model) {
    if (!model.is_finite()) return std::nullopt;
    const auto a = model.coefficients(*model.n_max() + 1);
    BigDim total, weighted;
    for (std::size_t k = 0; k < a.size(); ++k) {
        total += a[k];
        weighted += a[k] * BigDim(k);
    }
    return ratio(weighted, total);
}

double ln_dim_asymptotic(const LocalModel& model, std::size_t V, double n) {
    if (V == 0) throw std::invalid_argument("ln_dim_asymptotic needs V >= 1");
    const SaddleSolution s = beta_family(model, n);
    const double v = static_cast<double>(V);
    return v * s.beta - 0.5 * std::log(v) + std::log(s.alpha);
}

}  // namespace page_entropy
