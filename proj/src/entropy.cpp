#include "page_entropy/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "page_entropy/parallel.hpp"

namespace page_entropy {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLn2 = 0.693147180559945309417232121458;

bool is_half(double f) { return std::abs(f - 0.5) < kKroneckerTolerance; }

double normalize_f(double f) {
    if (!(f > 0.0 && f < 1.0)) throw std::domain_error("subsystem fraction f = " + std::to_string(f) + " must lie in (0, 1)");
    return f > 0.5 ? 1.0 - f : f;
}

bool interior_density(const LocalModel& model, double n) {
    if (!(n > 1e-9)) return false;
    return !model.is_finite() || static_cast<double>(*model.n_max()) - n > 1e-9;
}

struct StarData {
    double n_star;
    double beta;
    double abs_beta2;
};

std::optional<StarData> star_data(const LocalModel& model) {
    const auto ns = n_star(model);
    if (!ns) return std::nullopt;
    const SaddleSolution s = beta_family(model, *ns);
    return StarData{*ns, s.beta, std::abs(s.beta2)};
}

// X1 for offsets F = f - 1/2 and delta = n - n*.
double x1_core(double V, double F, double delta, double beta_star, double abs_beta2_star) {
    F = std::abs(F);
    if (std::abs(delta) < kKroneckerTolerance) return std::exp(-2.0 * F * V * beta_star);
    const double c = std::sqrt(abs_beta2_star * V / 2.0);
    const double u = c * std::abs(delta);
    const double v = 2.0 * c * F * beta_star / (std::abs(delta) * abs_beta2_star);
    const double A = u * u;
    const double B = 2.0 * F * V * beta_star;
    auto term = [&](double x, double exponent) {
        if (x >= 0.0) return std::exp(-v * v) * erfcx(x);
        return std::exp(exponent) * erfc(x);
    };
    return 0.5 * (term(u + v, A + B) + term(u - v, A - B));
}

double x2_core(double V, double F, double beta, double beta1, double beta2) {
    const double ab1 = std::abs(beta1);
    const double ab2 = std::abs(beta2);
    F = std::abs(F);
    const double ratio_term = F * beta / ab1;
    return V * F * beta * erfc(std::sqrt(2.0 * V * ab2) * ratio_term) -
           ab1 * std::sqrt(V / (2.0 * kPi * ab2)) * std::exp(-2.0 * V * ab2 * ratio_term * ratio_term);
}

bool same(double a, double b) { return std::abs(a - b) < 1e-12; }

// phi and chi are symmetric under A <-> B, so evaluating the smaller side
// makes S_A = S_B hold bit for bit.
BipartitionSpec canonical(BipartitionSpec spec) {
    spec.V_A = std::min(spec.V_A, spec.V - spec.V_A);
    return spec;
}

}  // namespace

std::pair<std::size_t, std::size_t> BipartitionSpec::n_a_range(const LocalModel& model) const {
    if (!model.is_finite()) return {0, N};
    const std::size_t cap = *model.n_max();
    const std::size_t b_max = V_B() * cap;
    return {N > b_max ? N - b_max : 0, std::min(N, V_A * cap)};
}

void BipartitionSpec::validate(const LocalModel& model) const {
    if (V == 0) throw std::invalid_argument("V must be >= 1");
    if (V_A > V) throw std::invalid_argument("V_A = " + std::to_string(V_A) + " exceeds V = " + std::to_string(V));
    if (model.is_finite() && N > V * *model.n_max())
        throw std::invalid_argument("N = " + std::to_string(N) + " exceeds V n_max = " +
                                    std::to_string(V * *model.n_max()));
}

double phi_term(const BigDim& d_A, const BigDim& d_B, const BigDim& d_N) {
    const BigDim& big = d_A < d_B ? d_B : d_A;
    const double correction = std::min(ratio(d_A - BigDim(1), d_B), ratio(d_B - BigDim(1), d_A));
    return digamma_of_dim(d_N) - digamma_of_dim(big) - 0.5 * correction;
}

double chi_term(const BigDim& d_A_in, const BigDim& d_B_in, const BigDim& d_N) {
    const bool swap = d_B_in < d_A_in;
    const BigDim& dA = swap ? d_B_in : d_A_in;
    const BigDim& dB = swap ? d_A_in : d_B_in;
    const BigDim one(1);
    const BigDim dA1 = dA - one;
    // (d_A+d_B) Psi'(d_B+1) - (d_N+1) Psi'(d_N+1) rewritten with g(x) = x Psi'(x) - 1
    // so that the O(1) result does not come from cancelling O(1) pieces of huge terms.
    const double lead = ratio(dA1, dB + one) + ratio(dA + dB, dB + one) * scaled_trigamma_excess(dB) -
                        scaled_trigamma_excess(d_N);
    const double tail = ratio(dA1 * ((dA + dB * BigDim(2)) - one), BigDim(4) * dB * dB);
    return lead - tail;
}

std::vector<SectorTerm> sector_terms(const DimensionTable& A, const DimensionTable& B, const BigDim& d_N,
                                     std::size_t N, std::pair<std::size_t, std::size_t> range) {
    if (d_N.is_zero()) throw std::domain_error("empty sector: d_N = 0");
    std::vector<SectorTerm> terms;
    for (std::size_t N_A = range.first; N_A <= range.second && N_A <= N; ++N_A) {
        SectorTerm t;
        t.N_A = N_A;
        t.d_A = A.at(N_A);
        t.d_B = B.at(N - N_A);
        if (t.d_A.is_zero() || t.d_B.is_zero()) continue;
        t.rho = ratio(t.d_A * t.d_B, d_N);
        t.phi = phi_term(t.d_A, t.d_B, d_N);
        t.chi = chi_term(t.d_A, t.d_B, d_N);
        terms.push_back(std::move(t));
    }
    return terms;
}

std::vector<SectorTerm> sector_terms(const LocalModel& model, const BipartitionSpec& spec) {
    spec.validate(model);
    const auto A = dim_table(model, spec.V_A, spec.N);
    const auto B = dim_table(model, spec.V_B(), spec.N);
    const BigDim d_N = dim_fixed_n(model, spec.V, spec.N);
    return sector_terms(A, B, d_N, spec.N, spec.n_a_range(model));
}

ExactStatistics reduce_terms(const std::vector<SectorTerm>& terms, const BigDim& d_N) {
    ExactStatistics s;
    for (const auto& t : terms) {
        s.weight_sum += t.rho;
        s.mean += t.rho * t.phi;
    }
    double spread = 0.0, chi = 0.0;
    for (const auto& t : terms) {
        const double d = t.phi - s.mean;
        spread += t.rho * d * d;
        chi += t.rho * t.chi;
    }
    const double bracket = std::max(0.0, spread + chi);
    s.variance.bracket = bracket;
    const BigDim denom = d_N + BigDim(1);
    s.variance.value = bracket * ratio(BigDim(1), denom);
    s.variance.log_value = bracket > 0.0 ? std::log(bracket) - ln_big(denom) : -std::numeric_limits<double>::infinity();
    return s;
}

ExactStatistics exact_statistics(const LocalModel& model, const BipartitionSpec& requested) {
    requested.validate(model);
    const BipartitionSpec spec = canonical(requested);
    const BigDim d_N = dim_fixed_n(model, spec.V, spec.N);
    if (d_N.is_zero()) throw std::domain_error("empty sector: d_N = 0");
    const auto A = dim_table(model, spec.V_A, spec.N);
    const auto B = dim_table(model, spec.V_B(), spec.N);
    return reduce_terms(sector_terms(A, B, d_N, spec.N, spec.n_a_range(model)), d_N);
}

double exact_average(const LocalModel& model, const BipartitionSpec& spec) {
    return exact_statistics(model, spec).mean;
}

VarianceValue exact_variance(const LocalModel& model, const BipartitionSpec& spec) {
    return exact_statistics(model, spec).variance;
}

double rho_weight(const LocalModel& model, const BipartitionSpec& spec, double n_A) {
    const double f = spec.f();
    if (!(f > 0.0 && f < 1.0)) throw std::domain_error("rho_weight needs 0 < f < 1");
    const SaddleSolution s = beta_family(model, spec.n());
    const double V = static_cast<double>(spec.V);
    const double k = std::abs(s.beta2) * V / (f * (1.0 - f));
    const double d = n_A - f * spec.n();
    return std::sqrt(k / (2.0 * kPi)) * std::exp(-0.5 * k * d * d);
}

GaussianMoments gaussian_moments(const LocalModel& model, const BipartitionSpec& spec) {
    const double f = spec.f();
    if (!(f > 0.0 && f < 1.0)) throw std::domain_error("gaussian_moments needs 0 < f < 1");
    const SaddleSolution s = beta_family(model, spec.n());
    const double bv = std::abs(s.beta2) * static_cast<double>(spec.V);
    GaussianMoments m;
    m.M2 = f * (1.0 - f) / bv;
    m.M1_plus = 1.0 / std::sqrt(8.0 * kPi * bv);
    m.M1_minus = -m.M1_plus;
    m.M2_plus = m.M2_minus = 1.0 / (8.0 * bv);
    return m;
}

AsymptoticTerms asymptotic_average(const LocalModel& model, std::size_t V, double f, double n) {
    f = normalize_f(f);
    const SaddleSolution s = beta_family(model, n);
    if (s.at_boundary) throw std::domain_error("asymptotic average needs n strictly inside (0, n_max)");
    AsymptoticTerms t;
    t.f_half = is_half(f);
    const auto ns = n_star(model);
    t.n_star = ns && std::abs(n - *ns) < kKroneckerTolerance;
    t.a = s.beta * f;
    t.b = t.f_half ? -std::abs(s.beta1) / std::sqrt(2.0 * kPi * std::abs(s.beta2)) : 0.0;
    t.c = 0.5 * (f + std::log1p(-f) - (t.f_half && t.n_star ? 1.0 : 0.0));
    const double v = static_cast<double>(V);
    t.value = t.a * v + t.b * std::sqrt(v) + t.c;
    return t;
}

AsymptoticTerms asymptotic_average(const LocalModel& model, const BipartitionSpec& spec) {
    return asymptotic_average(model, spec.V, spec.f(), spec.n());
}

double resolve_x1(double V, double f, double n, double n_star_value, double beta_star, double abs_beta2_star) {
    return x1_core(V, f - 0.5, n - n_star_value, beta_star, abs_beta2_star);
}

double resolve_x1(const LocalModel& model, std::size_t V, double f, double n) {
    if (V == 0) throw std::invalid_argument("resolve_x1 needs V >= 1");
    const auto star = star_data(model);
    if (!star) throw std::domain_error("X1 needs n*, which does not exist for infinite local Hilbert spaces");
    return x1_core(static_cast<double>(V), normalize_f(f) - 0.5, n - star->n_star, star->beta, star->abs_beta2);
}

double resolve_x2(double V, double f, double beta, double beta1, double beta2) {
    if (beta1 == 0.0) throw std::domain_error("X2 is undefined at beta'(n) = 0; the sqrt(V) term vanishes at n*");
    return x2_core(V, f - 0.5, beta, beta1, beta2);
}

double resolve_x2(const LocalModel& model, std::size_t V, double f, double n) {
    const SaddleSolution s = beta_family(model, n);
    return resolve_x2(static_cast<double>(V), normalize_f(f), s.beta, s.beta1, s.beta2);
}

double resolved_average(const LocalModel& model, std::size_t V, double f, double n) {
    if (V < 4) throw std::invalid_argument("resolved average needs V >= 4");
    f = normalize_f(f);
    const SaddleSolution s = beta_family(model, n);
    if (s.at_boundary) throw std::domain_error("resolved average needs n strictly inside (0, n_max)");
    const double v = static_cast<double>(V);
    double value = s.beta * f * v + 0.5 * (f + std::log1p(-f));
    if (std::abs(s.beta1) > 1e-300) value += x2_core(v, f - 0.5, s.beta, s.beta1, s.beta2);
    if (const auto star = star_data(model))
        value -= 0.5 * x1_core(v, f - 0.5, n - star->n_star, star->beta, star->abs_beta2);
    return value;
}

double y_exponent(const LocalModel& model, double f, double n, double n_A) {
    if (!(f > 0.0 && f < 1.0)) throw std::domain_error("y_exponent needs 0 < f < 1");
    return f * beta_family(model, n_A / f).beta - (1.0 - f) * beta_family(model, (n - n_A) / (1.0 - f)).beta;
}

NCrit n_crit(const LocalModel& model, double f, double n) {
    NCrit r;
    r.within_window = std::abs(f - 0.5) <= 0.2;
    const SaddleSolution s = beta_family(model, n);
    if (std::abs(s.beta1) > 1e-9) {
        r.value = f * n - (f - 0.5) * s.beta / s.beta1;
        return r;
    }
    if (is_half(f)) {
        r.value = f * n;
        return r;
    }
    const auto star = star_data(model);
    if (!star || std::abs(n - star->n_star) < kKroneckerTolerance)
        throw NumericalError("n_crit outside Gaussian window: beta'(n) ~ 0 at n ~ n* with f != 1/2");
    r.value = f * n + (f - 0.5) * star->beta / (star->abs_beta2 * (n - star->n_star));
    return r;
}

double x1_powerlaw(double s, double t, double Lambda_f, double Lambda_n, double beta_star, double abs_beta2_star) {
    const bool s1 = same(s, 1.0), th = same(t, 0.5);
    if ((s < 1.0 && !s1) || (t < 0.5 && !th)) return 0.0;
    if (s1 && th) return x1_core(1.0, Lambda_f, Lambda_n, beta_star, abs_beta2_star);
    if (th) return erfcx(std::sqrt(abs_beta2_star / 2.0) * std::abs(Lambda_n));
    if (s1) return std::exp(-2.0 * std::abs(Lambda_f) * beta_star);
    return 1.0;
}

double x1_powerlaw(const LocalModel& model, double s, double t, double Lambda_f, double Lambda_n) {
    const auto star = star_data(model);
    if (!star) throw std::domain_error("X1 needs n*, which does not exist for infinite local Hilbert spaces");
    return x1_powerlaw(s, t, Lambda_f, Lambda_n, star->beta, star->abs_beta2);
}

double x2_powerlaw(double s, double Lambda_f, double V, double beta, double beta1, double beta2) {
    if (beta1 == 0.0) throw std::domain_error("X2 is undefined at beta'(n) = 0");
    const double ab1 = std::abs(beta1), ab2 = std::abs(beta2), L = std::abs(Lambda_f);
    const double sqrt_term = ab1 * std::sqrt(V / (2.0 * kPi * ab2));
    if (same(s, 0.5)) {
        const double r = L * beta / ab1;
        return std::sqrt(V) * (L * beta * erfc(std::sqrt(2.0 * ab2) * r) -
                               ab1 / std::sqrt(2.0 * kPi * ab2) * std::exp(-2.0 * ab2 * r * r));
    }
    if (s < 0.5) return 0.0;
    if (s <= 1.0 || same(s, 1.0)) return L * std::pow(V, 1.0 - s) * beta - sqrt_term;
    return -sqrt_term;
}

double x2_powerlaw(const LocalModel& model, double n, double s, double Lambda_f, double V) {
    const SaddleSolution sol = beta_family(model, n);
    return x2_powerlaw(s, Lambda_f, V, sol.beta, sol.beta1, sol.beta2);
}

KroneckerResolution resolve_kronecker(const LocalModel& model, std::size_t V, double f, double n) {
    f = normalize_f(f);
    const double v = static_cast<double>(V);
    KroneckerResolution k;
    k.Lambda_f = (f - 0.5) * v;
    const SaddleSolution s = beta_family(model, n);
    k.X2 = std::abs(s.beta1) > 1e-300 ? x2_core(v, f - 0.5, s.beta, s.beta1, s.beta2) : 0.0;
    if (const auto star = star_data(model)) {
        k.Lambda_n = (n - star->n_star) * std::sqrt(v);
        k.X1 = x1_core(v, f - 0.5, n - star->n_star, star->beta, star->abs_beta2);
    } else {
        k.Lambda_n = kNaN;
    }
    return k;
}

AsymptoticVariance asymptotic_variance(const LocalModel& model, std::size_t V, double f, double n) {
    f = normalize_f(f);
    const SaddleSolution s = beta_family(model, n);
    const double v = static_cast<double>(V);
    const double factor = f * (1.0 - f) - (is_half(f) ? 1.0 / (2.0 * kPi) : 0.0);
    AsymptoticVariance r;
    r.prefactor = std::sqrt(2.0 * kPi) * s.beta1 * s.beta1 / std::pow(std::abs(s.beta2), 1.5) * factor * v * std::sqrt(v);
    r.log_exponential = -s.beta * v;
    r.value = r.prefactor * std::exp(r.log_exponential);
    return r;
}

double distinguishable_exact_average(std::size_t V, std::size_t N, std::size_t V_A) {
    if (V == 0) throw std::invalid_argument("V must be >= 1");
    if (V_A > V) throw std::invalid_argument("V_A exceeds V");
    const BigDim d_N = distinguishable_dim(V, N);
    const BigDim vA(V_A), vB(V - V_A);
    double sum = 0.0;
    for (std::size_t N_A = 0; N_A <= N; ++N_A) {
        const BigDim d_A = pow(vA, N_A);
        const BigDim d_B = pow(vB, N - N_A);
        if (d_A.is_zero() || d_B.is_zero()) continue;
        const double rho = ratio(binomial(N, N_A) * d_A * d_B, d_N);
        sum += rho * phi_term(d_A, d_B, d_N);
    }
    return sum;
}

DistinguishableTerms distinguishable_asymptotic(std::size_t V, std::size_t N, std::size_t V_A) {
    if (V == 0) throw std::invalid_argument("V must be >= 1");
    const double v = static_cast<double>(V);
    const double n = static_cast<double>(N) / v;
    const double f = normalize_f(static_cast<double>(V_A) / v);
    DistinguishableTerms t;
    const double lv = std::log(v);
    t.v_log_v = n * f * v * lv;
    t.v = -n * (1.0 - f) * std::log1p(-f) * v;
    t.sqrt_v_log_v = is_half(f) ? std::sqrt(n / (2.0 * kPi)) * kLn2 * std::sqrt(v) * lv : 0.0;
    t.value = t.v_log_v + t.v + t.sqrt_v_log_v;
    return t;
}

std::vector<EntropyReport> page_curve(const LocalModel& model, std::size_t V, std::size_t N, unsigned threads) {
    BipartitionSpec{V, N, 0}.validate(model);
    const auto ladder = dim_ladder(model, V, N);
    const BigDim d_N = ladder[V].at(N);
    if (d_N.is_zero()) throw std::domain_error("empty sector: d_N = 0");
    const double n = static_cast<double>(N) / static_cast<double>(V);
    const bool asymptotics = interior_density(model, n);

    std::vector<EntropyReport> rows(V + 1);
    parallel_for(V + 1, threads, [&](std::size_t V_A) {
        EntropyReport& r = rows[V_A];
        const BipartitionSpec spec{V, N, V_A};
        r.V_A = V_A;
        r.f = spec.f();
        const BipartitionSpec small = canonical(spec);
        const auto stats = reduce_terms(
            sector_terms(ladder[small.V_A], ladder[small.V_B()], d_N, N, small.n_a_range(model)), d_N);
        r.exact_mean = stats.mean;
        r.exact_variance = stats.variance;
        if (V_A == 0 || V_A == V) return;
        if (!asymptotics) {
            r.asym.value = r.resolved_mean = r.asym_variance.value = kNaN;
            return;
        }
        r.asym = asymptotic_average(model, V, r.f, n);
        r.resolved_mean = V >= 4 ? resolved_average(model, V, r.f, n) : kNaN;
        r.asym_variance = asymptotic_variance(model, V, r.f, n);
    });
    return rows;
}

}  // namespace page_entropy
