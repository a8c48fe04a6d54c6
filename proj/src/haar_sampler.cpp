#include "page_entropy/haar_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "page_entropy/dimensions.hpp"
#include "page_entropy/parallel.hpp"

namespace page_entropy {

namespace {

constexpr std::size_t kSvdLimit = 64;

template <class Vec>
std::vector<double> block_spectrum(const SectorBasis& basis, const Vec& state) {
    using Scalar = typename Vec::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    if (static_cast<std::size_t>(state.size()) != basis.d_N)
        throw std::invalid_argument("state length does not match the sector dimension");
    std::vector<double> spectrum;
    for (const auto& b : basis.blocks) {
        Eigen::Map<const Matrix> m(state.data() + b.offset, static_cast<Eigen::Index>(b.d_A),
                                   static_cast<Eigen::Index>(b.d_B));
        const std::size_t small = std::min(b.d_A, b.d_B);
        if (small == 1) {
            spectrum.push_back(m.squaredNorm());
        } else if (small <= kSvdLimit) {
            Eigen::BDCSVD<Matrix> svd(m);
            for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
                const double s = svd.singularValues()[i];
                spectrum.push_back(s * s);
            }
        } else {
            using Square = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
            const Square gram = b.d_A <= b.d_B ? Square(m * m.adjoint()) : Square(m.adjoint() * m);
            Eigen::SelfAdjointEigenSolver<Square> es(gram, Eigen::EigenvaluesOnly);
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
                spectrum.push_back(std::max(0.0, es.eigenvalues()[i]));
        }
    }
    return spectrum;
}

}  // namespace

std::size_t SectorBasis::d_A_total() const {
    std::size_t s = 0;
    for (const auto& b : blocks) s += b.d_A;
    return s;
}

std::size_t SectorBasis::d_B_total() const {
    std::size_t s = 0;
    for (const auto& b : blocks) s += b.d_B;
    return s;
}

SectorBasis build_sector_basis(const LocalModel& model, const BipartitionSpec& spec) {
    spec.validate(model);
    const BigDim d_N = dim_fixed_n(model, spec.V, spec.N);
    if (d_N.is_zero()) throw std::domain_error("empty sector: d_N = 0");
    if (d_N > BigDim(kMaxSampledDimension))
        throw InfeasibleError("sector dimension " + d_N.to_string() + " exceeds the dense-state limit of " +
                              std::to_string(kMaxSampledDimension));
    const auto A = dim_table(model, spec.V_A, spec.N);
    const auto B = dim_table(model, spec.V_B(), spec.N);
    const auto [lo, hi] = spec.n_a_range(model);
    SectorBasis basis;
    std::size_t offset = 0;
    for (std::size_t N_A = lo; N_A <= hi; ++N_A) {
        const BigDim dA = A.at(N_A), dB = B.at(spec.N - N_A);
        if (dA.is_zero() || dB.is_zero()) continue;
        SectorBlock blk{N_A, static_cast<std::size_t>(dA.to_u64()), static_cast<std::size_t>(dB.to_u64()), offset};
        offset += blk.d_A * blk.d_B;
        basis.blocks.push_back(blk);
    }
    basis.d_N = offset;
    if (BigDim(offset) != d_N) throw std::logic_error("block dimensions do not add up to d_N");
    return basis;
}

std::vector<double> reduced_spectrum(const SectorBasis& basis, const Eigen::VectorXcd& state) {
    return block_spectrum(basis, state);
}

std::vector<double> reduced_spectrum(const SectorBasis& basis, const Eigen::VectorXd& state) {
    return block_spectrum(basis, state);
}

double von_neumann(const std::vector<double>& spectrum) {
    double s = 0.0;
    for (const double l : spectrum)
        if (l >= 1e-18) s -= l * std::log(l);
    return s;
}

std::uint64_t sample_key(std::uint64_t seed, std::uint64_t index) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(seed) ^ index);
}

Eigen::VectorXcd haar_state(const SectorBasis& basis, std::uint64_t key) {
    std::mt19937_64 rng(key);
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd psi(static_cast<Eigen::Index>(basis.d_N));
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        psi[i] = {re, im};
    }
    psi /= psi.norm();
    return psi;
}

double sample_entropy(const SectorBasis& basis, std::uint64_t key) {
    return von_neumann(reduced_spectrum(basis, haar_state(basis, key)));
}

void MomentAccumulator::add(double x) {
    MomentAccumulator one;
    one.n_ = 1;
    one.mean_ = x;
    merge(one);
}

void MomentAccumulator::merge(const MomentAccumulator& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
    const double n = na + nb;
    const double d = o.mean_ - mean_;
    const double d2 = d * d;
    const double m2 = m2_ + o.m2_ + d2 * na * nb / n;
    const double m3 = m3_ + o.m3_ + d * d2 * na * nb * (na - nb) / (n * n) + 3.0 * d * (na * o.m2_ - nb * m2_) / n;
    const double m4 = m4_ + o.m4_ + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                      6.0 * d2 * (na * na * o.m2_ + nb * nb * m2_) / (n * n) + 4.0 * d * (na * o.m3_ - nb * m3_) / n;
    mean_ += d * nb / n;
    m2_ = m2;
    m3_ = m3;
    m4_ = m4;
    n_ += o.n_;
}

double MomentAccumulator::variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

McSummary MomentAccumulator::summary(std::uint64_t seed) const {
    McSummary s;
    s.samples = n_;
    s.seed = seed;
    s.mean = mean_;
    s.variance = variance();
    if (n_ > 1) {
        const double n = static_cast<double>(n_);
        s.sem = std::sqrt(s.variance / n);
        const double mu2 = m2_ / n, mu4 = m4_ / n;
        // Large-sample standard error of the sample variance.
        s.variance_sem = std::sqrt(std::max(0.0, (mu4 - (n - 3.0) / (n - 1.0) * mu2 * mu2) / n));
    }
    return s;
}

McSummary mc_average(const SectorBasis& basis, std::size_t n_samples, std::uint64_t seed, unsigned threads) {
    if (n_samples < 2) throw std::invalid_argument("mc_average needs at least 2 samples");
    std::vector<double> values(n_samples);
    parallel_for(n_samples, threads, [&](std::size_t i) { values[i] = sample_entropy(basis, sample_key(seed, i)); });
    MomentAccumulator acc;
    for (const double v : values) acc.add(v);
    return acc.summary(seed);
}

}  // namespace page_entropy
