#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "page_entropy/entropy.hpp"
#include "page_entropy/local_model.hpp"

namespace page_entropy {

/// H_A^(N_A) (x) H_B^(N-N_A) occupies [offset, offset + d_A d_B) of the sector,
/// with amplitude (iA, iB) stored at offset + iA d_B + iB.
struct SectorBlock {
    std::size_t N_A = 0;
    std::size_t d_A = 0;
    std::size_t d_B = 0;
    std::size_t offset = 0;
};

struct SectorBasis {
    std::vector<SectorBlock> blocks;
    std::size_t d_N = 0;

    std::size_t d_A_total() const;
    std::size_t d_B_total() const;
};

inline constexpr std::size_t kMaxSampledDimension = 2'000'000;

/// Throws InfeasibleError when d_N exceeds kMaxSampledDimension.
SectorBasis build_sector_basis(const LocalModel& model, const BipartitionSpec& spec);

/// Eigenvalues of rho_A, the union of squared singular values of the blocks.
std::vector<double> reduced_spectrum(const SectorBasis& basis, const Eigen::VectorXcd& state);
std::vector<double> reduced_spectrum(const SectorBasis& basis, const Eigen::VectorXd& state);
/// -sum lambda ln lambda, dropping lambda < 1e-18.
double von_neumann(const std::vector<double>& spectrum);

/// Haar-random normalized state on the sector, drawn from the substream `key`.
Eigen::VectorXcd haar_state(const SectorBasis& basis, std::uint64_t key);
/// Entropy of one Haar-random state drawn from the substream `key`.
double sample_entropy(const SectorBasis& basis, std::uint64_t key);

/// Substream key of sample `index` under `seed` (SplitMix64 mixing).
std::uint64_t sample_key(std::uint64_t seed, std::uint64_t index);

struct McSummary {
    std::size_t samples = 0;
    double mean = 0.0;
    double sem = 0.0;
    double variance = 0.0;      ///< unbiased sample variance
    double variance_sem = 0.0;  ///< standard error of `variance`
    std::uint64_t seed = 0;
};

/// Streaming central moments up to fourth order; merge is associative up to
/// rounding.
class MomentAccumulator {
public:
    void add(double x);
    void merge(const MomentAccumulator& other);
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const;
    McSummary summary(std::uint64_t seed) const;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0, m2_ = 0.0, m3_ = 0.0, m4_ = 0.0;
};

/// Samples are generated from per-index substreams and reduced in index
/// order, so the result is bit-identical for any thread count.
McSummary mc_average(const SectorBasis& basis, std::size_t n_samples, std::uint64_t seed, unsigned threads = 1);

}  // namespace page_entropy
