#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "page_entropy/local_model.hpp"

namespace page_entropy {

enum class HamiltonianKind { spin1_xxz, bose_hubbard };

/// Local occupations (spin-1: k = S^z + 1) of every site, one entry per basis state.
using Configuration = std::vector<std::uint8_t>;

/// All configurations of `sites` sites with occupations 0..cap summing to N,
/// in lexicographic order.
std::vector<Configuration> enumerate_configurations(std::size_t sites, std::size_t cap, std::size_t N);

inline constexpr std::size_t kMaxDenseDimension = 4000;

struct SectorHamiltonian {
    HamiltonianKind kind = HamiltonianKind::spin1_xxz;
    std::size_t V = 0;
    long M = 0;         ///< magnetization (spin-1 only)
    std::size_t N = 0;  ///< particle number; N = M + V for spin-1
    double lambda = 0.0;
    double Delta = 0.0;
    double U = 0.0;
    std::optional<std::size_t> n_max;  ///< occupancy cap; absent = unconstrained bosons
    Eigen::MatrixXd matrix;
    std::vector<Configuration> basis;

    std::size_t dimension() const { return basis.size(); }
    /// Site occupancy cap used in the basis.
    std::size_t cap() const;
    /// Local Hilbert-space model matching the basis.
    LocalModel local_model() const;
};

/// H0 + lambda H1 on the fixed-M sector, periodic boundaries.
SectorHamiltonian build_spin1_xxz(std::size_t V, long M, double lambda, double Delta);
/// Hopping plus (U/2) sum n(n-1) on the fixed-N sector, periodic boundaries.
SectorHamiltonian build_bose_hubbard(std::size_t V, std::size_t N, double U, std::optional<std::size_t> n_max);

struct MidSpectrumRow {
    std::size_t V_A = 0;
    double f = 0.0;
    double mean = 0.0;
    double std = 0.0;
};

struct MidSpectrumReport {
    std::size_t window = 0;  ///< states actually averaged (after multiplet completion)
    std::size_t first = 0;   ///< index of the first state in the window
    Eigen::VectorXd energies;
    std::vector<MidSpectrumRow> rows;
};

/// Averages S_A over `window` eigenstates centered on the median index, with
/// A = sites 1..V_A. The window grows to avoid splitting degenerate multiplets.
MidSpectrumReport mid_spectrum_entropies(const SectorHamiltonian& H, std::size_t window,
                                         const std::vector<std::size_t>& V_A_list, unsigned threads = 1);

/// Closed-form beta(n) of the spin-1 (three-level) model.
double beta_spin1(double n);

}  // namespace page_entropy
