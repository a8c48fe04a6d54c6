#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "page_entropy/local_model.hpp"
#include "page_entropy/numerics.hpp"

namespace page_entropy {

/// d_N(V) for N = 0..N_cap: the truncated coefficients of zeta(z)^V.
struct DimensionTable {
    std::size_t V = 0;
    std::vector<BigDim> entries;

    std::size_t n_cap() const { return entries.empty() ? 0 : entries.size() - 1; }
    /// Zero past the cap as well as for empty sectors.
    BigDim at(std::size_t N) const { return N < entries.size() ? entries[N] : BigDim{}; }
    /// Columns N,d_N with d_N written exactly.
    std::string to_csv() const;
};

/// Exact sector dimension; zero marks an empty sector (N > V n_max).
BigDim dim_fixed_n(const LocalModel& model, std::size_t V, std::size_t N);
DimensionTable dim_table(const LocalModel& model, std::size_t V, std::size_t N_cap);

/// Alternating-sum closed form of the (n_max+1)-nomial coefficient, valid for
/// models with a_k = 1 on 0..n_max.
BigDim extended_binomial_closed(std::size_t V, std::size_t N, std::size_t n_max);

/// V^N placements of N distinguishable particles.
BigDim distinguishable_dim(std::size_t V, std::size_t N);

/// Tables for every subsystem size 0..V at a common cap, built by multiplying
/// one site at a time. Used by page-curve sweeps.
std::vector<DimensionTable> dim_ladder(const LocalModel& model, std::size_t V, std::size_t N_cap);

/// Truncated product of two coefficient sequences.
std::vector<BigDim> truncated_product(const std::vector<BigDim>& a, const std::vector<BigDim>& b, std::size_t cap);

}  // namespace page_entropy
