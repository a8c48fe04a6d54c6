#pragma once

#include <cstddef>
#include <optional>

#include "page_entropy/local_model.hpp"

namespace page_entropy {

/// Saddle-point data at density n. At the boundaries (n within 1e-9 of 0 or
/// n_max) z0 is 0 or +inf, beta1 is +-inf and at_boundary is set.
struct SaddleSolution {
    double n = 0.0;
    double z0 = 0.0;
    double beta = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double alpha = 0.0;
    bool at_boundary = false;
};

/// Mean and variance of the local particle number under weights a_k z^k.
/// Z(z) = mean; z^2 psi''(z) = variance at the saddle.
struct LocalMoments {
    double log_zeta = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};
LocalMoments local_moments(const LocalModel& model, double z);

/// Z(z) = z zeta'(z) / zeta(z).
double saddle_z(const LocalModel& model, double z);

/// Unique positive root of Z(z) = n. Throws std::domain_error for n outside
/// (0, n_max) and NumericalError when bracketing fails.
double solve_z0(const LocalModel& model, double n);

SaddleSolution beta_family(const LocalModel& model, double n);

/// zeta'(1)/zeta(1) for finite models, absent otherwise.
std::optional<double> n_star(const LocalModel& model);

/// V beta(n) - ln(V)/2 + ln alpha(n).
double ln_dim_asymptotic(const LocalModel& model, std::size_t V, double n);

}  // namespace page_entropy
