#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "page_entropy/dimensions.hpp"
#include "page_entropy/local_model.hpp"
#include "page_entropy/numerics.hpp"
#include "page_entropy/saddle.hpp"

namespace page_entropy {

/// V sites, N particles, subsystem A = V_A sites.
struct BipartitionSpec {
    std::size_t V = 0;
    std::size_t N = 0;
    std::size_t V_A = 0;

    double n() const { return static_cast<double>(N) / static_cast<double>(V); }
    double f() const { return static_cast<double>(V_A) / static_cast<double>(V); }
    std::size_t V_B() const { return V - V_A; }
    /// Inclusive N_A bounds allowed by the occupancy cap.
    std::pair<std::size_t, std::size_t> n_a_range(const LocalModel& model) const;
    /// Throws std::invalid_argument on V = 0, V_A > V or N > V n_max.
    void validate(const LocalModel& model) const;
};

/// One N_A block of the sector sum.
struct SectorTerm {
    std::size_t N_A = 0;
    BigDim d_A, d_B;
    double rho = 0.0;
    double phi = 0.0;
    double chi = 0.0;
};

/// phi of the average-entropy sum for one block.
double phi_term(const BigDim& d_A, const BigDim& d_B, const BigDim& d_N);
/// chi of the variance sum for one block.
double chi_term(const BigDim& d_A, const BigDim& d_B, const BigDim& d_N);

struct VarianceValue {
    double value = 0.0;      ///< may underflow to 0 for large V
    double log_value = 0.0;  ///< ln(value), -inf when the bracket vanishes
    double bracket = 0.0;    ///< sum rho (phi^2 + chi) - (sum rho phi)^2
};

struct ExactStatistics {
    double mean = 0.0;
    VarianceValue variance;
    double weight_sum = 0.0;
};

std::vector<SectorTerm> sector_terms(const LocalModel& model, const BipartitionSpec& spec);
/// Same from precomputed subsystem tables (A with V_A sites, B with V - V_A).
std::vector<SectorTerm> sector_terms(const DimensionTable& A, const DimensionTable& B, const BigDim& d_N,
                                     std::size_t N, std::pair<std::size_t, std::size_t> range);
ExactStatistics reduce_terms(const std::vector<SectorTerm>& terms, const BigDim& d_N);

double exact_average(const LocalModel& model, const BipartitionSpec& spec);
VarianceValue exact_variance(const LocalModel& model, const BipartitionSpec& spec);
ExactStatistics exact_statistics(const LocalModel& model, const BipartitionSpec& spec);

/// Gaussian approximation of V d_A d_B / d_N as a density in n_A.
double rho_weight(const LocalModel& model, const BipartitionSpec& spec, double n_A);

struct GaussianMoments {
    double M0 = 1.0, M1 = 0.0, M2 = 0.0;
    double M0_minus = 0.5, M1_minus = 0.0, M2_minus = 0.0;
    double M0_plus = 0.5, M1_plus = 0.0, M2_plus = 0.0;
};
GaussianMoments gaussian_moments(const LocalModel& model, const BipartitionSpec& spec);

/// <S_A> ~ a V + b sqrt(V) + c.
struct AsymptoticTerms {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    bool f_half = false;  ///< delta_{f,1/2} fired
    bool n_star = false;  ///< delta_{n,n*} fired
    double value = 0.0;
};

inline constexpr double kKroneckerTolerance = 1e-12;

/// f > 1/2 is mapped to 1 - f.
AsymptoticTerms asymptotic_average(const LocalModel& model, std::size_t V, double f, double n);
AsymptoticTerms asymptotic_average(const LocalModel& model, const BipartitionSpec& spec);

/// Smooth version of the asymptotic form in which the Kronecker deltas are
/// replaced by their erfc resolutions.
double resolved_average(const LocalModel& model, std::size_t V, double f, double n);

/// f beta(n_A/f) - (1-f) beta((n-n_A)/(1-f)).
double y_exponent(const LocalModel& model, double f, double n, double n_A);

struct NCrit {
    double value = 0.0;
    /// False when |f - 1/2| > 0.2, where the linearized forms are not trusted.
    bool within_window = true;
};
/// Density n_A at which d_A = d_B; throws NumericalError when beta'(n) ~ 0,
/// n ~ n* and f != 1/2 all hold at once.
NCrit n_crit(const LocalModel& model, double f, double n);

/// Resolution of delta_{f,1/2} delta_{n,n*}, in terms of beta(n*) and |beta''(n*)|.
double resolve_x1(double V, double f, double n, double n_star, double beta_star, double abs_beta2_star);
double resolve_x1(const LocalModel& model, std::size_t V, double f, double n);
/// Resolution of delta_{f,1/2} sqrt(V); beta1 must be nonzero.
double resolve_x2(double V, double f, double beta, double beta1, double beta2);
double resolve_x2(const LocalModel& model, std::size_t V, double f, double n);

/// Limits for f = 1/2 + Lambda_f / V^s and n = n* + Lambda_n / V^t.
double x1_powerlaw(double s, double t, double Lambda_f, double Lambda_n, double beta_star, double abs_beta2_star);
double x1_powerlaw(const LocalModel& model, double s, double t, double Lambda_f, double Lambda_n);
double x2_powerlaw(double s, double Lambda_f, double V, double beta, double beta1, double beta2);
double x2_powerlaw(const LocalModel& model, double n, double s, double Lambda_f, double V);

struct KroneckerResolution {
    double Lambda_f = 0.0;  ///< (f - 1/2) V, i.e. s = 1
    double Lambda_n = 0.0;  ///< (n - n*) sqrt(V), i.e. t = 1/2
    double s = 1.0;
    double t = 0.5;
    double X1 = 0.0;
    double X2 = 0.0;
};
KroneckerResolution resolve_kronecker(const LocalModel& model, std::size_t V, double f, double n);

struct AsymptoticVariance {
    double value = 0.0;
    double prefactor = 0.0;        ///< everything except exp(-beta V)
    double log_exponential = 0.0;  ///< -beta V
};
AsymptoticVariance asymptotic_variance(const LocalModel& model, std::size_t V, double f, double n);

double distinguishable_exact_average(std::size_t V, std::size_t N, std::size_t V_A);

/// n f V lnV - n (1-f) ln(1-f) V + sqrt(n/2pi) ln2 delta_{f,1/2} sqrt(V) lnV.
struct DistinguishableTerms {
    double v_log_v = 0.0;
    double v = 0.0;
    double sqrt_v_log_v = 0.0;
    double value = 0.0;
};
DistinguishableTerms distinguishable_asymptotic(std::size_t V, std::size_t N, std::size_t V_A);

struct EntropyReport {
    std::size_t V_A = 0;
    double f = 0.0;
    double exact_mean = 0.0;
    AsymptoticTerms asym;
    double resolved_mean = 0.0;
    VarianceValue exact_variance;
    AsymptoticVariance asym_variance;
};

/// One report per V_A = 0..V. Asymptotic columns are 0 at V_A in {0, V} and
/// when the density sits on a boundary.
std::vector<EntropyReport> page_curve(const LocalModel& model, std::size_t V, std::size_t N, unsigned threads = 1);

}  // namespace page_entropy
