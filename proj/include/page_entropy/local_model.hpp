#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "page_entropy/numerics.hpp"

namespace page_entropy {

/// zeta(z) = sum_k a_k z^k and its first two derivatives.
struct ZetaValues {
    double zeta = 0.0;
    double zeta1 = 0.0;
    double zeta2 = 0.0;
};

/// Local Hilbert space of one site, described by a_k = number of states
/// holding exactly k particles.
///
/// Immutable after construction. Infinite-support models carry a coefficient
/// rule and a declared radius of convergence R <= 1; finite models carry
/// their coefficient list and behave as polynomials.
class LocalModel {
public:
    /// Returns a_0 .. a_{count-1}.
    using CoefficientRule = std::function<std::vector<BigDim>(std::size_t count)>;
    using ZetaEvaluator = std::function<ZetaValues(double z)>;

    static LocalModel finite(std::vector<BigDim> coefficients, std::string label);
    /// `expression` is the catalog expression that rebuilds this model
    /// (used for serialization); it may be empty for ad-hoc rules.
    static LocalModel from_rule(CoefficientRule rule, double radius, std::string label,
                                std::string expression = {},
                                std::optional<ZetaEvaluator> closed_form = std::nullopt);

    const std::string& label() const { return label_; }
    const std::string& expression() const { return expression_; }
    std::optional<std::size_t> n_max() const { return n_max_; }
    bool is_finite() const { return n_max_.has_value(); }
    /// +inf for finite models.
    double radius() const { return radius_; }
    bool has_closed_form() const { return closed_form_ != nullptr; }
    /// Charge carried by the local state relabelled as k = 0.
    long charge_offset() const { return charge_offset_; }

    /// a_0 .. a_{count-1}; finite models are zero-padded past n_max.
    std::vector<BigDim> coefficients(std::size_t count) const;
    BigDim coefficient(std::size_t k) const;

    /// Closed form when available, truncated series otherwise.
    ZetaValues eval_zeta(double z) const;
    /// Always the truncated series (polynomial for finite models).
    ZetaValues eval_zeta_series(double z) const;

    LocalModel with_label(std::string label) const;
    LocalModel with_charge_offset(long offset) const;

private:
    LocalModel() = default;
    void validate() const;

    std::string label_;
    std::string expression_;
    std::optional<std::size_t> n_max_;
    double radius_ = 0.0;
    long charge_offset_ = 0;
    std::vector<BigDim> finite_coefficients_;
    std::shared_ptr<const CoefficientRule> rule_;
    std::shared_ptr<const ZetaEvaluator> closed_form_;
};

/// Catalog entries:
///   fermions, hardcore_bosons_2species, bosons, bosons_2species_unordered,
///   bosons_2species_ordered, spin_j (param j), capped_bosons (param n_max).
LocalModel catalog(std::string_view name, std::optional<double> param = std::nullopt);

/// Cauchy product of the coefficient sequences (zeta multiplies).
LocalModel product(std::span<const LocalModel> models);
LocalModel product(std::initializer_list<LocalModel> models);
LocalModel power(const LocalModel& model, unsigned m);

/// Maps a charge window k_min..k_min+len-1 onto particle numbers 0..len-1.
/// k_min absent means the window is unbounded below, which is rejected.
LocalModel shift_charges(std::optional<long> k_min, std::vector<BigDim> coefficients);

/// Parses catalog expressions such as `spin_j(1)`, `capped_bosons(3)`,
/// `product(fermions,bosons)`, `power(fermions,2)` or an explicit finite list
/// `[1,2,1]`.
LocalModel parse_model(std::string_view expression);

/// JSON document: {label, n_max|null, radius|null, coefficients, rule?, charge_offset?}.
std::string model_to_json(const LocalModel& model);
LocalModel model_from_json(std::string_view json_text);

}  // namespace page_entropy
