#include "page_entropy/local_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace page_entropy {

namespace {

constexpr std::size_t kValidationTerms = 512;
constexpr std::size_t kMaxSeriesTerms = 1'000'000;
constexpr double kSeriesTolerance = 1e-14;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<BigDim> convolve(const std::vector<BigDim>& a, const std::vector<BigDim>& b, std::size_t count) {
    std::vector<BigDim> out(count);
    for (std::size_t i = 0; i < std::min(a.size(), count); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size() && i + j < count; ++j) {
            if (b[j].is_zero()) continue;
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

ZetaValues polynomial_zeta(const std::vector<BigDim>& a, double z) {
    ZetaValues v;
    for (std::size_t k = a.size(); k-- > 0;) {
        const double c = a[k].to_double();
        v.zeta2 = v.zeta2 * z + 2.0 * v.zeta1;
        v.zeta1 = v.zeta1 * z + v.zeta;
        v.zeta = v.zeta * z + c;
    }
    return v;
}

double scaled_coefficient(const BigDim& a, std::size_t k, double log_radius) {
    if (a.is_zero()) return 0.0;
    return std::exp(ln_big(a) + static_cast<double>(k) * log_radius);
}

std::string join_label(std::span<const LocalModel> models) {
    std::string s;
    for (const auto& m : models) {
        if (!s.empty()) s += " x ";
        s += m.label();
    }
    return s;
}

bool is_half_integer(double j) {
    const double twice = 2.0 * j;
    return std::isfinite(j) && j > 0.0 && std::abs(twice - std::round(twice)) < 1e-12;
}

std::string format_param(double p) {
    if (std::abs(p - std::round(p)) < 1e-12) return std::to_string(static_cast<long>(std::llround(p)));
    std::string s = std::to_string(p);
    while (!s.empty() && s.back() == '0') s.pop_back();
    return s;
}

}  // namespace

LocalModel LocalModel::finite(std::vector<BigDim> coefficients, std::string label) {
    while (coefficients.size() > 1 && coefficients.back().is_zero()) coefficients.pop_back();
    if (coefficients.empty()) throw std::invalid_argument("local model needs at least one coefficient");
    LocalModel m;
    m.label_ = std::move(label);
    m.n_max_ = coefficients.size() - 1;
    m.radius_ = kInf;
    std::string expr = "[";
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        if (k) expr += ",";
        expr += coefficients[k].to_string();
    }
    m.expression_ = expr + "]";
    m.finite_coefficients_ = std::move(coefficients);
    m.validate();
    return m;
}

LocalModel LocalModel::from_rule(CoefficientRule rule, double radius, std::string label, std::string expression,
                                 std::optional<ZetaEvaluator> closed_form) {
    if (!(radius > 0.0 && radius <= 1.0))
        throw std::invalid_argument("radius of convergence of an infinite model must lie in (0, 1]");
    LocalModel m;
    m.label_ = std::move(label);
    m.expression_ = std::move(expression);
    m.radius_ = radius;
    m.rule_ = std::make_shared<const CoefficientRule>(std::move(rule));
    if (closed_form) m.closed_form_ = std::make_shared<const ZetaEvaluator>(std::move(*closed_form));
    m.validate();
    return m;
}

void LocalModel::validate() const {
    const auto a = coefficients(kValidationTerms);
    if (a[0].is_zero()) throw std::invalid_argument("a_0 must be >= 1 (at least one vacuum state)");
    if (std::all_of(a.begin() + 1, a.end(), [](const BigDim& x) { return x.is_zero(); }))
        throw std::invalid_argument("model admits no particles (all a_k = 0 for k > 0)");
    if (is_finite()) return;
    // a_k = O(R^-k), checked with a polynomial allowance over the first terms.
    const double log_r = std::log(radius_);
    for (std::size_t k = 1; k < a.size(); ++k) {
        if (a[k].is_zero()) continue;
        const double excess = ln_big(a[k]) + static_cast<double>(k) * log_r;
        const double allowance = 16.0 + 4.0 * std::log1p(static_cast<double>(k)) + 1e-2 * static_cast<double>(k);
        if (excess > allowance)
            throw std::invalid_argument("coefficients grow faster than the declared radius allows (k = " +
                                        std::to_string(k) + ")");
    }
}

std::vector<BigDim> LocalModel::coefficients(std::size_t count) const {
    if (is_finite()) {
        std::vector<BigDim> out(count);
        std::copy_n(finite_coefficients_.begin(), std::min(count, finite_coefficients_.size()), out.begin());
        return out;
    }
    auto out = (*rule_)(count);
    if (out.size() != count) throw std::logic_error("coefficient rule returned the wrong number of terms");
    return out;
}

BigDim LocalModel::coefficient(std::size_t k) const {
    if (is_finite()) return k < finite_coefficients_.size() ? finite_coefficients_[k] : BigDim{};
    return coefficients(k + 1).back();
}

ZetaValues LocalModel::eval_zeta(double z) const {
    if (!(z >= 0.0) || (!is_finite() && z >= radius_))
        throw std::domain_error("z = " + std::to_string(z) + " outside radius of convergence");
    if (closed_form_) return (*closed_form_)(z);
    return eval_zeta_series(z);
}

ZetaValues LocalModel::eval_zeta_series(double z) const {
    if (!(z >= 0.0) || (!is_finite() && z >= radius_))
        throw std::domain_error("z = " + std::to_string(z) + " outside radius of convergence");
    if (is_finite()) return polynomial_zeta(finite_coefficients_, z);

    // Work with b_k = a_k R^k and u = z/R so huge a_k never materialize.
    const double u = z / radius_;
    const double log_r = std::log(radius_);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    double upow = 1.0;
    std::size_t k = 0;
    std::vector<double> recent;  // envelope of the last few scaled coefficients
    for (std::size_t chunk = 256; chunk <= 2 * kMaxSeriesTerms; chunk *= 2) {
        const auto a = coefficients(std::min(chunk, kMaxSeriesTerms));
        for (; k < a.size(); ++k) {
            const double b = scaled_coefficient(a[k], k, log_r);
            const double kk = static_cast<double>(k);
            const double term = b * upow;
            s0 += term;
            s1 += kk * term;
            s2 += kk * (kk - 1.0) * term;
            recent.push_back(b);
            if (recent.size() > 16) recent.erase(recent.begin());
            if (k >= 8) {
                const double envelope = *std::max_element(recent.begin(), recent.end()) * upow / (1.0 - u);
                const double k2 = (kk + 1.0) * (kk + 1.0);
                if (envelope < kSeriesTolerance * s0 && envelope * (kk + 1.0) < kSeriesTolerance * s1 &&
                    envelope * k2 < kSeriesTolerance * std::max(s2, 1e-300)) {
                    return {s0, s1 / z, s2 / (z * z)};
                }
            }
            upow *= u;
            if (upow == 0.0) return {s0, z > 0 ? s1 / z : a[1].to_double(), z > 0 ? s2 / (z * z) : 2.0 * a[2].to_double()};
        }
        if (a.size() >= kMaxSeriesTerms) break;
    }
    throw NumericalError("series for zeta did not converge within 1e6 terms at z = " + std::to_string(z));
}

LocalModel LocalModel::with_label(std::string label) const {
    LocalModel m = *this;
    m.label_ = std::move(label);
    return m;
}

LocalModel LocalModel::with_charge_offset(long offset) const {
    LocalModel m = *this;
    m.charge_offset_ = offset;
    return m;
}

LocalModel catalog(std::string_view name, std::optional<double> param) {
    auto need_no_param = [&] {
        if (param) throw std::invalid_argument("model '" + std::string(name) + "' takes no parameter");
    };
    if (name == "fermions") {
        need_no_param();
        return LocalModel::finite({1, 1}, "fermions");
    }
    if (name == "hardcore_bosons_2species") {
        need_no_param();
        return LocalModel::finite({1, 2}, "hardcore_bosons_2species");
    }
    if (name == "bosons") {
        need_no_param();
        return LocalModel::from_rule([](std::size_t n) { return std::vector<BigDim>(n, BigDim(1)); }, 1.0,
                                     "bosons", "bosons", [](double z) {
                                         const double w = 1.0 / (1.0 - z);
                                         return ZetaValues{w, w * w, 2.0 * w * w * w};
                                     });
    }
    if (name == "bosons_2species_unordered") {
        need_no_param();
        return LocalModel::from_rule(
            [](std::size_t n) {
                std::vector<BigDim> a(n);
                for (std::size_t k = 0; k < n; ++k) a[k] = BigDim(k + 1);
                return a;
            },
            1.0, "bosons_2species_unordered", "bosons_2species_unordered", [](double z) {
                const double w = 1.0 / (1.0 - z);
                return ZetaValues{w * w, 2.0 * w * w * w, 6.0 * w * w * w * w};
            });
    }
    if (name == "bosons_2species_ordered") {
        need_no_param();
        return LocalModel::from_rule(
            [](std::size_t n) {
                std::vector<BigDim> a(n);
                for (std::size_t k = 0; k < n; ++k) a[k] = pow(BigDim(2), k);
                return a;
            },
            0.5, "bosons_2species_ordered", "bosons_2species_ordered", [](double z) {
                const double w = 1.0 / (1.0 - 2.0 * z);
                return ZetaValues{w, 2.0 * w * w, 8.0 * w * w * w};
            });
    }
    if (name == "spin_j") {
        if (!param) throw std::invalid_argument("spin_j needs the spin j");
        if (!is_half_integer(*param)) throw std::invalid_argument("spin j must be a positive half-integer");
        const auto levels = static_cast<std::size_t>(std::llround(2.0 * *param)) + 1;
        auto m = LocalModel::finite(std::vector<BigDim>(levels, BigDim(1)), "spin_j(" + format_param(*param) + ")");
        return m;
    }
    if (name == "capped_bosons") {
        if (!param) throw std::invalid_argument("capped_bosons needs n_max");
        if (*param < 0 || std::abs(*param - std::round(*param)) > 1e-12)
            throw std::invalid_argument("capped_bosons n_max must be a nonnegative integer");
        const auto levels = static_cast<std::size_t>(std::llround(*param)) + 1;
        return LocalModel::finite(std::vector<BigDim>(levels, BigDim(1)),
                                  "capped_bosons(" + format_param(*param) + ")");
    }
    throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

LocalModel product(std::span<const LocalModel> models) {
    if (models.empty()) throw std::invalid_argument("product of zero models");
    if (models.size() == 1) return models.front();

    std::string expr = "product(";
    for (std::size_t i = 0; i < models.size(); ++i) expr += (i ? "," : "") + models[i].expression();
    expr += ")";
    const std::string label = join_label(models);

    const bool all_finite = std::all_of(models.begin(), models.end(), [](const auto& m) { return m.is_finite(); });
    if (all_finite) {
        std::size_t n_max = 0;
        for (const auto& m : models) n_max += *m.n_max();
        std::vector<BigDim> acc = models[0].coefficients(n_max + 1);
        for (std::size_t i = 1; i < models.size(); ++i)
            acc = convolve(acc, models[i].coefficients(n_max + 1), n_max + 1);
        auto result = LocalModel::finite(std::move(acc), label);
        return result;
    }

    std::vector<LocalModel> factors(models.begin(), models.end());
    double radius = 1.0;
    for (const auto& m : factors) radius = std::min(radius, m.radius());
    auto rule = [factors](std::size_t count) {
        std::vector<BigDim> acc = factors[0].coefficients(count);
        for (std::size_t i = 1; i < factors.size(); ++i) acc = convolve(acc, factors[i].coefficients(count), count);
        return acc;
    };
    std::optional<LocalModel::ZetaEvaluator> closed;
    const bool composable =
        std::all_of(factors.begin(), factors.end(), [](const auto& m) { return m.is_finite() || m.has_closed_form(); });
    if (composable) {
        closed = [factors](double z) {
            ZetaValues acc{1.0, 0.0, 0.0};
            for (const auto& m : factors) {
                const ZetaValues f = m.eval_zeta(z);
                acc = ZetaValues{acc.zeta * f.zeta, acc.zeta1 * f.zeta + acc.zeta * f.zeta1,
                                 acc.zeta2 * f.zeta + 2.0 * acc.zeta1 * f.zeta1 + acc.zeta * f.zeta2};
            }
            return acc;
        };
    }
    return LocalModel::from_rule(std::move(rule), radius, label, expr, std::move(closed));
}

LocalModel product(std::initializer_list<LocalModel> models) {
    return product(std::span<const LocalModel>(models.begin(), models.size()));
}

LocalModel power(const LocalModel& model, unsigned m) {
    if (m == 0) throw std::invalid_argument("power needs m >= 1");
    if (m == 1) return model;
    std::vector<LocalModel> copies(m, model);
    auto p = product(std::span<const LocalModel>(copies));
    const std::string expr = "power(" + model.expression() + "," + std::to_string(m) + ")";
    if (p.is_finite()) {
        auto out = LocalModel::finite(p.coefficients(*p.n_max() + 1), model.label() + "^" + std::to_string(m));
        return out;
    }
    return LocalModel::from_rule([p](std::size_t n) { return p.coefficients(n); }, p.radius(),
                                 model.label() + "^" + std::to_string(m), expr,
                                 p.has_closed_form() ? std::optional<LocalModel::ZetaEvaluator>(
                                                           [p](double z) { return p.eval_zeta(z); })
                                                     : std::nullopt);
}

LocalModel shift_charges(std::optional<long> k_min, std::vector<BigDim> coefficients) {
    if (!k_min) throw std::invalid_argument("charge window unbounded below is unsupported: the entropy diverges");
    std::string label = "charges[" + std::to_string(*k_min) + ".." +
                        std::to_string(*k_min + static_cast<long>(coefficients.size()) - 1) + "]";
    return LocalModel::finite(std::move(coefficients), std::move(label)).with_charge_offset(*k_min);
}

// ---- expression parser ------------------------------------------------------

namespace {

class ExpressionParser {
public:
    explicit ExpressionParser(std::string_view text) : text_(text) {}

    LocalModel parse() {
        LocalModel m = parse_model();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters");
        return m;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("model expression '" + std::string(text_) + "': " + what + " at offset " +
                                    std::to_string(pos_));
    }
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    std::string identifier() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_) fail("expected a model name");
        return std::string(text_.substr(start, pos_ - start));
    }
    double number() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' || text_[pos_] == '-' ||
                text_[pos_] == '/'))
            ++pos_;
        const std::string tok(text_.substr(start, pos_ - start));
        if (tok.empty()) fail("expected a number");
        try {
            if (auto slash = tok.find('/'); slash != std::string::npos)
                return std::stod(tok.substr(0, slash)) / std::stod(tok.substr(slash + 1));
            return std::stod(tok);
        } catch (const std::exception&) {
            fail("bad number '" + tok + "'");
        }
    }
    BigDim integer() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a nonnegative integer");
        return BigDim::from_string(text_.substr(start, pos_ - start));
    }

    LocalModel parse_model() {
        if (accept('[')) {
            std::vector<BigDim> coeffs{integer()};
            while (accept(',')) coeffs.push_back(integer());
            expect(']');
            return LocalModel::finite(std::move(coeffs), "custom");
        }
        const std::string name = identifier();
        if (name == "product") {
            expect('(');
            std::vector<LocalModel> factors{parse_model()};
            while (accept(',')) factors.push_back(parse_model());
            expect(')');
            return product(std::span<const LocalModel>(factors));
        }
        if (name == "power") {
            expect('(');
            LocalModel base = parse_model();
            expect(',');
            const double m = number();
            expect(')');
            if (m < 1 || std::abs(m - std::round(m)) > 1e-12) fail("power exponent must be a positive integer");
            return power(base, static_cast<unsigned>(std::llround(m)));
        }
        std::optional<double> param;
        if (accept('(')) {
            param = number();
            expect(')');
        }
        return catalog(name, param);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

LocalModel parse_model(std::string_view expression) { return ExpressionParser(expression).parse(); }

// ---- JSON -------------------------------------------------------------------

std::string model_to_json(const LocalModel& model) {
    nlohmann::json j;
    j["label"] = model.label();
    const std::size_t count = model.is_finite() ? *model.n_max() + 1 : 64;
    std::vector<std::string> coeffs;
    for (const auto& a : model.coefficients(count)) coeffs.push_back(a.to_string());
    j["coefficients"] = coeffs;
    if (model.is_finite()) {
        j["n_max"] = *model.n_max();
        j["radius"] = nullptr;
    } else {
        j["n_max"] = nullptr;
        j["radius"] = model.radius();
    }
    if (!model.expression().empty()) j["rule"] = model.expression();
    if (model.charge_offset() != 0) j["charge_offset"] = model.charge_offset();
    return j.dump(2);
}

LocalModel model_from_json(std::string_view json_text) {
    const auto j = nlohmann::json::parse(json_text);
    if (!j.is_object()) throw std::invalid_argument("model JSON must be an object");
    std::vector<BigDim> coeffs;
    if (j.contains("coefficients")) {
        for (const auto& c : j.at("coefficients")) {
            if (c.is_string()) coeffs.push_back(BigDim::from_string(c.get<std::string>()));
            else if (c.is_number_unsigned()) coeffs.push_back(BigDim(c.get<std::uint64_t>()));
            else throw std::invalid_argument("coefficients must be nonnegative integers");
        }
    }
    const long offset = j.value("charge_offset", 0L);
    const bool has_n_max = j.contains("n_max") && !j.at("n_max").is_null();

    std::optional<LocalModel> model;
    if (j.contains("rule") && j.at("rule").is_string()) {
        model = parse_model(j.at("rule").get<std::string>());
        const auto expected = model->coefficients(coeffs.size());
        if (!coeffs.empty() && expected != coeffs)
            throw std::invalid_argument("coefficients disagree with rule '" + j.at("rule").get<std::string>() + "'");
    } else if (j.contains("charge_min")) {
        model = shift_charges(j.at("charge_min").get<long>(), coeffs);
    } else {
        if (!has_n_max) throw std::invalid_argument("infinite model needs a 'rule' to extend its coefficients");
        const auto n_max = j.at("n_max").get<std::size_t>();
        if (coeffs.size() != n_max + 1)
            throw std::invalid_argument("finite model needs exactly n_max + 1 coefficients");
        model = LocalModel::finite(coeffs, j.value("label", std::string("custom")));
    }
    if (has_n_max && (!model->is_finite() || *model->n_max() != j.at("n_max").get<std::size_t>()))
        throw std::invalid_argument("n_max disagrees with the model's coefficients");
    if (j.contains("label") && j.at("label").is_string()) model = model->with_label(j.at("label").get<std::string>());
    if (offset != 0) model = model->with_charge_offset(offset);
    return *model;
}

}  // namespace page_entropy
