#include <doctest.h>

#include <cmath>

#include "page_entropy/local_model.hpp"

using namespace page_entropy;

namespace {

std::vector<BigDim> ints(std::initializer_list<unsigned long> v) {
    std::vector<BigDim> out;
    for (auto x : v) out.emplace_back(x);
    return out;
}

void check_zeta(const ZetaValues& v, double z0, double z1, double z2, double eps = 1e-14) {
    CHECK(v.zeta == doctest::Approx(z0).epsilon(eps));
    CHECK(v.zeta1 == doctest::Approx(z1).epsilon(eps));
    CHECK(v.zeta2 == doctest::Approx(z2).epsilon(eps));
}

}  // namespace

TEST_CASE("eval_zeta examples") {
    check_zeta(catalog("fermions").eval_zeta(1.0), 2, 1, 0);
    check_zeta(catalog("bosons").eval_zeta(0.5), 2, 4, 16);
    check_zeta(catalog("spin_j", 1).eval_zeta(1.0), 3, 3, 2);
    check_zeta(catalog("bosons").eval_zeta_series(0.5), 2, 4, 16, 1e-12);
    CHECK_THROWS_WITH_AS(catalog("bosons").eval_zeta(1.0), doctest::Contains("outside radius of convergence"),
                         std::domain_error);
    CHECK_THROWS_AS(catalog("bosons_2species_ordered").eval_zeta(0.6), std::domain_error);
    CHECK_NOTHROW(catalog("fermions").eval_zeta(50.0));
}

TEST_CASE("catalog entries") {
    const auto f = catalog("fermions");
    CHECK(f.n_max() == 1u);
    CHECK(std::isinf(f.radius()));
    CHECK(f.coefficients(3) == ints({1, 1, 0}));

    CHECK(catalog("hardcore_bosons_2species").coefficients(2) == ints({1, 2}));

    const auto b = catalog("bosons");
    CHECK(!b.n_max());
    CHECK(b.radius() == 1.0);
    CHECK(b.coefficients(4) == ints({1, 1, 1, 1}));

    CHECK(catalog("bosons_2species_unordered").coefficients(4) == ints({1, 2, 3, 4}));

    const auto e = catalog("bosons_2species_ordered");
    CHECK(e.radius() == 0.5);
    CHECK(e.coefficients(4) == ints({1, 2, 4, 8}));
    check_zeta(e.eval_zeta(0.25), 2, 8, 64);

    const auto s1 = catalog("spin_j", 1);
    CHECK(s1.n_max() == 2u);
    CHECK(s1.coefficients(3) == ints({1, 1, 1}));
    CHECK(catalog("spin_j", 1.5).n_max() == 3u);
    CHECK(catalog("capped_bosons", 3).coefficients(5) == ints({1, 1, 1, 1, 0}));

    CHECK_THROWS_AS(catalog("anyons"), std::invalid_argument);
    CHECK_THROWS_AS(catalog("spin_j", 0.3), std::invalid_argument);
    CHECK_THROWS_AS(catalog("spin_j"), std::invalid_argument);
    CHECK_THROWS_AS(catalog("capped_bosons", -1), std::invalid_argument);
    CHECK_THROWS_AS(catalog("fermions", 2), std::invalid_argument);
}

TEST_CASE("model invariants are enforced") {
    CHECK_THROWS_AS(LocalModel::finite(ints({0, 1}), "no vacuum"), std::invalid_argument);
    CHECK_THROWS_AS(LocalModel::finite(ints({1}), "no particles"), std::invalid_argument);
    CHECK_THROWS_AS(catalog("capped_bosons", 0), std::invalid_argument);
    // a_k = 3^k declared with R = 1/2 violates a_k = O(R^-k)
    auto fast = [](std::size_t n) {
        std::vector<BigDim> a(n);
        for (std::size_t k = 0; k < n; ++k) a[k] = pow(BigDim(3), k);
        return a;
    };
    CHECK_THROWS_AS(LocalModel::from_rule(fast, 0.5, "too fast"), std::invalid_argument);
    CHECK_NOTHROW(LocalModel::from_rule(fast, 1.0 / 3.0, "ok"));
    CHECK_THROWS_AS(LocalModel::from_rule(fast, 1.5, "bad radius"), std::invalid_argument);
    // Degenerate vacuum is allowed
    CHECK_NOTHROW(LocalModel::finite(ints({2, 1}), "two vacua"));
}

TEST_CASE("series agrees with closed forms") {
    for (const char* name : {"bosons", "bosons_2species_unordered", "bosons_2species_ordered"}) {
        const auto m = catalog(name);
        for (int i = 1; i <= 50; ++i) {
            const double z = 0.95 * m.radius() * i / 51.0;
            const auto c = m.eval_zeta(z);
            const auto s = m.eval_zeta_series(z);
            CHECK(s.zeta == doctest::Approx(c.zeta).epsilon(1e-12));
            CHECK(s.zeta1 == doctest::Approx(c.zeta1).epsilon(1e-12));
            CHECK(s.zeta2 == doctest::Approx(c.zeta2).epsilon(1e-12));
        }
    }
    // A rule without closed form falls back to the series
    const auto plain = LocalModel::from_rule([](std::size_t n) { return std::vector<BigDim>(n, BigDim(1)); }, 1.0, "rule");
    CHECK(!plain.has_closed_form());
    check_zeta(plain.eval_zeta(0.5), 2, 4, 16, 1e-12);
}

TEST_CASE("product and power") {
    const auto fb = product({catalog("fermions"), catalog("bosons")});
    CHECK(fb.coefficients(5) == ints({1, 2, 2, 2, 2}));
    CHECK(!fb.n_max());
    CHECK(fb.radius() == 1.0);
    CHECK(fb.has_closed_form());
    const double z = 0.3;
    CHECK(fb.eval_zeta(z).zeta == doctest::Approx((1 + z) / (1 - z)));

    CHECK(product({catalog("fermions")}).coefficients(2) == ints({1, 1}));
    const auto ff = product({catalog("fermions"), catalog("fermions")});
    CHECK(ff.coefficients(3) == ints({1, 2, 1}));
    CHECK(ff.n_max() == 2u);

    CHECK(power(catalog("fermions"), 2).coefficients(3) == ints({1, 2, 1}));
    CHECK(power(catalog("bosons"), 2).coefficients(64) == catalog("bosons_2species_unordered").coefficients(64));
    CHECK(power(catalog("spin_j", 1), 1).coefficients(3) == ints({1, 1, 1}));
    CHECK_THROWS_AS(power(catalog("fermions"), 0), std::invalid_argument);

    const auto a = catalog("spin_j", 1), b = catalog("bosons"), c = catalog("bosons_2species_ordered");
    CHECK(product({a, b}).coefficients(64) == product({b, a}).coefficients(64));
    CHECK(product({product({a, b}), c}).coefficients(64) == product({a, product({b, c})}).coefficients(64));
    CHECK(power(a, 4).coefficients(64) == product({a, a, a, a}).coefficients(64));
    CHECK(power(b, 3).coefficients(64) == product({b, b, b}).coefficients(64));
    CHECK(product({a, c}).radius() == 0.5);
}

TEST_CASE("shift_charges") {
    const auto s = shift_charges(-1, ints({1, 1, 1}));
    CHECK(s.coefficients(3) == ints({1, 1, 1}));
    CHECK(s.charge_offset() == -1);
    const auto f = shift_charges(0, ints({1, 1}));
    CHECK(f.coefficients(2) == catalog("fermions").coefficients(2));
    CHECK(f.charge_offset() == 0);
    const auto sym = shift_charges(-2, ints({1, 3, 5, 3, 1}));
    auto c = sym.coefficients(5);
    CHECK(std::equal(c.begin(), c.end(), c.rbegin()));
    CHECK_THROWS_AS(shift_charges(std::nullopt, ints({1, 1})), std::invalid_argument);
}

TEST_CASE("expressions and JSON round trip") {
    CHECK(parse_model("spin_j(1)").coefficients(3) == ints({1, 1, 1}));
    CHECK(parse_model("product(fermions, fermions)").coefficients(3) == ints({1, 2, 1}));
    CHECK(parse_model("power(bosons,2)").coefficients(5) == ints({1, 2, 3, 4, 5}));
    CHECK(parse_model("[1,2,1]").n_max() == 2u);
    CHECK(parse_model("spin_j(1/2)").coefficients(2) == ints({1, 1}));
    CHECK_THROWS_AS(parse_model("spin_j(1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model("power(fermions,0)"), std::invalid_argument);

    for (const char* expr : {"fermions", "bosons", "product(fermions,bosons)", "capped_bosons(3)",
                             "bosons_2species_ordered", "power(spin_j(1),2)"}) {
        const auto m = parse_model(expr);
        const auto back = model_from_json(model_to_json(m));
        CHECK(back.coefficients(64) == m.coefficients(64));
        CHECK(back.n_max() == m.n_max());
        CHECK(back.label() == m.label());
    }
    const auto charged = model_from_json(R"({"label":"spin1 charges","charge_min":-1,"coefficients":[1,1,1]})");
    CHECK(charged.charge_offset() == -1);
    CHECK_THROWS_AS(model_from_json(R"({"n_max":null,"coefficients":[1,1,1]})"), std::invalid_argument);
    CHECK_THROWS_AS(model_from_json(R"({"rule":"bosons","coefficients":[1,2]})"), std::invalid_argument);
    CHECK_THROWS_AS(model_from_json(R"({"n_max":2,"coefficients":[1,1]})"), std::invalid_argument);
}
