#include <doctest.h>

#include <cmath>
#include <numeric>

#include "page_entropy/entropy.hpp"
#include "page_entropy/haar_sampler.hpp"

using namespace page_entropy;

TEST_CASE("sector basis layout") {
    const auto m = catalog("spin_j", 1);
    const auto basis = build_sector_basis(m, {6, 6, 2});
    CHECK(basis.d_N == dim_fixed_n(m, 6, 6).to_u64());
    std::size_t offset = 0;
    for (const auto& b : basis.blocks) {
        CHECK(b.offset == offset);
        CHECK(b.d_A == dim_fixed_n(m, 2, b.N_A).to_u64());
        CHECK(b.d_B == dim_fixed_n(m, 4, 6 - b.N_A).to_u64());
        offset += b.d_A * b.d_B;
    }
    CHECK(offset == basis.d_N);
    CHECK(basis.d_A_total() == 9);
    CHECK(basis.d_B_total() == 10 + 16 + 19 + 16 + 10);
    CHECK_THROWS_AS(build_sector_basis(catalog("fermions"), {40, 20, 20}), InfeasibleError);
}

TEST_CASE("spectrum of reduced density matrices") {
    const auto basis = build_sector_basis(catalog("spin_j", 1), {7, 7, 3});
    for (std::uint64_t i = 0; i < 10; ++i) {
        const auto state = haar_state(basis, sample_key(5, i));
        CHECK(state.norm() == doctest::Approx(1.0).epsilon(1e-13));
        const auto spec = reduced_spectrum(basis, state);
        CHECK(std::accumulate(spec.begin(), spec.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        for (double l : spec) CHECK(l >= -1e-14);
        const double S = von_neumann(spec);
        CHECK(S >= 0.0);
        CHECK(S <= std::log(double(std::min(basis.d_A_total(), basis.d_B_total()))) + 1e-12);
        CHECK(S == sample_entropy(basis, sample_key(5, i)));
    }
    // A product state has zero entropy
    Eigen::VectorXd product = Eigen::VectorXd::Zero(basis.d_N);
    product(0) = 1.0;
    CHECK(von_neumann(reduced_spectrum(basis, product)) == 0.0);
}

TEST_CASE("Gram path agrees with the SVD path") {
    // The N_A = 4 block is 70 x 70, above the SVD cutoff
    const auto basis = build_sector_basis(catalog("fermions"), {16, 8, 8});
    const double S = sample_entropy(basis, 99);
    CHECK(std::isfinite(S));
    CHECK(S <= std::log(256.0) + 1e-12);
    const auto state = haar_state(basis, 99);
    Eigen::VectorXd real = state.real() / state.real().norm();
    const auto spec = reduced_spectrum(basis, real);
    CHECK(std::accumulate(spec.begin(), spec.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("determinism and thread independence") {
    const auto basis = build_sector_basis(catalog("fermions"), {8, 4, 4});
    const auto a = mc_average(basis, 200, 11, 1);
    const auto b = mc_average(basis, 200, 11, 4);
    const auto c = mc_average(basis, 200, 11, 1);
    CHECK(a.mean == b.mean);
    CHECK(a.variance == b.variance);
    CHECK(a.mean == c.mean);
    CHECK(a.mean != mc_average(basis, 200, 12, 1).mean);
    CHECK(sample_key(1, 0) != sample_key(1, 1));
    CHECK(sample_key(1, 0) != sample_key(2, 0));
    CHECK_THROWS_AS(mc_average(basis, 1, 1), std::invalid_argument);
}

TEST_CASE("sample mean matches the exact average") {
    const auto f = catalog("fermions");
    const BipartitionSpec spec{8, 4, 4};
    const auto s = mc_average(build_sector_basis(f, spec), 4000, 3, 2);
    const auto exact = exact_statistics(f, spec);
    CHECK(std::abs(s.mean - exact.mean) < 5 * s.sem);
    CHECK(std::abs(s.variance - exact.variance.value) < 5 * s.variance_sem);
}

TEST_CASE("moment accumulator") {
    MomentAccumulator whole, left, right;
    for (int i = 0; i < 100; ++i) {
        const double x = std::sin(i * 0.7) + 0.01 * i;
        whole.add(x);
        (i < 37 ? left : right).add(x);
    }
    left.merge(right);
    CHECK(left.count() == 100);
    CHECK(left.mean() == doctest::Approx(whole.mean()).epsilon(1e-14));
    CHECK(left.variance() == doctest::Approx(whole.variance()).epsilon(1e-13));
    const auto s = whole.summary(7);
    CHECK(s.sem == doctest::Approx(std::sqrt(whole.variance() / 100)).epsilon(1e-14));
    CHECK(s.seed == 7);
}
