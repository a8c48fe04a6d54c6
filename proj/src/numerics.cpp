#include "page_entropy/numerics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace page_entropy {

namespace {

constexpr double kLn2 = 0.693147180559945309417232121458;
constexpr double kPiSquaredOver6 = 1.64493406684822643647241516665;
constexpr double kInvSqrtPi = 0.564189583547756286948079451561;

// Below this argument the exact recurrence is used, above it the asymptotic
// series (truncation error < 1e-16 at x = 17).
constexpr unsigned long kSeriesThreshold = 16;

// 1/(d+1) and ln(d+1) for d >= kSeriesThreshold.
struct Reciprocal {
    double inv;
    double log;
};

Reciprocal reciprocal_of_successor(const BigDim& d) {
    if (d.bit_length() <= 53) {
        const double x = d.to_double() + 1.0;
        return {1.0 / x, std::log(x)};
    }
    // d + 1 and d are indistinguishable at double precision here.
    const double l = ln_big(d);
    return {std::exp(-l), l};
}

}  // namespace

BigDim::BigDim(mpz_class v) : value_(std::move(v)) {
    if (sgn(value_) < 0) throw std::domain_error("negative dimension");
}

BigDim BigDim::from_string(std::string_view decimal) {
    mpz_class v;
    if (decimal.empty() || v.set_str(std::string(decimal), 10) != 0)
        throw std::invalid_argument("not a decimal integer: '" + std::string(decimal) + "'");
    return BigDim(std::move(v));
}

bool BigDim::fits_u64() const { return bit_length() <= 64; }

std::uint64_t BigDim::to_u64() const {
    if (!fits_u64()) throw std::overflow_error("dimension does not fit in 64 bits");
    return mpz_get_ui(value_.get_mpz_t());
}

double BigDim::to_double() const {
    if (bit_length() > 1024) return std::numeric_limits<double>::infinity();
    return mpz_get_d(value_.get_mpz_t());
}

std::size_t BigDim::bit_length() const {
    if (is_zero()) return 0;
    return mpz_sizeinbase(value_.get_mpz_t(), 2);
}

std::string BigDim::to_string() const { return value_.get_str(10); }

BigDim operator-(const BigDim& a, const BigDim& b) {
    if (a <= b) return BigDim{};
    return BigDim(mpz_class(a.value_ - b.value_));
}

BigDim pow(const BigDim& base, unsigned long exponent) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.raw().get_mpz_t(), exponent);
    return BigDim(std::move(r));
}

BigDim binomial(unsigned long n, unsigned long k) {
    if (k > n) return BigDim{};
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return BigDim(std::move(r));
}

double ln_big(const BigDim& d) {
    if (d.is_zero()) throw std::domain_error("log of zero dimension");
    const std::size_t bits = d.bit_length();
    if (bits <= 64) return std::log(static_cast<double>(d.to_u64()));
    const std::size_t shift = bits - 64;
    mpz_class top;
    mpz_fdiv_q_2exp(top.get_mpz_t(), d.raw().get_mpz_t(), shift);
    return std::log(static_cast<double>(mpz_get_ui(top.get_mpz_t()))) +
           static_cast<double>(shift) * kLn2;
}

double ratio(const BigDim& num, const BigDim& den) {
    if (den.is_zero()) throw std::domain_error("ratio with zero denominator");
    if (num.is_zero()) return 0.0;
    if (num.bit_length() <= 53 && den.bit_length() <= 53) return num.to_double() / den.to_double();
    // Scale so the integer quotient carries 64 significant bits.
    const long k = static_cast<long>(den.bit_length()) - static_cast<long>(num.bit_length()) + 64;
    mpz_class q;
    if (k >= 0) {
        mpz_class shifted;
        mpz_mul_2exp(shifted.get_mpz_t(), num.raw().get_mpz_t(), static_cast<unsigned long>(k));
        mpz_tdiv_q(q.get_mpz_t(), shifted.get_mpz_t(), den.raw().get_mpz_t());
    } else {
        mpz_class shifted;
        mpz_mul_2exp(shifted.get_mpz_t(), den.raw().get_mpz_t(), static_cast<unsigned long>(-k));
        mpz_tdiv_q(q.get_mpz_t(), num.raw().get_mpz_t(), shifted.get_mpz_t());
    }
    return std::ldexp(mpz_get_d(q.get_mpz_t()), static_cast<int>(-k));
}

double digamma_of_dim(const BigDim& d) {
    if (d < BigDim(kSeriesThreshold)) {
        double s = -kEulerGamma;
        for (unsigned long k = 1, n = d.to_u64(); k <= n; ++k) s += 1.0 / static_cast<double>(k);
        return s;
    }
    const auto [inv, lnx] = reciprocal_of_successor(d);
    const double t = inv * inv;
    // ln x - 1/(2x) - sum B_2k / (2k x^2k)
    const double series =
        t * (1.0 / 12 -
             t * (1.0 / 120 -
                  t * (1.0 / 252 - t * (1.0 / 240 - t * (1.0 / 132 - t * (691.0 / 32760 - t / 12))))));
    return lnx - 0.5 * inv - series;
}

double trigamma_of_dim(const BigDim& d) {
    if (d < BigDim(kSeriesThreshold)) {
        double s = kPiSquaredOver6;
        for (unsigned long k = 1, n = d.to_u64(); k <= n; ++k) {
            const double kk = static_cast<double>(k);
            s -= 1.0 / (kk * kk);
        }
        return s;
    }
    return reciprocal_of_successor(d).inv * (1.0 + scaled_trigamma_excess(d));
}

double scaled_trigamma_excess(const BigDim& d) {
    if (d < BigDim(kSeriesThreshold)) {
        return (d.to_double() + 1.0) * trigamma_of_dim(d) - 1.0;
    }
    const double inv = reciprocal_of_successor(d).inv;
    const double t = inv * inv;
    // x Psi'(x) - 1 = 1/(2x) + 1/(6x^2) - 1/(30x^4) + 1/(42x^6) - ...
    return 0.5 * inv +
           t * (1.0 / 6 -
                t * (1.0 / 30 -
                     t * (1.0 / 42 - t * (1.0 / 30 - t * (5.0 / 66 - t * (691.0 / 2730 - t * 7.0 / 6))))));
}

double erfc(double x) {
    if (std::isnan(x)) return x;
    if (x >= 30.0) return 0.0;
    if (x <= -30.0) return 2.0;
    return std::erfc(x);
}

double erfcx(double x) {
    if (x <= 5.0) return std::exp(x * x) * std::erfc(x);
    if (std::isinf(x)) return 0.0;
    // exp(x^2) erfc(x) = 1/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    double tail = x;
    for (int k = 60; k >= 1; --k) tail = x + (0.5 * k) / tail;
    return kInvSqrtPi / tail;
}

double exp_times_erfc(double a, double x) {
    if (x > 0.0) return std::exp(a - x * x) * erfcx(x);
    return std::exp(a) * erfc(x);
}

}  // namespace page_entropy
