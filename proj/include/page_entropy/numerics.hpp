#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace page_entropy {

/// A solver or evaluation failed to reach its target (bracket, overflow, ...).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The requested size is beyond what a dense or exact computation can handle.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact nonnegative Hilbert-space dimension. Sector dimensions grow like
/// e^{beta V}, so anything past V ~ 60 overflows 64-bit integers.
class BigDim {
public:
    BigDim() = default;
    BigDim(std::uint64_t v) : value_(static_cast<unsigned long>(v)) {}  // NOLINT: implicit by design of a number type
    explicit BigDim(mpz_class v);
    static BigDim from_string(std::string_view decimal);

    const mpz_class& raw() const { return value_; }

    bool is_zero() const { return sgn(value_) == 0; }
    bool fits_u64() const;
    std::uint64_t to_u64() const;  // throws std::overflow_error
    /// Exact below 2^53, correctly rounded to nearest below 2^1024, +inf above.
    double to_double() const;
    std::size_t bit_length() const;
    std::string to_string() const;

    BigDim& operator+=(const BigDim& o) { value_ += o.value_; return *this; }
    BigDim& operator*=(const BigDim& o) { value_ *= o.value_; return *this; }
    friend BigDim operator+(BigDim a, const BigDim& b) { return a += b; }
    friend BigDim operator*(BigDim a, const BigDim& b) { return a *= b; }
    /// Saturates at zero; dimensions never go negative.
    friend BigDim operator-(const BigDim& a, const BigDim& b);

    friend bool operator==(const BigDim& a, const BigDim& b) { return cmp(a.value_, b.value_) == 0; }
    friend std::strong_ordering operator<=>(const BigDim& a, const BigDim& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    mpz_class value_;
};

BigDim pow(const BigDim& base, unsigned long exponent);
BigDim binomial(unsigned long n, unsigned long k);

/// ln(d) from the bit length and the leading 64 bits of d.
double ln_big(const BigDim& d);

/// num/den to full double precision without converting either operand.
/// Underflows to 0 / overflows to inf only when the true ratio does.
double ratio(const BigDim& num, const BigDim& den);

/// Psi(d+1). Exact harmonic recurrence below 16, asymptotic series above.
double digamma_of_dim(const BigDim& d);
/// Psi'(d+1).
double trigamma_of_dim(const BigDim& d);
/// (d+1) Psi'(d+1) - 1, evaluated without the cancellation of the naive form.
double scaled_trigamma_excess(const BigDim& d);

double erfc(double x);
/// exp(x^2) erfc(x) for x >= 0.
double erfcx(double x);

/// exp(a) * erfc(x) without forming inf * 0.
double exp_times_erfc(double a, double x);

inline constexpr double kEulerGamma = 0.57721566490153286060651209;
inline constexpr double kPi = 3.14159265358979323846264338;

}  // namespace page_entropy
