#pragma once

#include <string>

#include <boost/multiprecision/mpfr.hpp>

#include "oddloop/cyclo.hpp"
#include "oddloop/rational.hpp"

namespace oddloop {

using BigFloat = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultPrecisionBits = 256;
inline constexpr unsigned kMinSpectralPrecisionBits = 128;

/// Sets the working precision of newly created BigFloat values for the
/// lifetime of the scope and restores the previous setting on exit. The
/// setting is process-wide; concurrent jobs must agree on it.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

    unsigned bits() const { return bits_; }

private:
    unsigned bits_;
    unsigned saved_digits10_;
    unsigned saved_bits_ = 0;
};

/// Precision in bits of a BigFloat created now (at least the requested bits).
unsigned working_precision_bits();
/// Bits most recently requested through PrecisionScope.
unsigned requested_precision_bits();

BigFloat to_bigfloat(const Rational& x);
BigFloat big_pi();
/// 10^-exponent at working precision.
BigFloat ten_to_minus(int exponent);

/// Complex number over BigFloat.
struct BigComplex {
    BigFloat re{0};
    BigFloat im{0};

    BigComplex() = default;
    BigComplex(BigFloat r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
    BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
    BigComplex(long r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
    explicit BigComplex(const Rational& r) : re(to_bigfloat(r)), im(0) {}
    explicit BigComplex(const Cyclo& c);

    /// exp(i theta)
    static BigComplex unit(const BigFloat& theta);

    BigComplex conj() const { return {re, -im}; }
    BigFloat norm() const { return re * re + im * im; }

    BigComplex& operator+=(const BigComplex& o) { re += o.re; im += o.im; return *this; }
    BigComplex& operator-=(const BigComplex& o) { re -= o.re; im -= o.im; return *this; }
    BigComplex& operator*=(const BigComplex& o);
    BigComplex& operator/=(const BigComplex& o);

    friend BigComplex operator+(BigComplex a, const BigComplex& b) { return a += b; }
    friend BigComplex operator-(BigComplex a, const BigComplex& b) { return a -= b; }
    friend BigComplex operator*(BigComplex a, const BigComplex& b) { return a *= b; }
    friend BigComplex operator/(BigComplex a, const BigComplex& b) { return a /= b; }
    friend BigComplex operator-(const BigComplex& a) { return {-a.re, -a.im}; }
    friend bool operator==(const BigComplex& a, const BigComplex& b) { return a.re == b.re && a.im == b.im; }
};

BigFloat abs(const BigComplex& z);
BigFloat arg(const BigComplex& z);
BigComplex exp(const BigComplex& z);
/// Principal branch, cut along the negative real axis.
BigComplex log(const BigComplex& z);
/// Principal branch square root.
BigComplex sqrt(const BigComplex& z);
BigComplex pow(const BigComplex& z, long n);

/// Fixed-notation rendering with the given number of significant digits.
std::string to_string(const BigFloat& x, int significant_digits);
std::string to_string(const BigComplex& z, int significant_digits);

}  // namespace oddloop
