#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "oddloop/rational.hpp"

namespace oddloop {

/// Element a + b*w of Q(w), w = exp(i*pi/3), reduced with w^2 = w - 1.
///
/// The stochastic-point value q = exp(i*pi/3) is w itself, so every power
/// q^k that appears in the functional equations is one of the six units
/// returned by omega_pow(k).
class Cyclo {
public:
    Cyclo() = default;
    Cyclo(Rational re) : re_(std::move(re)) {}  // NOLINT(google-explicit-constructor)
    Cyclo(long re) : re_(re) {}                 // NOLINT(google-explicit-constructor)
    Cyclo(Rational re, Rational om) : re_(std::move(re)), om_(std::move(om)) {}

    static Cyclo omega() { return Cyclo(0, 1); }
    /// w^k for any integer k (w^6 = 1).
    static Cyclo omega_pow(long k);
    /// Parses the "a + b*w" interchange form.
    static Cyclo parse(std::string_view text);

    const Rational& re_part() const { return re_; }
    const Rational& om_part() const { return om_; }

    bool is_zero() const { return re_.is_zero() && om_.is_zero(); }
    bool is_rational() const { return om_.is_zero(); }

    /// Complex conjugate; w-bar = 1 - w.
    Cyclo conj() const { return Cyclo(re_ + om_, -om_); }
    /// Field norm a^2 + ab + b^2 (= |x|^2).
    Rational norm() const { return re_ * re_ + re_ * om_ + om_ * om_; }
    Cyclo inverse() const;
    Cyclo pow(long exponent) const;

    std::string str() const;

    Cyclo& operator+=(const Cyclo& rhs) { re_ += rhs.re_; om_ += rhs.om_; return *this; }
    Cyclo& operator-=(const Cyclo& rhs) { re_ -= rhs.re_; om_ -= rhs.om_; return *this; }
    Cyclo& operator*=(const Cyclo& rhs);
    Cyclo& operator/=(const Cyclo& rhs) { return *this *= rhs.inverse(); }

    friend Cyclo operator+(Cyclo lhs, const Cyclo& rhs) { return lhs += rhs; }
    friend Cyclo operator-(Cyclo lhs, const Cyclo& rhs) { return lhs -= rhs; }
    friend Cyclo operator*(Cyclo lhs, const Cyclo& rhs) { return lhs *= rhs; }
    friend Cyclo operator/(Cyclo lhs, const Cyclo& rhs) { return lhs /= rhs; }
    friend Cyclo operator-(const Cyclo& x) { return Cyclo(-x.re_, -x.om_); }
    friend bool operator==(const Cyclo& a, const Cyclo& b) = default;

private:
    Rational re_;
    Rational om_;
};

Cyclo cyclo_mul(const Cyclo& x, const Cyclo& y);
Cyclo cyclo_inv(const Cyclo& x);

std::ostream& operator<<(std::ostream& os, const Cyclo& x);

}  // namespace oddloop
