#pragma once

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oddloop/cyclo.hpp"
#include "oddloop/errors.hpp"
#include "oddloop/rational.hpp"

namespace oddloop {

/// Dense univariate polynomial; coefficient i multiplies u^i. Trailing zeros
/// are trimmed so the zero polynomial has no coefficients and degree -1.
template <class Coeff>
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Coeff> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<Coeff> coeffs) : coeffs_(coeffs) { trim(); }

    static Polynomial constant(Coeff c) { return Polynomial(std::vector<Coeff>{std::move(c)}); }
    static Polynomial monomial(std::size_t power, Coeff c = Coeff(1)) {
        std::vector<Coeff> v(power + 1);
        v[power] = std::move(c);
        return Polynomial(std::move(v));
    }
    /// (c0 + c1 u)^n
    static Polynomial binomial_power(const Coeff& c0, const Coeff& c1, unsigned n) {
        Polynomial base{c0, c1};
        Polynomial result = constant(Coeff(1));
        for (unsigned i = 0; i < n; ++i) result = result * base;
        return result;
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<Coeff>& coeffs() const { return coeffs_; }
    Coeff coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Coeff(); }
    const Coeff& leading() const { return coeffs_.back(); }

    template <class X>
    X evaluate(const X& x) const {
        X acc{};
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + X(*it);
        return acc;
    }

    Polynomial derivative() const {
        if (coeffs_.size() <= 1) return {};
        std::vector<Coeff> d(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * Coeff(static_cast<long>(i));
        return Polynomial(std::move(d));
    }

    /// p(c*u): coefficient j is multiplied by c^j.
    Polynomial scale_argument(const Coeff& c) const {
        std::vector<Coeff> out(coeffs_.size());
        Coeff power(1);
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            out[j] = coeffs_[j] * power;
            power = power * c;
        }
        return Polynomial(std::move(out));
    }

    Polynomial monic() const {
        if (is_zero()) throw DivisionByZero("monic() of the zero polynomial");
        return *this * (Coeff(1) / leading());
    }

    Polynomial& operator+=(const Polynomial& rhs) {
        if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
        for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
        trim();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& rhs) {
        if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
        for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
        trim();
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(const Polynomial& a) { return Polynomial() - a; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Coeff> out(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i] == Coeff()) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return Polynomial(std::move(out));
    }
    friend Polynomial operator*(Polynomial a, const Coeff& c) {
        for (auto& x : a.coeffs_) x *= c;
        a.trim();
        return a;
    }
    friend Polynomial operator*(const Coeff& c, Polynomial a) { return std::move(a) * c; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

    std::string str() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            if (coeffs_[i] == Coeff()) continue;
            if (!first) os << " + ";
            os << "(" << coeffs_[i] << ")";
            if (i > 0) os << "*u^" << i;
            first = false;
        }
        return os.str();
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == Coeff()) coeffs_.pop_back();
    }

    std::vector<Coeff> coeffs_;
};

using RatPoly = Polynomial<Rational>;
using CycloPoly = Polynomial<Cyclo>;

template <class Coeff>
struct DivisionResult {
    Polynomial<Coeff> quotient;
    Polynomial<Coeff> remainder;
};

/// Long division num = quotient * den + remainder, deg remainder < deg den.
template <class Coeff>
DivisionResult<Coeff> poly_divmod(const Polynomial<Coeff>& num, const Polynomial<Coeff>& den) {
    if (den.is_zero()) throw DivisionByZero("polynomial division by zero");
    std::vector<Coeff> rem = num.coeffs();
    const int dd = den.degree();
    const int nd = num.degree();
    if (nd < dd) return {Polynomial<Coeff>(), num};
    std::vector<Coeff> quot(nd - dd + 1);
    const Coeff lead_inv = Coeff(1) / den.leading();
    for (int k = nd - dd; k >= 0; --k) {
        Coeff factor = rem[k + dd] * lead_inv;
        if (factor == Coeff()) continue;
        for (int j = 0; j <= dd; ++j) rem[k + j] -= factor * den.coeffs()[j];
        quot[k] = std::move(factor);
    }
    return {Polynomial<Coeff>(std::move(quot)), Polynomial<Coeff>(std::move(rem))};
}

/// Quotient of an exact division; throws NonDivisible naming the lowest
/// nonzero remainder coefficient otherwise.
template <class Coeff>
Polynomial<Coeff> poly_divide_exact(const Polynomial<Coeff>& num, const Polynomial<Coeff>& den) {
    auto [quot, rem] = poly_divmod(num, den);
    if (!rem.is_zero()) {
        std::size_t idx = 0;
        while (rem.coeff(idx) == Coeff()) ++idx;
        std::ostringstream os;
        os << "polynomial not divisible: remainder coefficient of u^" << idx << " is " << rem.coeff(idx);
        throw NonDivisible(os.str());
    }
    return quot;
}

/// Coefficient-wise promotion of a rational polynomial into Q(w).
CycloPoly promote(const RatPoly& p);

/// p(w^k u) for a rational polynomial: coefficient j is multiplied by w^{kj}.
CycloPoly substitute_omega(const RatPoly& p, long k);
CycloPoly substitute_omega(const CycloPoly& p, long k);

}  // namespace oddloop
