#include "oddloop/cyclo.hpp"

#include <ostream>

#include "oddloop/errors.hpp"

namespace oddloop {

Cyclo& Cyclo::operator*=(const Cyclo& rhs) {
    // (a + b w)(c + d w) = (ac - bd) + (ad + bc + bd) w
    const Rational bd = om_ * rhs.om_;
    Rational re = re_ * rhs.re_ - bd;
    Rational om = re_ * rhs.om_ + om_ * rhs.re_ + bd;
    re_ = std::move(re);
    om_ = std::move(om);
    return *this;
}

Cyclo Cyclo::inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero in Q(w)");
    const Rational n = norm();
    const Cyclo c = conj();
    return Cyclo(c.re_ / n, c.om_ / n);
}

Cyclo Cyclo::omega_pow(long k) {
    switch (((k % 6) + 6) % 6) {
        case 0: return Cyclo(1, 0);
        case 1: return Cyclo(0, 1);
        case 2: return Cyclo(-1, 1);
        case 3: return Cyclo(-1, 0);
        case 4: return Cyclo(0, -1);
        default: return Cyclo(1, -1);
    }
}

Cyclo Cyclo::pow(long exponent) const {
    if (exponent < 0) return inverse().pow(-exponent);
    Cyclo result(1);
    Cyclo base = *this;
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

std::string Cyclo::str() const { return re_.str() + " + " + om_.str() + "*w"; }

Cyclo Cyclo::parse(std::string_view text) {
    const std::string s(text);
    const auto plus = s.find(" + ");
    const auto star = s.rfind("*w");
    if (plus == std::string::npos || star == std::string::npos || star < plus) {
        throw DomainError("malformed Q(w) element: '" + s + "'");
    }
    return Cyclo(Rational::parse(s.substr(0, plus)), Rational::parse(s.substr(plus + 3, star - plus - 3)));
}

Cyclo cyclo_mul(const Cyclo& x, const Cyclo& y) { return x * y; }
Cyclo cyclo_inv(const Cyclo& x) { return x.inverse(); }

std::ostream& operator<<(std::ostream& os, const Cyclo& x) { return os << x.str(); }

}  // namespace oddloop
