#include "oddloop/hypergeometric.hpp"

#include "oddloop/errors.hpp"

namespace oddloop {

Rational pochhammer(const Rational& a, unsigned n) {
    Rational result(1);
    Rational term = a;
    for (unsigned i = 0; i < n; ++i) {
        result *= term;
        term += Rational(1);
    }
    return result;
}

Rational gamma_ratio(const Rational& a, const Rational& b) {
    const Rational diff = a - b;
    if (!diff.is_integer()) throw DomainError("gamma_ratio: arguments " + a.str() + ", " + b.str() + " differ by a non-integer");
    auto is_pole = [](const Rational& x) { return x.is_integer() && x.sign() <= 0; };
    if (is_pole(a) || is_pole(b)) throw DomainError("gamma_ratio: pole at a non-positive integer");
    const long n = diff.numerator().get_si();
    // Gamma(b + n) / Gamma(b) = (b)_n
    if (n >= 0) return pochhammer(b, static_cast<unsigned>(n));
    return pochhammer(a, static_cast<unsigned>(-n)).inverse();
}

RatPoly hyp2f1_terminating(long a_neg_int, const Rational& b, const Rational& c, unsigned var_power) {
    if (a_neg_int > 0) throw DomainError("hyp2f1_terminating: first parameter must be a non-positive integer");
    if (var_power < 1) throw DomainError("hyp2f1_terminating: var_power must be >= 1");
    const long n_terms = -a_neg_int;
    const Rational a(a_neg_int);
    std::vector<Rational> coeffs(static_cast<std::size_t>(n_terms) * var_power + 1);
    Rational term(1);
    coeffs[0] = term;
    for (long k = 0; k < n_terms; ++k) {
        const Rational ck = c + Rational(k);
        if (ck.is_zero()) throw DomainError("hyp2f1_terminating: c + " + std::to_string(k) + " = 0 before truncation");
        // ratio of successive terms in the variable z = -u^p
        term = term * (a + Rational(k)) * (b + Rational(k)) / (ck * Rational(k + 1)) * Rational(-1);
        coeffs[static_cast<std::size_t>(k + 1) * var_power] = term;
    }
    return RatPoly(std::move(coeffs));
}

}  // namespace oddloop
