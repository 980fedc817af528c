#pragma once

#include "oddloop/polynomial.hpp"
#include "oddloop/rational.hpp"

namespace oddloop {

/// Rising factorial (a)_n = a (a+1) ... (a+n-1); (a)_0 = 1.
Rational pochhammer(const Rational& a, unsigned n);

/// Exact Gamma(a)/Gamma(b) when a - b is an integer, reduced to a Pochhammer
/// product. Throws DomainError if a - b is not an integer or a pole is met.
Rational gamma_ratio(const Rational& a, const Rational& b);

/// Terminating 2F1(-N, b; c; -u^p) as an exact polynomial of degree N*p:
///   sum_{k=0}^{N} (-N)_k (b)_k / ((c)_k k!) (-u^p)^k.
/// a_neg_int must be -N <= 0. Throws DomainError if c + k = 0 for some k < N.
RatPoly hyp2f1_terminating(long a_neg_int, const Rational& b, const Rational& c, unsigned var_power);

}  // namespace oddloop
