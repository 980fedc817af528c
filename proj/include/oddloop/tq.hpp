#pragma once

#include <string>
#include <vector>

#include "oddloop/bigfloat.hpp"
#include "oddloop/cyclo.hpp"
#include "oddloop/polynomial.hpp"

namespace oddloop {

/// Ground-state solution of the T-Q and T-P equations at q = w for L = 2N+1.
struct TQSolution {
    long N = 0;
    long L = 1;
    RatPoly fQ;  // (1+u)^L Q, degree 3N+1
    RatPoly fP;  // (1+u)^L P, degree 3N+2
    RatPoly Q;   // monic, degree N
    RatPoly P;   // monic, degree N+1
};

RatPoly build_fQ(long N);
RatPoly build_fP(long N);

/// Divides out (1+u)^L and rescales so Q and P are monic. The f polynomials
/// are rescaled by the same factors. Throws NonDivisible on a bad input.
TQSolution extract_QP(TQSolution sol);

/// build_fQ, build_fP and extract_QP in one call.
TQSolution solve_tq(long N);

struct IdentityCheck {
    std::string name;
    bool passed = false;
    /// Lowest coefficient index of a nonzero residual, or -1.
    long offending_index = -1;
    std::string detail;
};

struct TQReport {
    long N = 0;
    long L = 0;
    std::vector<IdentityCheck> checks;

    bool all_passed() const;
    const IdentityCheck& check(const std::string& name) const;
};

/// Exact polynomial identity checks over Q(w):
///   eq_f_Q, eq_f_P      three-term f relations
///   tq_equation, tp_equation  T-Q and T-P with T = q(1+u)^L
///   wronskian           quantum Wronskian equals (1-u)^L
///   t_reconstruction    T rebuilt from Q and P equals q(1+u)^L
///   ode_Q, ode_P        second-order ODE residuals vanish
///   vanishing_Q, vanishing_P  stride-3 zero coefficients
///   factor_Q, factor_P  f = (1+u)^L * (Q or P)
///   multiplicity_Q      (1+u)^L divides fQ and (1+u)^(L+1) does not
TQReport verify_tq_identities(const TQSolution& sol);

/// Values entering the derivative of log T(1) with respect to q.
struct DerivativeBreakdown {
    long N = 0;
    long L = 0;
    Cyclo A;
    /// d log T(1)/dq from the combined f-polynomial formula.
    Cyclo dlogT;
    /// The same quantity assembled from A and the Q, P values.
    Cyclo dlogT_from_A;
    Rational nu;
};

/// Loop density through the T-Q derivative pipeline, exact in Q(w).
/// Throws RationalityViolation if the assembled density has a w-component
/// or the two assemblies of d log T/dq disagree.
DerivativeBreakdown nu_from_tq(long N);

struct GammaCheckEntry {
    std::string name;  // e.g. "fQ(q^2)"
    BigComplex exact;
    BigComplex closed_form;
    BigFloat relative_deviation;
};

struct GammaCheckReport {
    long N = 0;
    unsigned precision_bits = 0;
    std::vector<GammaCheckEntry> entries;
    BigFloat max_relative_deviation;
    BigFloat tolerance;
    bool passed = false;
};

enum class GammaVariant { Standard, FlippedDerivativeSign };

/// Compares gamma-function closed forms of fQ, fP, fQ', fP' at q^(+-2)
/// against the exact polynomials. Throws ToleranceExceeded when the maximum
/// relative deviation is above 10^-(precision_bits/8) and `throw_on_fail`.
GammaCheckReport gamma_closed_form_check(long N, unsigned precision_bits,
                                         GammaVariant variant = GammaVariant::Standard,
                                         bool throw_on_fail = true);

}  // namespace oddloop
