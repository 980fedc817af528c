#include "oddloop/tq.hpp"

#include <sstream>

#include "oddloop/errors.hpp"
#include "oddloop/hypergeometric.hpp"

namespace oddloop {

namespace mp = boost::multiprecision;

namespace {

const Cyclo& q() {
    static const Cyclo value = Cyclo::omega();
    return value;
}

template <class C>
long first_nonzero(const Polynomial<C>& p) {
    for (std::size_t i = 0; i < p.coeffs().size(); ++i)
        if (!(p.coeffs()[i] == C())) return static_cast<long>(i);
    return -1;
}

template <class C>
IdentityCheck zero_check(std::string name, const Polynomial<C>& residual) {
    IdentityCheck c;
    c.name = std::move(name);
    c.offending_index = first_nonzero(residual);
    c.passed = c.offending_index < 0;
    if (!c.passed) {
        std::ostringstream os;
        os << "residual coefficient of u^" << c.offending_index << " is " << residual.coeff(c.offending_index);
        c.detail = os.str();
    }
    return c;
}

// (1 - c u)^L over Q(w)
CycloPoly phi_scaled(const Cyclo& c, long L) { return CycloPoly::binomial_power(Cyclo(1), -c, static_cast<unsigned>(L)); }

RatPoly one_plus_u_pow(long L) { return RatPoly::binomial_power(1, 1, static_cast<unsigned>(L)); }

}  // namespace

RatPoly build_fQ(long N) {
    if (N < 0) throw DomainError("build_fQ requires N >= 0");
    const auto n = static_cast<unsigned>(N);
    const Rational prefactor = pochhammer(Rational(4, 3), n) / pochhammer(Rational(2, 3), n);
    const RatPoly first = RatPoly::monomial(1, prefactor) * hyp2f1_terminating(-N, Rational(1, 3) - Rational(N), Rational(4, 3), 3);
    const RatPoly second = hyp2f1_terminating(-N, Rational(-1, 3) - Rational(N), Rational(2, 3), 3);
    const Rational sign(N % 2 == 0 ? 1 : -1);
    return (first + second) * sign;
}

RatPoly build_fP(long N) {
    if (N < 0) throw DomainError("build_fP requires N >= 0");
    const auto n = static_cast<unsigned>(N);
    const Rational prefactor = pochhammer(Rational(5, 3), n) / pochhammer(Rational(1, 3), n);
    const RatPoly first = RatPoly::monomial(2, prefactor) * hyp2f1_terminating(-N, Rational(2, 3) - Rational(N), Rational(5, 3), 3);
    const RatPoly second = hyp2f1_terminating(-N, Rational(-2, 3) - Rational(N), Rational(1, 3), 3);
    const Rational sign(N % 2 == 0 ? 1 : -1);
    return (first - second) * sign;
}

TQSolution extract_QP(TQSolution sol) {
    const RatPoly base = one_plus_u_pow(sol.L);
    RatPoly Q = poly_divide_exact(sol.fQ, base);
    RatPoly P = poly_divide_exact(sol.fP, base);
    const Rational sq = Q.leading().inverse();
    const Rational sp = P.leading().inverse();
    sol.Q = Q * sq;
    sol.P = P * sp;
    sol.fQ = sol.fQ * sq;
    sol.fP = sol.fP * sp;
    return sol;
}

TQSolution solve_tq(long N) {
    TQSolution sol;
    sol.N = N;
    sol.L = 2 * N + 1;
    sol.fQ = build_fQ(N);
    sol.fP = build_fP(N);
    return extract_QP(std::move(sol));
}

bool TQReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return !checks.empty();
}

const IdentityCheck& TQReport::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw DomainError("no identity check named '" + name + "'");
}

TQReport verify_tq_identities(const TQSolution& sol) {
    TQReport report;
    report.N = sol.N;
    report.L = sol.L;
    const long L = sol.L;
    const long N = sol.N;
    const long M = N;
    const Cyclo s = (-q()).pow(2 * M - L);
    const Cyclo q2 = q().pow(2);
    const Cyclo q4 = q().pow(4);

    const CycloPoly fQ = promote(sol.fQ);
    const CycloPoly fP = promote(sol.fP);
    report.checks.push_back(zero_check("eq_f_Q", fQ + substitute_omega(sol.fQ, 2) * q2 + substitute_omega(sol.fQ, 4) * q4));
    report.checks.push_back(zero_check("eq_f_P", fP + substitute_omega(sol.fP, 2) * q4 + substitute_omega(sol.fP, 4) * q2));

    const CycloPoly T = promote(one_plus_u_pow(L)) * q();
    const CycloPoly phi_qinv = phi_scaled(q().inverse(), L);
    const CycloPoly phi_q = phi_scaled(q(), L);
    const CycloPoly Q = promote(sol.Q);
    const CycloPoly P = promote(sol.P);
    report.checks.push_back(zero_check(
        "tq_equation", T * Q - phi_qinv * substitute_omega(sol.Q, 2) - phi_q * substitute_omega(sol.Q, -2) * s));
    report.checks.push_back(zero_check(
        "tp_equation", T * P - phi_qinv * substitute_omega(sol.P, 2) * s - phi_q * substitute_omega(sol.P, -2)));

    const CycloPoly wronskian = substitute_omega(sol.Q, 1) * substitute_omega(sol.P, -1) -
                                substitute_omega(sol.Q, -1) * substitute_omega(sol.P, 1) * s;
    const CycloPoly phi = phi_scaled(Cyclo(1), L);
    report.checks.push_back(zero_check("wronskian", wronskian - phi * (s - Cyclo(1))));

    const CycloPoly t_num = substitute_omega(sol.Q, 2) * substitute_omega(sol.P, -2) -
                            substitute_omega(sol.Q, -2) * substitute_omega(sol.P, 2) * (s * s);
    report.checks.push_back(zero_check("t_reconstruction", t_num - T * (s - Cyclo(1))));

    const RatPoly one_plus_u3{1, 0, 0, 1};
    const RatPoly u = RatPoly::monomial(1);
    {
        const RatPoly& f = sol.fQ;
        const RatPoly d1 = f.derivative();
        const RatPoly d2 = d1.derivative();
        const RatPoly res = one_plus_u3 * d2 - RatPoly::monomial(2, Rational(6 * N)) * d1 +
                            RatPoly::monomial(1, Rational(3 * N * (3 * N + 1))) * f;
        report.checks.push_back(zero_check("ode_Q", res));
    }
    {
        const RatPoly& f = sol.fP;
        const RatPoly d1 = f.derivative();
        const RatPoly d2 = d1.derivative();
        const RatPoly res = one_plus_u3 * u * d2 - RatPoly{Rational(1), 0, 0, Rational(6 * N + 1)} * d1 +
                            RatPoly::monomial(2, Rational(3 * N * (3 * N + 2))) * f;
        report.checks.push_back(zero_check("ode_P", res));
    }

    auto stride_check = [](std::string name, const RatPoly& f, long offset, long count) {
        IdentityCheck c;
        c.name = std::move(name);
        c.passed = true;
        for (long m = 0; m < count; ++m) {
            const long idx = 3 * m + offset;
            if (!f.coeff(static_cast<std::size_t>(idx)).is_zero()) {
                c.passed = false;
                c.offending_index = idx;
                c.detail = "coefficient of u^" + std::to_string(idx) + " is " + f.coeff(static_cast<std::size_t>(idx)).str();
                break;
            }
        }
        return c;
    };
    report.checks.push_back(stride_check("vanishing_Q", sol.fQ, 2, N));
    report.checks.push_back(stride_check("vanishing_P", sol.fP, 1, N + 1));

    const RatPoly base = one_plus_u_pow(L);
    report.checks.push_back(zero_check("factor_Q", sol.fQ - base * sol.Q));
    report.checks.push_back(zero_check("factor_P", sol.fP - base * sol.P));

    IdentityCheck mult;
    mult.name = "multiplicity_Q";
    const auto divided = poly_divmod(sol.fQ, base);
    mult.passed = divided.remainder.is_zero() && !divided.quotient.evaluate(Rational(-1)).is_zero();
    if (!divided.remainder.is_zero()) {
        mult.offending_index = first_nonzero(divided.remainder);
        mult.detail = "(1+u)^L does not divide fQ";
    } else if (!mult.passed) {
        mult.detail = "fQ vanishes at u = -1 to order above L";
    }
    report.checks.push_back(mult);

    {
        IdentityCheck deg;
        deg.name = "degrees";
        deg.passed = sol.Q.degree() == N && sol.P.degree() == N + 1 && sol.Q.leading() == Rational(1) &&
                     sol.P.leading() == Rational(1);
        if (!deg.passed)
            deg.detail = "deg Q = " + std::to_string(sol.Q.degree()) + ", deg P = " + std::to_string(sol.P.degree());
        report.checks.push_back(deg);
    }
    return report;
}

DerivativeBreakdown nu_from_tq(long N) {
    if (N < 1) throw DomainError("nu_from_tq requires N >= 1");
    const TQSolution sol = solve_tq(N);
    const long L = sol.L;
    const Cyclo x1 = Cyclo::omega_pow(2);
    const Cyclo x2 = Cyclo::omega_pow(-2);
    const Cyclo& qq = q();
    const Cyclo q2 = x1;
    const Cyclo two_L = Cyclo(Rational(1) * Rational(2).pow(static_cast<int>(L)));
    const Cyclo denom = qq * two_L * (q2 - Cyclo(1));

    // f-polynomial form
    const RatPoly dfQ = sol.fQ.derivative();
    const RatPoly dfP = sol.fP.derivative();
    const Cyclo fQ1 = sol.fQ.evaluate(x1), fQ2 = sol.fQ.evaluate(x2);
    const Cyclo fP1 = sol.fP.evaluate(x1), fP2 = sol.fP.evaluate(x2);
    const Cyclo dQ1 = dfQ.evaluate(x1), dQ2 = dfQ.evaluate(x2);
    const Cyclo dP1 = dfP.evaluate(x1), dP2 = dfP.evaluate(x2);
    const Cyclo bracket = Cyclo(3) * (qq * dQ1 * fP2 + fQ1 * dP2 + qq * dQ2 * fP1 + q2 * fQ2 * dP1 -
                                      Cyclo(L) * (Cyclo(1) + qq) * (fQ1 * fP2 + qq * fQ2 * fP1)) -
                          (q2 * fQ1 * fP2 + Cyclo(2) * fQ2 * fP1);
    DerivativeBreakdown out;
    out.N = N;
    out.L = L;
    out.dlogT = bracket / denom;

    // Q, P form through A
    const RatPoly dQ = sol.Q.derivative();
    const RatPoly dP = sol.P.derivative();
    const Cyclo Q1 = sol.Q.evaluate(x1), Q2 = sol.Q.evaluate(x2);
    const Cyclo P1 = sol.P.evaluate(x1), P2 = sol.P.evaluate(x2);
    const Cyclo inv = (q2 - Cyclo(1)).inverse();
    out.A = inv * (qq * dQ.evaluate(x1) * P2 + Q1 * dP.evaluate(x2) + qq * dQ.evaluate(x2) * P1 + q2 * Q2 * dP.evaluate(x1));
    out.dlogT_from_A = (Cyclo(3) * out.A - (q2 * Q1 * P2 + Cyclo(2) * Q2 * P1) * inv) / (qq * two_L);

    if (!(out.dlogT == out.dlogT_from_A))
        throw RationalityViolation("d log T/dq assemblies disagree at N = " + std::to_string(N) + ": " + out.dlogT.str() +
                                   " vs " + out.dlogT_from_A.str());

    const Cyclo Lc(L);
    const Cyclo nu = Cyclo(Rational(1, 2)) + (Cyclo(2) * Lc * qq * (Cyclo(1) + qq)).inverse() +
                     out.dlogT / (Lc * (Cyclo(1) + qq));
    if (!nu.is_rational())
        throw RationalityViolation("density has nonzero w-component at N = " + std::to_string(N) + ": " + nu.str());
    out.nu = nu.re_part();
    return out;
}

namespace {

BigFloat G(const BigFloat& x) { return mp::tgamma(x); }

BigFloat binom(long n, long k) {
    BigFloat r = 1;
    for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// 2F1(a, b; 1 + a - b + n; -1)
BigFloat kummer(const BigFloat& a, const BigFloat& b, long n) {
    const BigFloat c = 1 + a - b + n;
    BigFloat sum = 0;
    for (long k = 0; k <= n; ++k) {
        const BigFloat t = a / 2 + BigFloat(k) / 2;
        const BigFloat term = binom(n, k) * G(t) / G(t - b + 1);
        sum += (k % 2 == 0) ? term : BigFloat(-term);
    }
    return G(c) * G(1 - b) / (2 * G(a) * G(1 - b + n)) * sum;
}

// 2F1(-N', b; c; -1) with c - (1 + b + N') a non-negative integer.
BigFloat hyp_at_minus_one(long neg_a, const BigFloat& b, const BigFloat& c) {
    if (neg_a == 0) return 1;
    const BigFloat shift = c - (1 + b + neg_a);
    const long n = BigFloat(mp::round(shift)).convert_to<long>();
    if (mp::abs(shift - n) > ten_to_minus(20)) throw DomainError("Kummer evaluation needs an integer shift");
    return kummer(b, BigFloat(-neg_a), n);
}

struct Triple {
    long neg_a;
    BigFloat b;
    BigFloat c;
};

BigFloat value(const Triple& t) { return hyp_at_minus_one(t.neg_a, t.b, t.c); }

// derivative in z of 2F1(a, b; c; z) at z = -1
BigFloat derivative(const Triple& t) {
    if (t.neg_a == 0) return 0;
    const BigFloat a = -t.neg_a;
    return a * t.b / t.c * hyp_at_minus_one(t.neg_a - 1, t.b + 1, t.c + 1);
}

}  // namespace

GammaCheckReport gamma_closed_form_check(long N, unsigned precision_bits, GammaVariant variant, bool throw_on_fail) {
    if (N < 1) throw DomainError("gamma_closed_form_check requires N >= 1");
    if (precision_bits < kMinSpectralPrecisionBits)
        throw DomainError("gamma_closed_form_check requires at least " + std::to_string(kMinSpectralPrecisionBits) + " bits");
    PrecisionScope scope(precision_bits);
    GammaCheckReport report;
    report.N = N;
    report.precision_bits = precision_bits;
    report.tolerance = ten_to_minus(static_cast<int>(precision_bits / 8));

    const BigFloat n(N);
    const BigFloat third = BigFloat(1) / 3;
    const BigFloat R1 = G(2 * third) * G(n + 4 * third) / (G(4 * third) * G(n + 2 * third));
    const BigFloat R2 = G(third) * G(n + 5 * third) / (G(5 * third) * G(n + third));
    const Triple F1{N, third - n, 4 * third};
    const Triple F2{N, -third - n, 2 * third};
    const Triple G1{N, 2 * third - n, 5 * third};
    const Triple G2{N, -2 * third - n, third};
    const BigFloat vF1 = value(F1), vF2 = value(F2), vG1 = value(G1), vG2 = value(G2);
    const BigFloat dF1 = derivative(F1), dF2 = derivative(F2), dG1 = derivative(G1), dG2 = derivative(G2);
    const BigFloat sign = (N % 2 == 0) ? 1 : -1;
    const BigFloat flip = variant == GammaVariant::FlippedDerivativeSign ? -1 : 1;

    const RatPoly fQ = build_fQ(N);
    const RatPoly fP = build_fP(N);
    const RatPoly dfQ = fQ.derivative();
    const RatPoly dfP = fP.derivative();

    BigFloat worst = 0;
    for (int s : {2, -2}) {
        const Cyclo xc = Cyclo::omega_pow(s);
        const BigComplex x(xc);
        const std::string at = s > 0 ? "(q^2)" : "(q^-2)";
        const BigComplex x2 = x * x, x3 = x2 * x, x4 = x3 * x;
        const BigComplex cf[4] = {
            BigComplex(sign) * (x * BigComplex(R1 * vF1) + BigComplex(vF2)),
            BigComplex(sign) * (BigComplex(R1 * vF1) - BigComplex(3) * x3 * BigComplex(R1 * dF1) -
                                BigComplex(3 * flip) * x2 * BigComplex(dF2)),
            BigComplex(sign) * (x2 * BigComplex(R2 * vG1) - BigComplex(vG2)),
            BigComplex(sign) * (BigComplex(2) * x * BigComplex(R2 * vG1) - BigComplex(3) * x4 * BigComplex(R2 * dG1) +
                                BigComplex(3 * flip) * x2 * BigComplex(dG2)),
        };
        const BigComplex ex[4] = {BigComplex(fQ.evaluate(xc)), BigComplex(dfQ.evaluate(xc)), BigComplex(fP.evaluate(xc)),
                                  BigComplex(dfP.evaluate(xc))};
        const char* names[4] = {"fQ", "fQ'", "fP", "fP'"};
        for (int i = 0; i < 4; ++i) {
            GammaCheckEntry e;
            e.name = std::string(names[i]) + at;
            e.exact = ex[i];
            e.closed_form = cf[i];
            const BigFloat scale = abs(ex[i]);
            e.relative_deviation = abs(cf[i] - ex[i]) / (scale == 0 ? BigFloat(1) : scale);
            if (e.relative_deviation > worst) worst = e.relative_deviation;
            report.entries.push_back(std::move(e));
        }
    }
    report.max_relative_deviation = worst;
    report.passed = worst <= report.tolerance;
    if (!report.passed && throw_on_fail)
        throw ToleranceExceeded("gamma closed forms deviate by " + to_string(worst, 6) + " at N = " + std::to_string(N));
    return report;
}

}  // namespace oddloop
