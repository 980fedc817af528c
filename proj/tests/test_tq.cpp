#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oddloop/density.hpp"
#include "oddloop/errors.hpp"
#include "oddloop/tq.hpp"

using namespace oddloop;

namespace {

// Kernel of the stride-zero and root-at-minus-one conditions, solved by plain
// Gaussian elimination. Independent of the hypergeometric construction.
RatPoly kernel_polynomial(long N, long degree, long skip_residue) {
    const long L = 2 * N + 1;
    std::vector<long> powers;
    for (long k = 0; k <= degree; ++k)
        if (k % 3 != skip_residue) powers.push_back(k);
    const std::size_t n = powers.size();
    // rows: j-th derivative at u = -1 divided by j!, i.e. sum_k C(k, j) (-1)^(k-j) f_k
    std::vector<std::vector<Rational>> rows;
    for (long j = 0; j < L; ++j) {
        std::vector<Rational> row(n);
        for (std::size_t c = 0; c < n; ++c) {
            const long k = powers[c];
            if (k < j) continue;
            Rational binom(1);
            for (long i = 0; i < j; ++i) binom = binom * Rational(k - i) / Rational(i + 1);
            row[c] = ((k - j) % 2 == 0) ? binom : -binom;
        }
        rows.push_back(row);
    }
    std::vector<long> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c].is_zero()) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[r]);
        const Rational inv = rows[r][c].inverse();
        for (auto& x : rows[r]) x = x * inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c].is_zero()) continue;
            const Rational f = rows[i][c];
            for (std::size_t cc = 0; cc < n; ++cc) rows[i][cc] -= f * rows[r][cc];
        }
        pivot_col.push_back(static_cast<long>(c));
        ++r;
    }
    REQUIRE(r == n - 1);
    std::size_t free_col = 0;
    for (std::size_t c = 0; c < n; ++c)
        if (std::find(pivot_col.begin(), pivot_col.end(), static_cast<long>(c)) == pivot_col.end()) free_col = c;
    std::vector<Rational> coeffs(static_cast<std::size_t>(degree) + 1);
    coeffs[static_cast<std::size_t>(powers[free_col])] = Rational(1);
    for (std::size_t i = 0; i < r; ++i)
        coeffs[static_cast<std::size_t>(powers[static_cast<std::size_t>(pivot_col[i])])] = -rows[i][free_col];
    return RatPoly(std::move(coeffs)).monic();
}

}  // namespace

TEST_CASE("small f polynomials expanded by hand") {
    CHECK(build_fQ(0) == RatPoly{1, 1});
    CHECK(build_fP(0) == RatPoly{-1, 0, 1});
    CHECK(build_fQ(1) == RatPoly{-1, -2, 0, 2, 1});
    CHECK(build_fP(1) == RatPoly{1, 0, -5, -5, 0, 1});
    for (long N = 0; N <= 12; ++N) {
        CHECK(build_fQ(N).degree() == 3 * N + 1);
        CHECK(build_fP(N).degree() == 3 * N + 2);
        CHECK(build_fQ(N).coeff(2).is_zero());
    }
}

TEST_CASE("Q and P extraction") {
    const TQSolution s1 = solve_tq(1);
    CHECK(s1.Q == RatPoly{-1, 1});
    CHECK(s1.P == RatPoly{1, -3, 1});
    const TQSolution s0 = solve_tq(0);
    CHECK(s0.Q == RatPoly{1});
    CHECK(s0.P == RatPoly{-1, 1});
    const TQSolution s2 = solve_tq(2);
    CHECK(s2.Q == RatPoly{Rational(1), Rational(-11, 5), Rational(1)});

    TQSolution bad = s1;
    bad.fQ = bad.fQ + RatPoly{1};
    CHECK_THROWS_AS(extract_QP(bad), NonDivisible);
}

TEST_CASE("f polynomials agree with the linear-algebra characterization") {
    for (long N = 0; N <= 7; ++N) {
        const TQSolution s = solve_tq(N);
        CHECK(s.fQ == kernel_polynomial(N, 3 * N + 1, 2));
        CHECK(s.fP == kernel_polynomial(N, 3 * N + 2, 1));
    }
}

TEST_CASE("identity suite N = 0..20") {
    for (long N = 0; N <= 20; ++N) {
        const TQReport report = verify_tq_identities(solve_tq(N));
        for (const auto& c : report.checks) {
            INFO("N = " << N << " check " << c.name << " " << c.detail);
            CHECK(c.passed);
        }
        CHECK(report.all_passed());
    }
}

TEST_CASE("perturbed solution fails the Wronskian") {
    TQSolution s = solve_tq(1);
    s.fQ = s.fQ + RatPoly::monomial(4);
    s.Q = poly_divmod(s.fQ, RatPoly::binomial_power(1, 1, 3)).quotient;
    const TQReport report = verify_tq_identities(s);
    CHECK_FALSE(report.check("wronskian").passed);
    CHECK(report.check("wronskian").offending_index >= 0);
    CHECK_FALSE(report.all_passed());
    CHECK_THROWS_AS(report.check("nonexistent"), DomainError);
}

TEST_CASE("wrong stride pattern is reported with its index") {
    TQSolution s = solve_tq(2);
    s.fQ = s.fQ + RatPoly::monomial(5);
    const IdentityCheck& c = verify_tq_identities(s).check("vanishing_Q");
    CHECK_FALSE(c.passed);
    CHECK(c.offending_index == 5);
}

TEST_CASE("published densities via the derivative pipeline") {
    CHECK(nu_from_tq(1).nu == Rational(1, 12));
    CHECK(nu_from_tq(2).nu == Rational(37, 400));
    CHECK(nu_from_tq(4).nu == Rational(2441, 25344));
    CHECK_THROWS_AS(nu_from_tq(0), DomainError);
}

TEST_CASE("derivative pipeline equals the closed form N = 1..40") {
    for (long N = 1; N <= 40; ++N) {
        const DerivativeBreakdown d = nu_from_tq(N);
        CHECK(d.dlogT == d.dlogT_from_A);
        CHECK(d.nu == nu_odd(N));
    }
}

TEST_CASE("formal derivative against a finite difference") {
    PrecisionScope scope(256);
    for (long N = 1; N <= 6; ++N) {
        const TQSolution s = solve_tq(N);
        const Cyclo xc = Cyclo::omega_pow(2);
        const BigComplex x(xc);
        const BigComplex h(ten_to_minus(20));
        auto eval = [&](const BigComplex& z) {
            BigComplex acc;
            for (auto it = s.fQ.coeffs().rbegin(); it != s.fQ.coeffs().rend(); ++it) acc = acc * z + BigComplex(*it);
            return acc;
        };
        const BigComplex fd = (eval(x + h) - eval(x - h)) / (BigComplex(2) * h);
        const BigComplex exact(s.fQ.derivative().evaluate(xc));
        CHECK(abs(fd - exact) / abs(exact) < ten_to_minus(15));
    }
}

TEST_CASE("gamma closed forms") {
    const GammaCheckReport r1 = gamma_closed_form_check(1, 256);
    CHECK(r1.passed);
    CHECK(r1.max_relative_deviation < ten_to_minus(30));
    CHECK(r1.entries.size() == 8);
    for (long N = 2; N <= 8; ++N) CHECK(gamma_closed_form_check(N, 256).passed);
    CHECK(gamma_closed_form_check(3, 512).max_relative_deviation < ten_to_minus(60));
}

TEST_CASE("gamma closed forms: flipped sign is caught") {
    CHECK_THROWS_AS(gamma_closed_form_check(1, 256, GammaVariant::FlippedDerivativeSign), ToleranceExceeded);
    const GammaCheckReport r = gamma_closed_form_check(1, 256, GammaVariant::FlippedDerivativeSign, false);
    CHECK_FALSE(r.passed);
    CHECK_THROWS_AS(gamma_closed_form_check(1, 64), DomainError);
}
