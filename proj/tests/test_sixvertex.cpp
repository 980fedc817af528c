#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <random>

#include "oddloop/density.hpp"
#include "oddloop/errors.hpp"
#include "oddloop/sixvertex.hpp"
#include "oddloop/tq.hpp"

using namespace oddloop;
namespace mp = boost::multiprecision;

namespace {

// R[(aux_out, spin_out), (aux_in, spin_in)] with 1 = up
BigComplex r_entry(const VertexWeights& w, int ao, int so, int ai, int si) {
    if (ao + so != ai + si) return BigComplex(0);
    if (ai == si) return (ao == ai) ? w.a : BigComplex(0);
    return (ao == ai) ? w.b : w.c;
}

// <out|T|in> summed over every auxiliary-line configuration.
BigComplex brute_element(int L, const VertexWeights& w, std::uint32_t out, std::uint32_t in) {
    BigComplex total(0);
    for (std::uint32_t aux = 0; aux < (1u << L); ++aux) {
        // aux bit i: auxiliary state entering site i; leaving site i is bit i+1 (cyclic)
        BigComplex prod(1);
        for (int i = 0; i < L && !(prod == BigComplex(0)); ++i) {
            const int ai = (aux >> i) & 1;
            const int ao = (aux >> ((i + 1) % L)) & 1;
            prod *= r_entry(w, ao, (out >> i) & 1, ai, (in >> i) & 1);
        }
        total += prod;
    }
    return total;
}

BigFloat max_abs(const ComplexMatrix& m) {
    BigFloat r = 0;
    for (const auto& row : m)
        for (const auto& x : row) r = mp::max(r, abs(x));
    return r;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t n = a.size();
    ComplexMatrix c(n, ComplexVector(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k] == BigComplex(0)) continue;
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

RMatrixParams params_at(const BigComplex& u) { return RMatrixParams::stochastic(u); }

}  // namespace

TEST_CASE("L = 1 at the stochastic point") {
    PrecisionScope scope(256);
    const ComplexMatrix m = build_transfer_matrix(1, params_at(1), -1).dense();
    REQUIRE(m.size() == 2);
    CHECK(abs(m[0][0] - BigComplex(2)) < ten_to_minus(70));
    CHECK(abs(m[1][1] - BigComplex(2)) < ten_to_minus(70));
    CHECK(abs(m[0][1]) < ten_to_minus(70));
    CHECK(abs(largest_eigenvalue(build_transfer_matrix(1, params_at(1), 0)).eigenvalue - BigComplex(2)) < ten_to_minus(60));
}

TEST_CASE("weights at u = 1 are real") {
    PrecisionScope scope(256);
    const VertexWeights w = vertex_weights(params_at(1));
    CHECK(w.real);
    CHECK(abs(w.a - BigComplex(1)) < ten_to_minus(70));
    CHECK(abs(w.c - BigComplex(mp::sqrt(BigFloat(3)))) < ten_to_minus(70));
    CHECK_FALSE(vertex_weights(params_at(BigComplex(BigFloat("1.1")))).real);
    const BigComplex q = RMatrixParams::stochastic().q();
    CHECK(vertex_weights(params_at(q * BigComplex(BigFloat("-0.9")))).branch_warning);
    CHECK_FALSE(vertex_weights(params_at(BigComplex(BigFloat("0.9")))).branch_warning);
}

TEST_CASE("sweep agrees with element-wise enumeration") {
    PrecisionScope scope(256);
    const BigComplex u(BigFloat("0.83"), BigFloat("0.21"));
    for (int L : {2, 3, 5}) {
        const SectorMatrix mat = build_transfer_matrix(L, params_at(u), -1);
        const ComplexMatrix m = mat.dense();
        BigFloat worst = 0;
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j)
                worst = mp::max(worst, abs(m[i][j] - brute_element(L, mat.weights(), mat.basis().configs()[i],
                                                                     mat.basis().configs()[j])));
        CHECK(worst < ten_to_minus(60));
    }
}

TEST_CASE("transfer matrix conserves the up count") {
    PrecisionScope scope(256);
    for (int L : {3, 5, 7}) {
        const SectorMatrix mat = build_transfer_matrix(L, params_at(BigComplex(BigFloat("1.3"))), -1);
        const ComplexMatrix m = mat.dense();
        BigFloat off = 0;
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j)
                if (std::popcount(mat.basis().configs()[i]) != std::popcount(mat.basis().configs()[j]))
                    off = mp::max(off, abs(m[i][j]));
        CHECK(off == 0);
    }
}

TEST_CASE("commuting transfer matrices") {
    PrecisionScope scope(256);
    {
        const ComplexMatrix a = build_transfer_matrix(3, params_at(BigComplex(BigFloat("1.1"))), -1).dense();
        const ComplexMatrix b = build_transfer_matrix(3, params_at(BigComplex(BigFloat("0.9"))), -1).dense();
        ComplexMatrix ab = matmul(a, b), ba = matmul(b, a);
        for (std::size_t i = 0; i < ab.size(); ++i)
            for (std::size_t j = 0; j < ab.size(); ++j) ab[i][j] -= ba[i][j];
        CHECK(max_abs(ab) < ten_to_minus(25));
    }
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(0.5, 1.5);
    for (int L : {3, 5, 7}) {
        for (int trial = 0; trial < 2; ++trial) {
            const BigFloat u(dist(rng)), v(dist(rng));
            const int up = L == 7 ? 3 : -1;
            const ComplexMatrix a = build_transfer_matrix(L, params_at(BigComplex(u)), up).dense();
            const ComplexMatrix b = build_transfer_matrix(L, params_at(BigComplex(v)), up).dense();
            ComplexMatrix ab = matmul(a, b), ba = matmul(b, a);
            const BigFloat scale = max_abs(ab);
            for (std::size_t i = 0; i < ab.size(); ++i)
                for (std::size_t j = 0; j < ab.size(); ++j) ab[i][j] -= ba[i][j];
            CHECK(max_abs(ab) / scale < ten_to_minus(20));
        }
    }
}

TEST_CASE("spin reversal relates sectors M and L - M") {
    PrecisionScope scope(256);
    const BigComplex u(BigFloat("0.7"), BigFloat("0.1"));
    for (int L : {3, 5, 7}) {
        const std::uint32_t mask = (1u << L) - 1;
        for (int M = 0; M <= L / 2; ++M) {
            const SectorMatrix s1 = build_transfer_matrix(L, params_at(u), M);
            const SectorMatrix s2 = build_transfer_matrix(L, params_at(u), L - M);
            const ComplexMatrix m1 = s1.dense(), m2 = s2.dense();
            BigFloat worst = 0;
            for (std::size_t i = 0; i < m1.size(); ++i)
                for (std::size_t j = 0; j < m1.size(); ++j) {
                    const auto fi = static_cast<std::size_t>(s2.basis().index(s1.basis().configs()[i] ^ mask));
                    const auto fj = static_cast<std::size_t>(s2.basis().index(s1.basis().configs()[j] ^ mask));
                    worst = mp::max(worst, abs(m1[i][j] - m2[fi][fj]));
                }
            CHECK(worst < ten_to_minus(60));
            // power sums of the two spectra
            ComplexMatrix p1 = m1, p2 = m2;
            for (std::size_t k = 1; k <= std::min<std::size_t>(m1.size(), 12); ++k) {
                BigComplex t1(0), t2(0);
                for (std::size_t i = 0; i < m1.size(); ++i) {
                    t1 += p1[i][i];
                    t2 += p2[i][i];
                }
                CHECK(abs(t1 - t2) <= ten_to_minus(20) * mp::max(BigFloat(1), abs(t1)));
                p1 = matmul(p1, m1);
                p2 = matmul(p2, m2);
            }
        }
    }
}

TEST_CASE("dominant eigenvalue is 2^L") {
    PrecisionScope scope(256);
    for (int L = 1; L <= 11; L += 2) {
        const EigenResult r = largest_eigenvalue(build_transfer_matrix(L, params_at(1), dominant_up_count(L)));
        const BigFloat expected = mp::pow(BigFloat(2), L);
        CHECK(mp::abs(abs(r.eigenvalue) - expected) / expected < ten_to_minus(20));
        // positive real under this convention
        CHECK(mp::abs(arg(r.eigenvalue)) < ten_to_minus(20));
    }
}

TEST_CASE("dominant sector agrees with the full space") {
    PrecisionScope scope(256);
    for (int L : {3, 5, 7}) CHECK(check_dominant_sector(L, params_at(1)).agree);
}

TEST_CASE("double-precision spectrum") {
    PrecisionScope scope(256);
    const auto mods = top_moduli_double(build_transfer_matrix(5, params_at(1), 2), 3);
    REQUIRE(mods.size() == 3);
    CHECK(mods[0] == doctest::Approx(32));
    CHECK(mods[1] == doctest::Approx(11.723).epsilon(1e-4));
}

TEST_CASE("caps") {
    PrecisionScope scope(128);
    CHECK_THROWS_AS(build_transfer_matrix(17, params_at(1), 8), CapExceeded);
    CHECK_THROWS_AS(build_transfer_matrix(13, params_at(1), -1), CapExceeded);
    CHECK_THROWS_AS(vertex_weights(params_at(BigComplex::unit(-big_pi() / 3))), PoleError);
}

TEST_CASE("polynomial roots") {
    PrecisionScope scope(256);
    const ComplexVector r = polynomial_roots(RatPoly{2, -3, 1});
    REQUIRE(r.size() == 2);
    const BigFloat lo = mp::min(r[0].re, r[1].re), hi = mp::max(r[0].re, r[1].re);
    CHECK(mp::abs(lo - 1) < ten_to_minus(70));
    CHECK(mp::abs(hi - 2) < ten_to_minus(70));
    for (long N = 1; N <= 8; ++N) {
        const RatPoly Q = solve_tq(N).Q;
        for (const auto& z : polynomial_roots(Q)) {
            BigComplex v(0);
            for (auto it = Q.coeffs().rbegin(); it != Q.coeffs().rend(); ++it) v = v * z + BigComplex(*it);
            CHECK(abs(v) < ten_to_minus(60));
        }
    }
}

TEST_CASE("Bethe equations from the T-Q roots") {
    PrecisionScope scope(256);
    const BigComplex q = RMatrixParams::stochastic().q();
    {
        const BetheState s{{BigComplex(1)}};
        CHECK(bethe_residuals(3, s, q)[0] < ten_to_minus(60));
        const BigComplex lam = bethe_eigenvalue(3, BigComplex(1 + BigFloat("1e-8")), s, q);
        CHECK(mp::abs(abs(lam) - 8) < BigFloat("1e-6"));
        CHECK_THROWS_AS(bethe_eigenvalue(3, BigComplex(1), s, q), PoleError);
    }
    for (long N = 1; N <= 5; ++N) {
        const BetheState s = bethe_state_from_q(solve_tq(N).Q);
        for (const auto& r : bethe_residuals(static_cast<int>(2 * N + 1), s, q)) CHECK(r < ten_to_minus(25));
    }
    // perturbed roots
    BetheState bad = bethe_state_from_q(solve_tq(2).Q);
    bad.roots[0] += BigComplex(BigFloat("0.01"));
    BigFloat worst = 0;
    for (const auto& r : bethe_residuals(5, bad, q)) worst = mp::max(worst, r);
    CHECK(worst > BigFloat("1e-3"));
}

TEST_CASE("Bethe eigenvalue matches the transfer matrix") {
    PrecisionScope scope(256);
    const BigComplex q = RMatrixParams::stochastic().q();
    {
        const BetheState s = bethe_state_from_q(solve_tq(2).Q);
        CHECK(mp::abs(abs(bethe_eigenvalue(5, BigComplex(1), s, q)) - 32) < ten_to_minus(15));
    }
    const BigComplex u0(BigFloat("1.1"), BigFloat("0.05"));
    for (int N = 0; N <= 5; ++N) {
        const int L = 2 * N + 1;
        const BetheState s = bethe_state_from_q(solve_tq(N).Q);
        const EigenResult top = largest_eigenvalue(build_transfer_matrix(L, params_at(1), N));
        const ComplexVector tv = build_transfer_matrix(L, params_at(u0), N).apply(top.eigenvector);
        const BigComplex Lambda_tm = [&] {
            BigComplex num(0), den(0);
            for (std::size_t i = 0; i < tv.size(); ++i) {
                num += top.eigenvector[i].conj() * tv[i];
                den += top.eigenvector[i].conj() * top.eigenvector[i];
            }
            return num / den;
        }();
        const BigComplex Lambda_ba = bethe_eigenvalue(L, u0, s, q);
        const BigComplex Lambda_tq = tq_eigenvalue(L, N, u0, q);
        CHECK(abs(Lambda_ba - Lambda_tm) / abs(Lambda_tm) < ten_to_minus(15));
        CHECK(abs(Lambda_tq - Lambda_tm) / abs(Lambda_tm) < ten_to_minus(15));
    }
}

TEST_CASE("finite-difference densities") {
    PrecisionScope scope(256);
    const BigFloat h("1e-5");
    CHECK(mp::abs(nu_finite_difference(1, h).nu) < BigFloat("1e-10"));
    CHECK(mp::abs(nu_finite_difference(3, h).nu - to_bigfloat(Rational(1, 12))) < BigFloat("1e-8"));
    const FiniteDifferenceResult r5 = nu_finite_difference(5, h);
    CHECK(mp::abs(r5.nu - to_bigfloat(Rational(37, 400))) < BigFloat("1e-8"));
    CHECK(mp::abs(r5.lambda_max - 32) < ten_to_minus(20));
    CHECK_THROWS_AS(nu_finite_difference(5, BigFloat("1e-12")), DomainError);
    CHECK_THROWS_AS(nu_finite_difference(4, h), DomainError);
}
