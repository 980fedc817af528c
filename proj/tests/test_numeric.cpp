#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oddloop/bigfloat.hpp"
#include "oddloop/cyclo.hpp"
#include "oddloop/hypergeometric.hpp"
#include "oddloop/polynomial.hpp"

using namespace oddloop;

namespace {

Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-1000, 1000);
    std::uniform_int_distribution<long> den(1, 500);
    return Rational(num(rng), den(rng));
}

Cyclo random_cyclo(std::mt19937_64& rng) { return Cyclo(random_rational(rng), random_rational(rng)); }

RatPoly random_poly(std::mt19937_64& rng, int max_degree) {
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::vector<Rational> c(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& x : c) x = random_rational(rng);
    if (c.back().is_zero()) c.back() = Rational(1);
    return RatPoly(std::move(c));
}

}  // namespace

TEST_CASE("rational canonical form") {
    CHECK(Rational(6, -4).str() == "-3/2");
    CHECK(Rational(0, 7).str() == "0/1");
    CHECK(Rational(5).str() == "5/1");
    CHECK(Rational::parse("-12/8") == Rational(-3, 2));
    CHECK(Rational::parse("7") == Rational(7));
    CHECK_THROWS_AS(Rational(1, 0), DivisionByZero);
    CHECK_THROWS_AS(Rational(1) / Rational(0), DivisionByZero);
    CHECK_THROWS_AS(Rational::parse("x/2"), DomainError);
}

TEST_CASE("rational arithmetic is exact") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10000; ++i) {
        const Rational a = random_rational(rng);
        const Rational c = random_rational(rng);
        CHECK((a + c) - c == a);
        const Rational back = Rational::parse(a.str());
        CHECK(back == a);
    }
}

TEST_CASE("cyclo_mul examples") {
    const Cyclo w = Cyclo::omega();
    CHECK(cyclo_mul(w, w) == Cyclo(-1, 1));
    CHECK(cyclo_mul(cyclo_mul(w, w), w) == Cyclo(-1));
    CHECK(cyclo_mul(Cyclo(1) + w, Cyclo(1) - w) == Cyclo(2, -1));
    CHECK(w.pow(6) == Cyclo(1));
    for (long k = -7; k <= 13; ++k) CHECK(Cyclo::omega_pow(k) == w.pow(k));
}

TEST_CASE("cyclo_inv examples") {
    const Cyclo w = Cyclo::omega();
    CHECK(cyclo_inv(w) == Cyclo(1, -1));
    CHECK(cyclo_inv(Cyclo(2)) == Cyclo(Rational(1, 2)));
    const Cyclo q2 = w - Cyclo(1);
    CHECK(cyclo_inv(q2) == -w);
    CHECK(q2 * (-w) == Cyclo(1));
    CHECK_THROWS_AS(cyclo_inv(Cyclo()), DivisionByZero);
}

TEST_CASE("cyclo serialization") {
    const Cyclo x(Rational(-1, 2), Rational(3, 4));
    CHECK(x.str() == "-1/2 + 3/4*w");
    CHECK(Cyclo::parse(x.str()) == x);
    CHECK_THROWS_AS(Cyclo::parse("garbage"), DomainError);
}

TEST_CASE("field axioms on Q(w), randomized") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 10000; ++i) {
        const Cyclo x = random_cyclo(rng), y = random_cyclo(rng), z = random_cyclo(rng);
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * (y + z) == x * y + x * z);
        CHECK(x * y == y * x);
        if (!x.is_zero()) CHECK(x * x.inverse() == Cyclo(1));
    }
}

TEST_CASE("poly_divide_exact examples") {
    const RatPoly cube = RatPoly::binomial_power(1, 1, 3);
    CHECK(poly_divide_exact(RatPoly{-1, -2, 0, 2, 1}, cube) == RatPoly{-1, 1});
    const RatPoly p7 = RatPoly::binomial_power(1, 1, 7);
    CHECK(poly_divide_exact(p7, p7) == RatPoly{1});
    CHECK(poly_divide_exact(RatPoly{1, 0, -5, -5, 0, 1}, cube) == RatPoly{1, -3, 1});
    CHECK_THROWS_AS(poly_divide_exact(RatPoly{1, 0, -5, -5, 0, 2}, cube), NonDivisible);
    CHECK_THROWS_AS(poly_divide_exact(cube, RatPoly()), DivisionByZero);
}

TEST_CASE("poly_divide_exact inverts multiplication, randomized") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        const RatPoly p = random_poly(rng, 8);
        const RatPoly d = random_poly(rng, 5);
        CHECK(poly_divide_exact(p * d, d) == p);
    }
}

TEST_CASE("polynomial helpers") {
    const RatPoly p{1, 2, 3};  // 1 + 2u + 3u^2
    CHECK(p.derivative() == RatPoly{2, 6});
    CHECK(p.degree() == 2);
    CHECK(RatPoly().degree() == -1);
    CHECK(p.evaluate(Rational(2)) == Rational(17));
    // p(w u) evaluated at 1 equals p(w)
    CHECK(substitute_omega(p, 1).evaluate(Cyclo(1)) == p.evaluate(Cyclo::omega()));
    CHECK(substitute_omega(p, 6) == promote(p));
}

TEST_CASE("hyp2f1_terminating examples") {
    CHECK(hyp2f1_terminating(0, Rational(5, 7), Rational(2, 3), 3) == RatPoly{1});
    CHECK(hyp2f1_terminating(-1, Rational(-2, 3), Rational(4, 3), 3) == RatPoly{1, 0, 0, Rational(-1, 2)});
    CHECK(hyp2f1_terminating(-1, Rational(-5, 3), Rational(1, 3), 3) == RatPoly{1, 0, 0, -5});
    CHECK_THROWS_AS(hyp2f1_terminating(-3, Rational(1, 2), Rational(-1), 1), DomainError);
    CHECK_THROWS_AS(hyp2f1_terminating(2, Rational(1, 2), Rational(1), 1), DomainError);
}

TEST_CASE("hyp2f1 coefficients obey the term-ratio recurrence") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const long n = std::uniform_int_distribution<long>(1, 12)(rng);
        const Rational b(std::uniform_int_distribution<long>(-40, 40)(rng), 3);
        Rational c(std::uniform_int_distribution<long>(1, 40)(rng), 3);
        const unsigned p = static_cast<unsigned>(std::uniform_int_distribution<int>(1, 3)(rng));
        const RatPoly f = hyp2f1_terminating(-n, b, c, p);
        for (long k = 0; k < n; ++k) {
            const Rational lower = f.coeff(static_cast<std::size_t>(k) * p);
            if (lower.is_zero()) break;
            const Rational ratio = f.coeff(static_cast<std::size_t>(k + 1) * p) / lower;
            CHECK(ratio == -(Rational(-n) + Rational(k)) * (b + Rational(k)) / ((c + Rational(k)) * Rational(k + 1)));
        }
    }
}

TEST_CASE("gamma_ratio reduces to Pochhammer products") {
    CHECK(gamma_ratio(Rational(7, 2), Rational(1, 2)) == Rational(15, 8));
    CHECK(gamma_ratio(Rational(1, 2), Rational(7, 2)) == Rational(8, 15));
    CHECK(gamma_ratio(Rational(5), Rational(1)) == Rational(24));
    CHECK_THROWS_AS(gamma_ratio(Rational(1, 3), Rational(1, 2)), DomainError);
    CHECK_THROWS_AS(gamma_ratio(Rational(-1), Rational(1)), DomainError);
}

TEST_CASE("float layer") {
    PrecisionScope scope(256);
    CHECK(working_precision_bits() >= 256);
    const BigComplex q(Cyclo::omega());
    const BigComplex expected = BigComplex::unit(big_pi() / 3);
    CHECK(abs(q - expected) < ten_to_minus(70));
    // principal sqrt
    const BigComplex r = sqrt(BigComplex(BigFloat(-4)));
    CHECK(abs(r - BigComplex(BigFloat(0), BigFloat(2))) < ten_to_minus(70));
    CHECK(abs(pow(q, 6) - BigComplex(1)) < ten_to_minus(70));
    CHECK(abs(exp(log(q)) - q) < ten_to_minus(70));
    const BigFloat third = to_bigfloat(Rational(1, 3));
    CHECK(boost::multiprecision::abs(third * 3 - 1) < ten_to_minus(75));
    {
        PrecisionScope inner(512);
        CHECK(working_precision_bits() >= 512);
    }
    CHECK(working_precision_bits() < 512);
}
