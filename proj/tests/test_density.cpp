#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oddloop/density.hpp"
#include "oddloop/errors.hpp"

using namespace oddloop;
namespace mp = boost::multiprecision;

TEST_CASE("published odd densities") {
    CHECK(nu_odd(1) == Rational(1, 12));
    CHECK(nu_odd(2) == Rational(37, 400));
    CHECK(nu_odd(3) == Rational(597, 6272));
    CHECK(nu_odd(4) == Rational(2441, 25344));
    CHECK(nu_odd(5) == Rational(78035, 805376));
    CHECK_THROWS_AS(nu_odd(0), DomainError);
}

TEST_CASE("extended odd densities") {
    CHECK(nu_odd_extended(1) == Rational(0));
    CHECK(nu_odd_extended(3) == Rational(1, 12));
    CHECK(nu_odd_extended(9) == Rational(2441, 25344));
    CHECK_THROWS_AS(nu_odd_extended(4), DomainError);
    CHECK_THROWS_AS(nu_odd_extended(-3), DomainError);
}

TEST_CASE("gamma and Pochhammer forms agree") {
    for (long N = 1; N <= 50; ++N) CHECK(nu_odd_gamma_form(N) == nu_odd(N));
}

TEST_CASE("exact reductions match floating gamma evaluation") {
    PrecisionScope scope(256);
    for (long N = 1; N <= 30; ++N) {
        const BigFloat exact = to_bigfloat(nu_odd(N));
        CHECK(mp::abs(nu_odd_gamma_numeric(N) - exact) < ten_to_minus(60));
    }
}

TEST_CASE("L = 1 by hand: Gamma(1/2) cancels") {
    // nu_c(2) = 3/4 * x + 9/4 / x - 5/2 with x = Gamma(1/2)Gamma(2)/(Gamma(3/2)Gamma(1)) = 2
    CHECK(nu_even_contractible(1) == Rational(1, 8));
    CHECK_THROWS_AS(nu_even_contractible(0), DomainError);
}

TEST_CASE("odd densities increase towards the bulk value") {
    PrecisionScope scope(256);
    const BigFloat bulk = AsymptoticSeries::for_parity(Parity::Odd).bulk;
    Rational prev = nu_odd(1);
    for (long N = 2; N <= 100; ++N) {
        const Rational cur = nu_odd(N);
        CHECK(cur > prev);
        prev = cur;
    }
    CHECK(to_bigfloat(prev) < bulk);
    CHECK(prev <= Rational(1, 8));
}

TEST_CASE("even contractible densities approach the bulk value") {
    PrecisionScope scope(256);
    const BigFloat bulk = AsymptoticSeries::for_parity(Parity::Even).bulk;
    BigFloat prev_gap = 1;
    for (long N = 2; N <= 100; ++N) {
        const BigFloat gap = mp::abs(to_bigfloat(nu_even_contractible(N)) - bulk);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("asymptotic expansion") {
    PrecisionScope scope(256);
    const BigFloat s3 = mp::sqrt(BigFloat(3));
    CHECK(mp::abs(nu_asymptotic(7, Parity::Odd, 0) - BigFloat("0.0980762113533159402911695122588085504142")) <
          ten_to_minus(35));
    // order-4 truncation at L = 11 against the exact value
    const BigFloat L(11);
    const BigFloat err = mp::abs(nu_asymptotic(L, Parity::Odd, 4) - to_bigfloat(nu_odd(5)));
    CHECK(err * mp::pow(L, 6) < 1);
    const AsymptoticSeries odd = AsymptoticSeries::for_parity(Parity::Odd);
    const AsymptoticSeries even = AsymptoticSeries::for_parity(Parity::Even);
    CHECK(mp::abs(odd.c2 + even.c2) < ten_to_minus(70));
    CHECK(mp::abs(odd.c2 + 1 / (4 * s3)) < ten_to_minus(70));
    CHECK_THROWS_AS(nu_asymptotic(L, Parity::Odd, 3), DomainError);
}

TEST_CASE("L^2 and L^4 scaled residuals at L = 201") {
    PrecisionScope scope(256);
    const BigFloat s3 = mp::sqrt(BigFloat(3));
    const BigFloat L(201);
    const AsymptoticSeries odd = AsymptoticSeries::for_parity(Parity::Odd);
    const BigFloat nu = to_bigfloat(nu_odd(100));
    const BigFloat r2 = (nu - odd.bulk) * L * L;
    CHECK(mp::abs(r2 / odd.c2 - 1) < BigFloat("0.002"));
    const BigFloat r4 = (nu - odd.bulk + 1 / (4 * s3 * L * L)) * mp::pow(L, 4);
    CHECK(mp::abs(r4 / odd.c4 - 1) < BigFloat("0.02"));

    const AsymptoticSeries even = AsymptoticSeries::for_parity(Parity::Even);
    const BigFloat E(200);
    const BigFloat nue = to_bigfloat(nu_even_contractible(100));
    CHECK(mp::abs((nue - even.bulk) * E * E / even.c2 - 1) < BigFloat("0.002"));
    const BigFloat r4e = (nue - even.bulk - 1 / (4 * s3 * E * E)) * mp::pow(E, 4);
    CHECK(mp::abs(r4e / even.c4 - 1) < BigFloat("0.02"));
}

TEST_CASE("records and rendering") {
    const DensityRecord r = density_record(3);
    CHECK(r.N == 1);
    CHECK(r.parity == Parity::Odd);
    CHECK(r.value.str() == "1/12");
    CHECK(r.decimal() == "0.0833333333333");
    CHECK(density_record(2).value == Rational(1, 8));
    CHECK(density_record(1).decimal() == "0");
    CHECK(decimal_string(Rational(37, 400)) == "0.0925");
    CHECK(parse_parity("even") == Parity::Even);
    CHECK_THROWS_AS(parse_parity("both"), DomainError);
}
