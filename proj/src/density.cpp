#include "oddloop/density.hpp"

#include "oddloop/errors.hpp"
#include "oddloop/hypergeometric.hpp"

namespace oddloop {

namespace mp = boost::multiprecision;

std::string to_string(Parity p) { return p == Parity::Odd ? "odd" : "even"; }

Parity parse_parity(const std::string& text) {
    if (text == "odd") return Parity::Odd;
    if (text == "even") return Parity::Even;
    throw DomainError("parity must be 'odd' or 'even', got '" + text + "'");
}

Rational nu_odd(long N) {
    if (N <= 0) throw DomainError("nu_odd requires N >= 1, got " + std::to_string(N));
    const auto n = static_cast<unsigned>(N);
    const Rational half_N(N, 2);
    const Rational first = pochhammer(Rational(1, 2) + half_N, n + 1) / pochhammer(half_N, n);
    const Rational second = pochhammer(Rational(1) + half_N, n + 1) / pochhammer(Rational(1, 2) + half_N, n);
    return (first + second) / Rational(2 * N + 1) - Rational(5, 2);
}

Rational nu_odd_gamma_form(long N) {
    if (N <= 0) throw DomainError("nu_odd_gamma_form requires N >= 1, got " + std::to_string(N));
    const Rational h(N, 2);
    const Rational h3(3 * N, 2);
    const Rational half(1, 2);
    // Gamma(N/2) Gamma(3/2 + 3N/2) / (Gamma(3N/2) Gamma(1/2 + N/2))
    const Rational first = gamma_ratio(Rational(3, 2) + h3, half + h) * gamma_ratio(h, h3);
    // Gamma(1/2 + N/2) Gamma(2 + 3N/2) / (Gamma(1 + N/2) Gamma(1/2 + 3N/2))
    const Rational second = gamma_ratio(Rational(2) + h3, Rational(1) + h) * gamma_ratio(half + h, half + h3);
    return (first + second) / Rational(2 * N + 1) - Rational(5, 2);
}

Rational nu_odd_extended(long L) {
    if (L <= 0 || L % 2 == 0) throw DomainError("nu_odd_extended requires odd L >= 1, got " + std::to_string(L));
    if (L == 1) return Rational(0);
    return nu_odd((L - 1) / 2);
}

Rational nu_even_contractible(long N) {
    if (N <= 0) throw DomainError("nu_even_contractible requires N >= 1, got " + std::to_string(N));
    const Rational h(N, 2);
    const Rational h3(3 * N, 2);
    const Rational half(1, 2);
    // x = Gamma(N/2) Gamma(1/2 + 3N/2) / (Gamma(3N/2) Gamma(1/2 + N/2)); the second
    // ratio of the closed form is its reciprocal.
    const Rational x = gamma_ratio(half + h3, half + h) * gamma_ratio(h, h3);
    return Rational(3, 4) * x + Rational(9, 4) * x.inverse() - Rational(5, 2);
}

BigFloat nu_odd_gamma_numeric(long N) {
    if (N <= 0) throw DomainError("nu_odd_gamma_numeric requires N >= 1");
    const BigFloat n(N);
    auto g = [](const BigFloat& x) { return mp::tgamma(x); };
    const BigFloat first = g(n / 2) * g(BigFloat(3) / 2 + 3 * n / 2) / (g(3 * n / 2) * g(BigFloat(1) / 2 + n / 2));
    const BigFloat second = g(BigFloat(1) / 2 + n / 2) * g(2 + 3 * n / 2) / (g(1 + n / 2) * g(BigFloat(1) / 2 + 3 * n / 2));
    return (first + second) / (1 + 2 * n) - BigFloat(5) / 2;
}

AsymptoticSeries AsymptoticSeries::for_parity(Parity parity) {
    const BigFloat s3 = mp::sqrt(BigFloat(3));
    AsymptoticSeries s{parity, (3 * s3 - 5) / 2, 0, 0};
    if (parity == Parity::Odd) {
        s.c2 = BigFloat(-1) / (4 * s3);
        s.c4 = BigFloat(35) / (144 * s3);
    } else {
        s.c2 = BigFloat(1) / (4 * s3);
        s.c4 = BigFloat(-23) / (48 * s3);
    }
    return s;
}

BigFloat nu_asymptotic(const BigFloat& L, Parity parity, int order) {
    if (order != 0 && order != 2 && order != 4) throw DomainError("asymptotic order must be 0, 2 or 4");
    if (L <= 0) throw DomainError("nu_asymptotic requires L > 0");
    const AsymptoticSeries s = AsymptoticSeries::for_parity(parity);
    BigFloat value = s.bulk;
    const BigFloat inv2 = 1 / (L * L);
    if (order >= 2) value += s.c2 * inv2;
    if (order >= 4) value += s.c4 * inv2 * inv2;
    return value;
}

std::string DensityRecord::decimal() const { return decimal_string(value); }

DensityRecord density_record(long L) {
    if (L <= 0) throw DomainError("circumference must be positive");
    if (L % 2 == 1) return {L, (L - 1) / 2, Parity::Odd, nu_odd_extended(L)};
    return {L, L / 2, Parity::Even, nu_even_contractible(L / 2)};
}

std::string decimal_string(const Rational& value, int significant_digits) {
    return decimal_string(to_bigfloat(value), significant_digits);
}

std::string decimal_string(const BigFloat& value, int significant_digits) {
    if (value == 0) return "0";
    return value.str(significant_digits, std::ios_base::fmtflags(0));
}

}  // namespace oddloop
