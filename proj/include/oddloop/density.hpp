#pragma once

#include <string>

#include "oddloop/bigfloat.hpp"
#include "oddloop/rational.hpp"

namespace oddloop {

enum class Parity { Odd, Even };

std::string to_string(Parity p);
Parity parse_parity(const std::string& text);

/// Number of significant digits used whenever a density is rendered as a decimal.
inline constexpr int kDecimalDigits = 12;

/// Exact loop density nu(2N+1) from the Pochhammer-product closed form.
/// Requires N >= 1; nu(1) is handled by nu_odd_extended.
Rational nu_odd(long N);

/// The same density evaluated from the gamma-function closed form, with each
/// gamma ratio paired by integer argument shifts and reduced exactly.
Rational nu_odd_gamma_form(long N);

/// nu(L) for any odd L >= 1, with nu(1) = 0.
Rational nu_odd_extended(long L);

/// Density of contractible loops on the even cylinder of circumference 2N.
Rational nu_even_contractible(long N);

/// Direct evaluation of the gamma-function closed form in floating point, for
/// checking the exact reductions. Uses the current working precision.
BigFloat nu_odd_gamma_numeric(long N);

/// Large-L expansion nu = bulk + c2 L^-2 + c4 L^-4.
struct AsymptoticSeries {
    Parity parity;
    BigFloat bulk;
    BigFloat c2;
    BigFloat c4;

    static AsymptoticSeries for_parity(Parity parity);
};

/// Truncated expansion including terms up to L^-order (order in {0, 2, 4}).
BigFloat nu_asymptotic(const BigFloat& L, Parity parity, int order);

/// One row of a density table.
struct DensityRecord {
    long L = 0;
    long N = 0;
    Parity parity = Parity::Odd;
    Rational value;

    std::string decimal() const;
};

/// Closed-form record for circumference L (odd uses nu_odd_extended, even
/// uses nu_even_contractible).
DensityRecord density_record(long L);

/// Decimal rendering of an exact rational at kDecimalDigits significant digits.
std::string decimal_string(const Rational& value, int significant_digits = kDecimalDigits);
std::string decimal_string(const BigFloat& value, int significant_digits = kDecimalDigits);

}  // namespace oddloop
