#include "oddloop/bigfloat.hpp"

#include <cmath>
#include <sstream>

#include "oddloop/errors.hpp"

namespace oddloop {

namespace {

unsigned digits10_for_bits(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398119521));
}

unsigned g_requested_bits = kDefaultPrecisionBits;

const bool g_precision_initialized = [] {
    BigFloat::default_precision(digits10_for_bits(kDefaultPrecisionBits));
    return true;
}();

}  // namespace

PrecisionScope::PrecisionScope(unsigned bits) : bits_(bits), saved_digits10_(BigFloat::default_precision()) {
    if (bits < 16) throw DomainError("precision below 16 bits");
    BigFloat::default_precision(digits10_for_bits(bits));
    saved_bits_ = g_requested_bits;
    g_requested_bits = bits;
}

PrecisionScope::~PrecisionScope() {
    BigFloat::default_precision(saved_digits10_);
    g_requested_bits = saved_bits_;
}

unsigned working_precision_bits() {
    BigFloat probe(0);
    return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

unsigned requested_precision_bits() { return g_requested_bits; }

BigFloat to_bigfloat(const Rational& x) {
    BigFloat r;
    mpfr_set_q(r.backend().data(), x.value().get_mpq_t(), MPFR_RNDN);
    return r;
}

BigFloat big_pi() {
    BigFloat r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

BigFloat ten_to_minus(int exponent) { return boost::multiprecision::pow(BigFloat(10), -exponent); }

BigComplex::BigComplex(const Cyclo& c) {
    // a + b w with w = 1/2 + i sqrt(3)/2
    const BigFloat a = to_bigfloat(c.re_part());
    const BigFloat b = to_bigfloat(c.om_part());
    re = a + b / 2;
    im = b * boost::multiprecision::sqrt(BigFloat(3)) / 2;
}

BigComplex BigComplex::unit(const BigFloat& theta) {
    return {boost::multiprecision::cos(theta), boost::multiprecision::sin(theta)};
}

BigComplex& BigComplex::operator*=(const BigComplex& o) {
    BigFloat r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
}

BigComplex& BigComplex::operator/=(const BigComplex& o) {
    const BigFloat d = o.norm();
    if (d == 0) throw DivisionByZero("complex division by zero");
    BigFloat r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = std::move(r);
    return *this;
}

BigFloat abs(const BigComplex& z) { return boost::multiprecision::sqrt(z.norm()); }

BigFloat arg(const BigComplex& z) { return boost::multiprecision::atan2(z.im, z.re); }

BigComplex exp(const BigComplex& z) {
    const BigFloat m = boost::multiprecision::exp(z.re);
    return {m * boost::multiprecision::cos(z.im), m * boost::multiprecision::sin(z.im)};
}

BigComplex log(const BigComplex& z) {
    if (z.re == 0 && z.im == 0) throw DomainError("log of zero");
    return {boost::multiprecision::log(abs(z)), arg(z)};
}

BigComplex sqrt(const BigComplex& z) {
    const BigFloat r = abs(z);
    if (r == 0) return {};
    BigFloat re = boost::multiprecision::sqrt((r + z.re) / 2);
    BigFloat im = boost::multiprecision::sqrt((r - z.re) / 2);
    if (z.im < 0) im = -im;
    return {std::move(re), std::move(im)};
}

BigComplex pow(const BigComplex& z, long n) {
    if (n < 0) return BigComplex(1) / pow(z, -n);
    BigComplex result(1);
    BigComplex base = z;
    while (n > 0) {
        if (n & 1) result *= base;
        base *= base;
        n >>= 1;
    }
    return result;
}

std::string to_string(const BigFloat& x, int significant_digits) {
    return x.str(significant_digits, std::ios_base::scientific);
}

std::string to_string(const BigComplex& z, int significant_digits) {
    std::ostringstream os;
    os << to_string(z.re, significant_digits) << (z.im < 0 ? " - " : " + ")
       << to_string(boost::multiprecision::abs(z.im), significant_digits) << "i";
    return os.str();
}

}  // namespace oddloop
