#include "oddloop/polynomial.hpp"

namespace oddloop {

CycloPoly promote(const RatPoly& p) {
    std::vector<Cyclo> out;
    out.reserve(p.coeffs().size());
    for (const auto& c : p.coeffs()) out.emplace_back(c);
    return CycloPoly(std::move(out));
}

CycloPoly substitute_omega(const RatPoly& p, long k) { return substitute_omega(promote(p), k); }

CycloPoly substitute_omega(const CycloPoly& p, long k) {
    std::vector<Cyclo> out;
    out.reserve(p.coeffs().size());
    for (std::size_t j = 0; j < p.coeffs().size(); ++j) {
        out.push_back(p.coeffs()[j] * Cyclo::omega_pow(k * static_cast<long>(j)));
    }
    return CycloPoly(std::move(out));
}

}  // namespace oddloop
