#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "oddloop/bigfloat.hpp"
#include "oddloop/polynomial.hpp"

namespace oddloop {

inline constexpr int kSixVertexCap = 15;
inline constexpr int kFullSpaceCap = 11;

/// Spectral parameter u and q = exp(i gamma).
struct RMatrixParams {
    BigComplex u{1};
    BigFloat gamma;

    /// u = 1 at the stochastic point gamma = pi/3.
    static RMatrixParams stochastic(const BigComplex& u = BigComplex(1));
    BigComplex q() const;
};

/// a = (u-q)/(1-qu), b = 1, c = sqrt(u/q)(1-q^2)/(1-qu), principal root.
struct VertexWeights {
    BigComplex a, b, c;
    /// All three weights have zero imaginary part.
    bool real = false;
    /// u/q lies close to the negative real axis, where the principal root jumps.
    bool branch_warning = false;
};

VertexWeights vertex_weights(const RMatrixParams& params);

/// Spin configurations of L sites with a fixed number of up arrows (bit set),
/// or every configuration when up_count < 0.
class SectorBasis {
public:
    SectorBasis(int L, int up_count);

    int L() const { return L_; }
    int up_count() const { return up_count_; }
    std::size_t size() const { return configs_.size(); }
    const std::vector<std::uint32_t>& configs() const { return configs_; }
    /// Position of a configuration in the basis, or -1.
    long index(std::uint32_t config) const { return index_[config]; }

private:
    int L_;
    int up_count_;
    std::vector<std::uint32_t> configs_;
    std::vector<long> index_;
};

using ComplexVector = std::vector<BigComplex>;
using ComplexMatrix = std::vector<ComplexVector>;  // row-major

/// Row transfer matrix Tr_0(R_0L ... R_01) restricted to a sector, applied
/// matrix-free by sweeping the auxiliary line across the row.
class SectorMatrix {
public:
    SectorMatrix(int L, const RMatrixParams& params, int up_count);

    int L() const { return basis_.L(); }
    int up_count() const { return basis_.up_count(); }
    std::size_t dimension() const { return basis_.size(); }
    const SectorBasis& basis() const { return basis_; }
    const RMatrixParams& params() const { return params_; }
    const VertexWeights& weights() const { return weights_; }

    ComplexVector apply(const ComplexVector& v) const;
    ComplexMatrix dense() const;
    /// Double-precision copy, for warm starts and low-precision spectra.
    std::vector<std::vector<std::complex<double>>> dense_double() const;

private:
    SectorBasis basis_;
    RMatrixParams params_;
    VertexWeights weights_;
};

/// Throws CapExceeded above kSixVertexCap (kFullSpaceCap for the full space).
SectorMatrix build_transfer_matrix(int L, const RMatrixParams& params, int up_count, int cap = kSixVertexCap);

int dominant_up_count(int L);

struct PowerOptions {
    /// Relative tolerance on the eigenvalue.
    BigFloat tolerance{"1e-20"};
    int max_iterations = 20000;
    bool warm_start = true;
};

struct EigenResult {
    BigComplex eigenvalue;
    ComplexVector eigenvector;  // unit 2-norm
    int iterations = 0;
    int warm_iterations = 0;
};

/// Eigenvalue of maximal modulus by power iteration, warm-started in double
/// precision. Throws ConvergenceError past max_iterations.
EigenResult largest_eigenvalue(const SectorMatrix& mat, const PowerOptions& options = {});

/// Moduli of the k largest eigenvalues in double precision (dense solve).
std::vector<double> top_moduli_double(const SectorMatrix& mat, int k);

/// Roots of a rational polynomial at working precision (Aberth iteration).
ComplexVector polynomial_roots(const RatPoly& p, int max_iterations = 500);

struct BetheState {
    ComplexVector roots;
    int M() const { return static_cast<int>(roots.size()); }
};

BetheState bethe_state_from_q(const RatPoly& Q);

/// Lambda_M(u) from the Bethe formula. Throws PoleError when u hits a root.
BigComplex bethe_eigenvalue(int L, const BigComplex& u, const BetheState& state, const BigComplex& q);

/// |lhs - rhs| of each Bethe equation.
std::vector<BigFloat> bethe_residuals(int L, const BetheState& state, const BigComplex& q);

/// q(1+u)^L (-q)^(L-M) / (1-qu)^L, the eigenvalue implied by T(u) = q(1+u)^L.
BigComplex tq_eigenvalue(int L, int M, const BigComplex& u, const BigComplex& q);

struct DominantSectorCheck {
    BigFloat sector_modulus;
    BigFloat full_modulus;
    bool agree = false;
};

/// Compares the sector dominant eigenvalue with the full-space maximum (L <= 9).
DominantSectorCheck check_dominant_sector(int L, const RMatrixParams& params, const PowerOptions& options = {});

struct FiniteDifferenceResult {
    BigFloat nu;
    BigFloat nu_central;   // plain central difference at dgamma
    BigFloat lambda_max;   // at gamma = pi/3
    BigFloat lambda_phase; // argument of the dominant eigenvalue at gamma = pi/3
};

/// nu(L) = n d f_L / dn at n = 1, with f_L = log|Lambda_max(1)| / L, by a
/// central difference in gamma plus one Richardson level. For L <= 9 the
/// dominant sector is checked against the full space (SectorMismatch).
FiniteDifferenceResult nu_finite_difference(int L, const BigFloat& dgamma);

}  // namespace oddloop
