#include "oddloop/sixvertex.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "oddloop/errors.hpp"

namespace oddloop {

namespace mp = boost::multiprecision;

namespace {

// Minimal scalar interface shared by the four kernels.
inline double sq_mod(double x) { return x * x; }
inline double sq_mod(const std::complex<double>& x) { return std::norm(x); }
inline BigFloat sq_mod(const BigFloat& x) { return x * x; }
inline BigFloat sq_mod(const BigComplex& x) { return x.norm(); }
inline double conj_of(double x) { return x; }
inline std::complex<double> conj_of(const std::complex<double>& x) { return std::conj(x); }
inline BigFloat conj_of(const BigFloat& x) { return x; }
inline BigComplex conj_of(const BigComplex& x) { return x.conj(); }
inline double root(double x) { return std::sqrt(x); }
inline BigFloat root(const BigFloat& x) { return mp::sqrt(x); }

inline bool is_zero(double x) { return x == 0; }
inline bool is_zero(const std::complex<double>& x) { return x == std::complex<double>(0); }
inline bool is_zero(const BigFloat& x) { return x.is_zero(); }
inline bool is_zero(const BigComplex& x) { return x.re.is_zero() && x.im.is_zero(); }

template <class S>
struct Kernel {
    const SectorBasis& basis;
    S a, b, c;

    struct Workspace {
        std::vector<S> cur[2], nxt[2];
        std::vector<std::uint32_t> act[2], nact[2];
        std::vector<std::uint8_t> mark[2];

        explicit Workspace(int L) {
            const std::size_t full = std::size_t{1} << L;
            for (int k = 0; k < 2; ++k) {
                cur[k].assign(full, S(0));
                nxt[k].assign(full, S(0));
                mark[k].assign(full, 0);
            }
        }
    };

    void push(Workspace& ws, int aux, std::uint32_t config, const S& value) const {
        if (!ws.mark[aux][config]) {
            ws.mark[aux][config] = 1;
            ws.nact[aux].push_back(config);
        }
        ws.nxt[aux][config] += value;
    }

    void apply(const std::vector<S>& in, std::vector<S>& out, Workspace& ws) const {
        const int L = basis.L();
        out.assign(basis.size(), S(0));
        for (int a0 = 0; a0 < 2; ++a0) {
            ws.act[0].clear();
            ws.act[1].clear();
            for (std::size_t j = 0; j < basis.size(); ++j) {
                if (is_zero(in[j])) continue;
                ws.cur[a0][basis.configs()[j]] = in[j];
                ws.act[a0].push_back(basis.configs()[j]);
            }
            for (int site = 0; site < L; ++site) {
                ws.nact[0].clear();
                ws.nact[1].clear();
                for (int aux = 0; aux < 2; ++aux) {
                    for (std::uint32_t cfg : ws.act[aux]) {
                        S& v = ws.cur[aux][cfg];
                        const int spin = static_cast<int>((cfg >> site) & 1u);
                        if (spin == aux) {
                            push(ws, aux, cfg, a * v);
                        } else {
                            push(ws, aux, cfg, b * v);
                            push(ws, spin, cfg ^ (1u << site), c * v);
                        }
                        v = S(0);
                    }
                }
                for (int k = 0; k < 2; ++k) {
                    for (std::uint32_t cfg : ws.nact[k]) ws.mark[k][cfg] = 0;
                    std::swap(ws.cur[k], ws.nxt[k]);
                    std::swap(ws.act[k], ws.nact[k]);
                }
            }
            for (int aux = 0; aux < 2; ++aux) {
                for (std::uint32_t cfg : ws.act[aux]) {
                    if (aux == a0) {
                        const long j = basis.index(cfg);
                        if (j >= 0) out[static_cast<std::size_t>(j)] += ws.cur[aux][cfg];
                    }
                    ws.cur[aux][cfg] = S(0);
                }
            }
        }
    }
};

template <class S>
S inner(const std::vector<S>& x, const std::vector<S>& y) {
    S acc(0);
    for (std::size_t i = 0; i < x.size(); ++i) acc += conj_of(x[i]) * y[i];
    return acc;
}

template <class S, class R>
R norm2(const std::vector<S>& x) {
    R acc(0);
    for (const auto& v : x) acc += sq_mod(v);
    return root(acc);
}

template <class S, class R>
struct PowerOutcome {
    S eigenvalue;
    std::vector<S> vector;
    int iterations = 0;
};

template <class S, class R>
PowerOutcome<S, R> power_iterate(const Kernel<S>& kernel, std::vector<S> v, const R& tol, int max_iter) {
    typename Kernel<S>::Workspace ws(kernel.basis.L());
    {
        const R n = norm2<S, R>(v);
        for (auto& x : v) x = x / S(n);
    }
    std::vector<S> w;
    S lambda(0), prev(0);
    int settled = 0;
    for (int it = 1; it <= max_iter; ++it) {
        kernel.apply(v, w, ws);
        lambda = inner(v, w);
        const R n = norm2<S, R>(w);
        if (n == R(0)) throw ConvergenceError("power iteration hit the zero vector");
        for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / S(n);
        const R change = root(sq_mod(S(lambda - prev)));
        const R scale = root(sq_mod(lambda));
        settled = (it > 1 && change <= tol * scale) ? settled + 1 : 0;
        prev = lambda;
        if (settled >= 3) return {lambda, v, it};
    }
    throw ConvergenceError("power iteration did not converge in " + std::to_string(max_iter) + " iterations");
}

std::complex<double> to_double(const BigComplex& z) {
    return {z.re.convert_to<double>(), z.im.convert_to<double>()};
}

bool near_real(const BigComplex& z) {
    const BigFloat scale = mp::max(abs(z), BigFloat(1));
    return mp::abs(z.im) <= scale * ten_to_minus(static_cast<int>(BigFloat::default_precision()) - 8);
}

}  // namespace

RMatrixParams RMatrixParams::stochastic(const BigComplex& u) {
    RMatrixParams p;
    p.u = u;
    p.gamma = big_pi() / 3;
    return p;
}

BigComplex RMatrixParams::q() const { return BigComplex::unit(gamma); }

VertexWeights vertex_weights(const RMatrixParams& params) {
    const BigComplex q = params.q();
    const BigComplex& u = params.u;
    const BigComplex den = BigComplex(1) - q * u;
    if (abs(den) < ten_to_minus(static_cast<int>(BigFloat::default_precision()) - 8))
        throw PoleError("vertex weights have a pole at u = 1/q");
    VertexWeights w;
    w.a = (u - q) / den;
    w.b = BigComplex(1);
    const BigComplex ratio = u / q;
    w.c = sqrt(ratio) * (BigComplex(1) - q * q) / den;
    w.branch_warning = ratio.re < 0 && mp::abs(ratio.im) < BigFloat("1e-6") * abs(ratio);
    w.real = near_real(w.a) && near_real(w.c);
    if (w.real) {
        w.a.im = 0;
        w.c.im = 0;
    }
    return w;
}

SectorBasis::SectorBasis(int L, int up_count) : L_(L), up_count_(up_count) {
    if (L < 1 || L > 24) throw DomainError("sector basis needs 1 <= L <= 24");
    if (up_count > L) throw DomainError("up count exceeds L");
    const std::uint32_t full = 1u << L;
    index_.assign(full, -1);
    for (std::uint32_t cfg = 0; cfg < full; ++cfg) {
        if (up_count >= 0 && std::popcount(cfg) != up_count) continue;
        index_[cfg] = static_cast<long>(configs_.size());
        configs_.push_back(cfg);
    }
}

SectorMatrix::SectorMatrix(int L, const RMatrixParams& params, int up_count)
    : basis_(L, up_count), params_(params), weights_(vertex_weights(params)) {}

ComplexVector SectorMatrix::apply(const ComplexVector& v) const {
    if (v.size() != dimension()) throw DomainError("vector length does not match the sector dimension");
    Kernel<BigComplex> k{basis_, weights_.a, weights_.b, weights_.c};
    Kernel<BigComplex>::Workspace ws(L());
    ComplexVector out;
    k.apply(v, out, ws);
    return out;
}

ComplexMatrix SectorMatrix::dense() const {
    const std::size_t n = dimension();
    Kernel<BigComplex> k{basis_, weights_.a, weights_.b, weights_.c};
    Kernel<BigComplex>::Workspace ws(L());
    ComplexMatrix m(n, ComplexVector(n));
    ComplexVector e(n), col;
    for (std::size_t j = 0; j < n; ++j) {
        e.assign(n, BigComplex(0));
        e[j] = BigComplex(1);
        k.apply(e, col, ws);
        for (std::size_t i = 0; i < n; ++i) m[i][j] = col[i];
    }
    return m;
}

std::vector<std::vector<std::complex<double>>> SectorMatrix::dense_double() const {
    const std::size_t n = dimension();
    Kernel<std::complex<double>> k{basis_, to_double(weights_.a), to_double(weights_.b), to_double(weights_.c)};
    Kernel<std::complex<double>>::Workspace ws(L());
    std::vector<std::vector<std::complex<double>>> m(n, std::vector<std::complex<double>>(n));
    std::vector<std::complex<double>> e(n), col;
    for (std::size_t j = 0; j < n; ++j) {
        e.assign(n, 0.0);
        e[j] = 1.0;
        k.apply(e, col, ws);
        for (std::size_t i = 0; i < n; ++i) m[i][j] = col[i];
    }
    return m;
}

SectorMatrix build_transfer_matrix(int L, const RMatrixParams& params, int up_count, int cap) {
    if (L < 1) throw DomainError("L must be positive");
    if (L > cap) throw CapExceeded("L = " + std::to_string(L) + " exceeds the transfer-matrix cap " + std::to_string(cap));
    if (up_count < 0 && L > kFullSpaceCap)
        throw CapExceeded("full-space transfer matrix limited to L <= " + std::to_string(kFullSpaceCap));
    return SectorMatrix(L, params, up_count);
}

int dominant_up_count(int L) { return (L - 1) / 2; }

EigenResult largest_eigenvalue(const SectorMatrix& mat, const PowerOptions& options) {
    const VertexWeights& w = mat.weights();
    const std::size_t n = mat.dimension();
    EigenResult result;
    if (w.real) {
        std::vector<double> start(n, 1.0);
        if (options.warm_start) {
            Kernel<double> kd{mat.basis(), w.a.re.convert_to<double>(), w.b.re.convert_to<double>(),
                              w.c.re.convert_to<double>()};
            try {
                auto warm = power_iterate<double, double>(kd, start, 1e-14, options.max_iterations);
                start = warm.vector;
                result.warm_iterations = warm.iterations;
            } catch (const ConvergenceError&) {
            }
        }
        std::vector<BigFloat> v(start.begin(), start.end());
        Kernel<BigFloat> kb{mat.basis(), w.a.re, w.b.re, w.c.re};
        auto out = power_iterate<BigFloat, BigFloat>(kb, std::move(v), options.tolerance / 1000, options.max_iterations);
        result.eigenvalue = BigComplex(out.eigenvalue);
        result.iterations = out.iterations;
        result.eigenvector.reserve(n);
        for (auto& x : out.vector) result.eigenvector.emplace_back(x);
        return result;
    }
    std::vector<std::complex<double>> start(n, 1.0);
    if (options.warm_start) {
        Kernel<std::complex<double>> kd{mat.basis(), to_double(w.a), to_double(w.b), to_double(w.c)};
        try {
            auto warm = power_iterate<std::complex<double>, double>(kd, start, 1e-14, options.max_iterations);
            start = warm.vector;
            result.warm_iterations = warm.iterations;
        } catch (const ConvergenceError&) {
        }
    }
    ComplexVector v;
    v.reserve(n);
    for (auto& x : start) v.emplace_back(BigFloat(x.real()), BigFloat(x.imag()));
    Kernel<BigComplex> kb{mat.basis(), w.a, w.b, w.c};
    auto out = power_iterate<BigComplex, BigFloat>(kb, std::move(v), options.tolerance / 1000, options.max_iterations);
    result.eigenvalue = out.eigenvalue;
    result.eigenvector = std::move(out.vector);
    result.iterations = out.iterations;
    return result;
}

std::vector<double> top_moduli_double(const SectorMatrix& mat, int k) {
    if (mat.dimension() > 1000) throw CapExceeded("dense double spectrum limited to dimension 1000");
    const auto m = mat.dense_double();
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXcd A(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) A(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(A, false);
    std::vector<double> mods;
    for (Eigen::Index i = 0; i < n; ++i) mods.push_back(std::abs(solver.eigenvalues()(i)));
    std::sort(mods.begin(), mods.end(), std::greater<>());
    if (static_cast<int>(mods.size()) > k) mods.resize(static_cast<std::size_t>(k));
    return mods;
}

ComplexVector polynomial_roots(const RatPoly& p, int max_iterations) {
    const int n = p.degree();
    if (n < 1) return {};
    const RatPoly monic = p.monic();
    ComplexVector c;
    for (const auto& x : monic.coeffs()) c.emplace_back(x);
    auto eval = [&](const BigComplex& z, BigComplex& value, BigComplex& deriv) {
        value = c.back();
        deriv = BigComplex(0);
        for (int i = n - 1; i >= 0; --i) {
            deriv = deriv * z + value;
            value = value * z + c[static_cast<std::size_t>(i)];
        }
    };
    // Cauchy bound
    BigFloat radius = 0;
    for (int i = 0; i < n; ++i) radius = mp::max(radius, abs(c[static_cast<std::size_t>(i)]));
    radius = (1 + radius) / 2;
    ComplexVector z(static_cast<std::size_t>(n));
    const BigFloat two_pi = 2 * big_pi();
    for (int k = 0; k < n; ++k) z[static_cast<std::size_t>(k)] = BigComplex::unit(two_pi * k / n + BigFloat("0.4")) * BigComplex(radius);
    const BigFloat eps = ten_to_minus(static_cast<int>(BigFloat::default_precision()) - 6);
    for (int it = 0; it < max_iterations; ++it) {
        BigFloat worst = 0;
        for (int k = 0; k < n; ++k) {
            auto& zk = z[static_cast<std::size_t>(k)];
            BigComplex v, d;
            eval(zk, v, d);
            if (is_zero(v)) continue;
            const BigComplex ratio = v / d;
            BigComplex sum(0);
            for (int j = 0; j < n; ++j)
                if (j != k) sum += BigComplex(1) / (zk - z[static_cast<std::size_t>(j)]);
            const BigComplex step = ratio / (BigComplex(1) - ratio * sum);
            zk -= step;
            worst = mp::max(worst, abs(step) / mp::max(BigFloat(1), abs(zk)));
        }
        if (worst < eps) return z;
    }
    throw ConvergenceError("polynomial root iteration did not converge");
}

BetheState bethe_state_from_q(const RatPoly& Q) { return {polynomial_roots(Q)}; }

BigComplex bethe_eigenvalue(int L, const BigComplex& u, const BetheState& state, const BigComplex& q) {
    const BigFloat eps = ten_to_minus(static_cast<int>(BigFloat::default_precision()) - 8);
    const BigComplex den = BigComplex(1) - q * u;
    if (abs(den) < eps) throw PoleError("bethe_eigenvalue: u = 1/q");
    const BigComplex q2 = q * q;
    BigComplex first = pow((u - q) / den, L);
    BigComplex second(1);
    for (const auto& uj : state.roots) {
        if (abs(u - uj) < eps) throw PoleError("bethe_eigenvalue: u coincides with a Bethe root");
        first *= (uj - q2 * u) / (q * (u - uj));
        second *= (u - q2 * uj) / (q * (uj - u));
    }
    return first + second;
}

std::vector<BigFloat> bethe_residuals(int L, const BetheState& state, const BigComplex& q) {
    const BigComplex q2 = q * q;
    const int M = state.M();
    std::vector<BigFloat> out;
    for (const auto& uj : state.roots) {
        const BigComplex lhs = pow((uj - q) / (BigComplex(1) - q * uj), L);
        BigComplex rhs((M - 1) % 2 == 0 ? 1 : -1);
        for (const auto& uk : state.roots) rhs *= (uj - q2 * uk) / (uk - q2 * uj);
        out.push_back(abs(lhs - rhs));
    }
    return out;
}

BigComplex tq_eigenvalue(int L, int M, const BigComplex& u, const BigComplex& q) {
    const BigComplex den = BigComplex(1) - q * u;
    return q * pow(BigComplex(1) + u, L) * pow(-q, L - M) / pow(den, L);
}

DominantSectorCheck check_dominant_sector(int L, const RMatrixParams& params, const PowerOptions& options) {
    if (L > 9) throw CapExceeded("dominant-sector check limited to L <= 9");
    DominantSectorCheck out;
    out.sector_modulus = abs(largest_eigenvalue(build_transfer_matrix(L, params, dominant_up_count(L)), options).eigenvalue);
    out.full_modulus = abs(largest_eigenvalue(build_transfer_matrix(L, params, -1), options).eigenvalue);
    out.agree = mp::abs(out.full_modulus - out.sector_modulus) <= BigFloat("1e-12") * out.full_modulus;
    return out;
}

FiniteDifferenceResult nu_finite_difference(int L, const BigFloat& dgamma) {
    if (L < 1 || L % 2 == 0) throw DomainError("nu_finite_difference requires odd L");
    if (dgamma < BigFloat("1e-8") || dgamma > BigFloat("1e-2")) throw DomainError("dgamma must lie in [1e-8, 1e-2]");
    const int digits = static_cast<int>(BigFloat::default_precision());
    if (digits < 30) throw DomainError("finite differences need at least 100 bits of precision");
    PowerOptions opts;
    opts.tolerance = ten_to_minus(std::min(40, digits / 2));
    const BigFloat g0 = big_pi() / 3;
    const int up = dominant_up_count(L);

    auto lambda_at = [&](const BigFloat& g) {
        RMatrixParams p;
        p.u = BigComplex(1);
        p.gamma = g;
        if (L <= 9) {
            const DominantSectorCheck chk = check_dominant_sector(L, p, opts);
            if (!chk.agree)
                throw SectorMismatch("dominant eigenvalue at L = " + std::to_string(L) + " is not in the sector with " +
                                     std::to_string(up) + " up arrows");
        }
        return largest_eigenvalue(build_transfer_matrix(L, p, up), opts).eigenvalue;
    };
    auto f = [&](const BigFloat& g) { return mp::log(abs(lambda_at(g))) / L; };
    auto central = [&](const BigFloat& h) { return (f(g0 + h) - f(g0 - h)) / (2 * h); };

    const BigFloat n = 2 * mp::cos(g0);
    const BigFloat dn = -2 * mp::sin(g0);
    const BigFloat d1 = central(dgamma);
    const BigFloat d2 = central(dgamma / 2);
    FiniteDifferenceResult out;
    out.nu_central = n * d1 / dn;
    out.nu = n * ((4 * d2 - d1) / 3) / dn;
    const BigComplex lam = lambda_at(g0);
    out.lambda_max = abs(lam);
    out.lambda_phase = arg(lam);
    return out;
}

}  // namespace oddloop
