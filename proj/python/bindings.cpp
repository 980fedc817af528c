#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "oddloop/bigfloat.hpp"
#include "oddloop/density.hpp"
#include "oddloop/errors.hpp"
#include "oddloop/links.hpp"
#include "oddloop/loop_mc.hpp"
#include "oddloop/report.hpp"
#include "oddloop/sixvertex.hpp"
#include "oddloop/tq.hpp"

namespace py = pybind11;
using namespace oddloop;

namespace {

std::vector<std::string> coeff_strings(const RatPoly& p) {
    std::vector<std::string> out;
    for (const auto& c : p.coeffs()) out.push_back(c.str());
    return out;
}

std::complex<double> to_complex(const BigComplex& z) { return {z.re.convert_to<double>(), z.im.convert_to<double>()}; }

}  // namespace

PYBIND11_MODULE(_oddloop, m) {
    m.doc() = "Exact and sampled loop densities of the O(1) dense loop model on odd cylinders.";

    static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
    static py::exception<DomainError> domain(m, "DomainError", PyExc_ValueError);
    static py::exception<CapExceeded> cap(m, "CapExceeded", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const DomainError& e) {
            domain(e.what());
        } catch (const CapExceeded& e) {
            cap(e.what());
        } catch (const Error& e) {
            base(e.what());
        }
    });

    m.def("nu_odd", [](long N) { return nu_odd(N).str(); }, py::arg("N"), "Exact nu(2N+1) as a 'p/q' string.");
    m.def("nu_odd_extended", [](long L) { return nu_odd_extended(L).str(); }, py::arg("L"));
    m.def("nu_even_contractible", [](long N) { return nu_even_contractible(N).str(); }, py::arg("N"));
    m.def("decimal", [](const std::string& exact) { return decimal_string(Rational::parse(exact)); }, py::arg("exact"));

    m.def(
        "solve_tq",
        [](long N) {
            const TQSolution s = solve_tq(N);
            return std::map<std::string, std::vector<std::string>>{
                {"fQ", coeff_strings(s.fQ)}, {"fP", coeff_strings(s.fP)}, {"Q", coeff_strings(s.Q)}, {"P", coeff_strings(s.P)}};
        },
        py::arg("N"), "Coefficients (lowest degree first) of fQ, fP, Q and P.");
    m.def(
        "verify_tq",
        [](long N) {
            std::map<std::string, bool> out;
            for (const auto& c : verify_tq_identities(solve_tq(N)).checks) out[c.name] = c.passed;
            return out;
        },
        py::arg("N"));
    m.def("nu_from_tq", [](long N) { return nu_from_tq(N).nu.str(); }, py::arg("N"));

    m.def("nu_stationary", [](int L) { return nu_stationary(L).str(); }, py::arg("L"));
    m.def(
        "stationary_state",
        [](int L) {
            const StationaryState s = stationary_state(L);
            std::vector<std::tuple<std::string, int, std::string>> out;
            for (std::size_t i = 0; i < s.patterns.size(); ++i)
                out.emplace_back(s.patterns[i].word(), s.patterns[i].defect, s.probabilities[i].str());
            return out;
        },
        py::arg("L"), "(word, defect, probability) per link pattern.");

    m.def(
        "dominant_eigenvalue",
        [](int L, std::complex<double> u, double gamma, unsigned precision_bits) {
            PrecisionScope scope(precision_bits);
            RMatrixParams p;
            p.u = BigComplex(BigFloat(u.real()), BigFloat(u.imag()));
            p.gamma = gamma < 0 ? BigFloat(big_pi() / 3) : BigFloat(gamma);
            return to_complex(largest_eigenvalue(build_transfer_matrix(L, p, dominant_up_count(L))).eigenvalue);
        },
        py::arg("L"), py::arg("u") = std::complex<double>(1.0, 0.0), py::arg("gamma") = -1.0, py::arg("precision_bits") = 256,
        "Dominant eigenvalue in the sector with (L-1)/2 up arrows; gamma < 0 means pi/3.");
    m.def(
        "nu_finite_difference",
        [](int L, double dgamma, unsigned precision_bits) {
            PrecisionScope scope(precision_bits);
            return decimal_string(nu_finite_difference(L, BigFloat(dgamma)).nu, 30);
        },
        py::arg("L"), py::arg("dgamma") = 1e-4, py::arg("precision_bits") = 256);

    m.def(
        "simulate_chain",
        [](int L, long H, std::uint64_t seed, long burn_in, const std::string& mode, int batches) {
            SimulationConfig c;
            c.L = L;
            c.H = H;
            c.seed = seed;
            c.burn_in = burn_in;
            c.mode = parse_mode(mode);
            c.batches = batches;
            const MCEstimate e = simulate_chain(c);
            return std::make_pair(e.mean, e.stderr_);
        },
        py::arg("L"), py::arg("H"), py::arg("seed") = 1, py::arg("burn_in") = 0, py::arg("mode") = "chain", py::arg("batches") = 20,
        "(mean, stderr) of the loop density estimate.");
    m.def(
        "count_loops",
        [](int L, long H, const std::vector<int>& bits) {
            VertexField f;
            f.L = L;
            f.H = H;
            if (bits.size() != static_cast<std::size_t>(L) * static_cast<std::size_t>(H)) throw DomainError("bits must have L*H entries");
            for (int b : bits) f.bits.push_back(static_cast<std::uint8_t>(b != 0));
            const LoopCount lc = count_loops(f);
            return py::dict(py::arg("contractible") = lc.contractible, py::arg("winding") = lc.winding, py::arg("windings") = lc.windings);
        },
        py::arg("L"), py::arg("H"), py::arg("bits"), "Loops on the L x H torus; bits are row-major tile choices.");
    m.def(
        "sample_percolation",
        [](int L, long H, std::uint64_t seed, double window) {
            SimulationConfig c;
            c.L = L;
            c.H = H;
            c.seed = seed;
            const PercConfig pc = map_to_percolation(sample_torus(c));
            const ClusterStats st = cluster_stats(pc, window);
            return py::dict(py::arg("width") = pc.width, py::arg("height") = pc.height, py::arg("open") = pc.open,
                            py::arg("self_dual") = is_half_turn_self_dual(pc), py::arg("finite_clusters") = st.finite_clusters,
                            py::arg("spanning_clusters") = st.spanning_clusters, py::arg("finite_density") = st.finite_cluster_density,
                            py::arg("stderr") = st.stderr_);
        },
        py::arg("L"), py::arg("H"), py::arg("seed") = 1, py::arg("window") = 0.5);

    m.def(
        "consistency_report",
        [](long L, const std::vector<std::string>& routes, long mc_rows, std::uint64_t seed, int threads) {
            ConsistencyOptions o;
            if (!routes.empty()) {
                o.routes.clear();
                for (const auto& r : routes) o.routes.push_back(parse_route(r));
            }
            o.mc_rows = mc_rows;
            o.seed = seed;
            o.threads = threads;
            return render_report_json(run_consistency(L, o));
        },
        py::arg("L"), py::arg("routes") = std::vector<std::string>{}, py::arg("mc_rows") = 200000, py::arg("seed") = 1,
        py::arg("threads") = 1, "Cross-route report as a JSON string.");
    m.def(
        "series_csv",
        [](long L_max, const std::string& parity) {
            const Parity p = parse_parity(parity);
            return render_series_csv(emit_series_data(L_max, p), p);
        },
        py::arg("L_max"), py::arg("parity") = "odd");
}
