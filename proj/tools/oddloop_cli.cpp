// oddloop: exact and sampled loop densities on odd cylinders.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oddloop/bigfloat.hpp"
#include "oddloop/density.hpp"
#include "oddloop/errors.hpp"
#include "oddloop/links.hpp"
#include "oddloop/loop_mc.hpp"
#include "oddloop/report.hpp"
#include "oddloop/sixvertex.hpp"
#include "oddloop/tq.hpp"

using namespace oddloop;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

struct Globals {
    unsigned precision_bits = 256;
    int threads = 1;
    std::string format;  // empty: command default
    std::string out;
    bool timing = false;
};

struct Range {
    long lo = 0;
    long hi = 0;
};

Range parse_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const long v = std::stol(text);
            return {v, v};
        }
        Range r{std::stol(text.substr(0, dots)), std::stol(text.substr(dots + 2))};
        if (r.hi < r.lo) throw DomainError("empty range '" + text + "'");
        return r;
    } catch (const std::logic_error&) {
        throw DomainError("bad range '" + text + "', expected a..b");
    }
}

BigFloat parse_real(const std::string& text) {
    if (text == "pi/3") return big_pi() / 3;
    try {
        std::size_t used = 0;
        (void)std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::logic_error&) {
        throw DomainError("bad number '" + text + "'");
    }
    return BigFloat(text);
}

// "x" or "x,y" for x + i y
BigComplex parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return BigComplex(parse_real(text));
    return BigComplex(parse_real(text.substr(0, comma)), parse_real(text.substr(comma + 1)));
}

std::string big(const BigFloat& x) { return to_string(x, 30); }

class Output {
public:
    explicit Output(const Globals& g) : g_(g) {}

    std::string format(const std::string& fallback, bool csv_allowed) const {
        const std::string f = g_.format.empty() ? fallback : g_.format;
        if (f != "csv" && f != "json") throw DomainError("unknown format '" + f + "'");
        if (f == "csv" && !csv_allowed) throw DomainError("this command only emits json");
        return f;
    }

    void write(const std::string& text) const {
        if (g_.out.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream os(g_.out, std::ios::binary);
        if (!os) throw Error("cannot open " + g_.out + " for writing");
        os << text;
        if (!os) throw Error("write to " + g_.out + " failed");
    }

    void write(const json& j) const { write(j.dump(2) + "\n"); }

    void table(const std::vector<TableRow>& rows) const {
        write(format("csv", true) == "csv" ? render_table_csv(rows) : render_table_json(rows));
    }

private:
    const Globals& g_;
};

long elapsed_ms(const Globals& g, std::chrono::steady_clock::time_point start) {
    if (!g.timing) return 0;
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Loop densities of the O(1) dense loop model on odd cylinders"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read options from a key = value file (command-line flags win)");

    Globals g;
    app.add_option("--precision-bits", g.precision_bits, "Working precision of floating routes")->check(CLI::Range(64u, 65536u));
    app.add_option("--threads", g.threads, "Worker threads for independent jobs")->check(CLI::Range(1, 256));
    app.add_option("--format", g.format, "Output format: csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", g.out, "Write output to this file instead of stdout");
    app.add_flag("--timing", g.timing, "Fill runtime_ms (otherwise 0, keeping output byte-stable)");

    int exit_code = kExitPass;
    auto fail_if = [&](bool failed) {
        if (failed) exit_code = kExitCheckFailed;
    };

    // density
    auto* density = app.add_subcommand("density", "Closed-form densities");
    std::string d_n_range = "1..5", d_l_range, d_parity = "odd";
    density->add_option("--N-range", d_n_range, "N values, a..b");
    density->add_option("--L-range", d_l_range, "Circumferences a..b (overrides --N-range)");
    density->add_option("--parity", d_parity, "odd or even")->check(CLI::IsMember({"odd", "even"}));

    // tq
    auto* tq = app.add_subcommand("tq", "T-Q solution at the stochastic point");
    tq->require_subcommand(1);
    auto* tq_verify = tq->add_subcommand("verify", "Check every polynomial identity");
    long tv_n = 1;
    tq_verify->add_option("--N", tv_n, "Sector size, L = 2N+1")->required()->check(CLI::Range(0L, 500L));
    auto* tq_nu = tq->add_subcommand("nu", "Density through the T-Q derivative");
    std::string tn_range = "1..5";
    tq_nu->add_option("--N-range", tn_range, "N values, a..b");
    auto* tq_gamma = tq->add_subcommand("gamma", "Evaluate the gamma-function closed forms");
    long tg_n = 1;
    bool tg_flip = false;
    tq_gamma->add_option("--N", tg_n, "Sector size")->required()->check(CLI::Range(1L, 200L));
    tq_gamma->add_flag("--flip-derivative-sign", tg_flip, "Negative control: wrong sign in the derivative terms");

    // sixv
    auto* sixv = app.add_subcommand("sixv", "Six-vertex transfer matrix");
    sixv->require_subcommand(1);
    auto* sv_spec = sixv->add_subcommand("spectrum", "Leading eigenvalues");
    int ss_L = 3, ss_top = 5;
    std::string ss_u = "1", ss_gamma = "pi/3", ss_sector = "dominant";
    sv_spec->add_option("--L", ss_L, "Circumference")->required()->check(CLI::Range(1, 31));
    sv_spec->add_option("--u", ss_u, "Spectral parameter, x or x,y for x+iy");
    sv_spec->add_option("--gamma", ss_gamma, "Anisotropy angle (number or pi/3)");
    sv_spec->add_option("--sector", ss_sector, "Up-arrow count, 'dominant' or 'full'");
    sv_spec->add_option("--top", ss_top, "Number of moduli to report")->check(CLI::Range(1, 1000));
    auto* sv_nu = sixv->add_subcommand("nu", "Density by finite differences in gamma");
    std::string sn_L = "3";
    std::string sn_dgamma = "1e-4";
    sv_nu->add_option("--L", sn_L, "Odd circumference or range a..b");
    sv_nu->add_option("--dgamma", sn_dgamma, "Step in gamma, within [1e-8, 1e-2]");

    // links
    auto* links = app.add_subcommand("links", "Link-pattern Markov chain");
    links->require_subcommand(1);
    auto* lk_stat = links->add_subcommand("stationary", "Exact stationary state");
    int ls_L = 3;
    lk_stat->add_option("--L", ls_L, "Odd circumference")->required();

    // mc
    auto* mc = app.add_subcommand("mc", "Monte Carlo estimates");
    mc->require_subcommand(1);
    auto* mc_run = mc->add_subcommand("run", "Run a chain or torus simulation");
    SimulationConfig mcfg;
    std::string mc_mode = "chain";
    mc_run->add_option("--mode", mc_mode, "chain or torus")->check(CLI::IsMember({"chain", "torus"}));
    mc_run->add_option("--L", mcfg.L, "Odd circumference")->required();
    mc_run->add_option("--H", mcfg.H, "Rows measured (chain) or torus height");
    mc_run->add_option("--seed", mcfg.seed, "Random seed");
    mc_run->add_option("--burn-in", mcfg.burn_in, "Rows discarded before measuring (chain)");
    mc_run->add_option("--batches", mcfg.batches, "Batch count for the error estimate (>= 20)");

    // perc
    auto* perc = app.add_subcommand("perc", "Half-turn self-dual percolation");
    perc->require_subcommand(1);
    auto* pc_sample = perc->add_subcommand("sample", "Sample a torus field and its doubled bond configuration");
    SimulationConfig pcfg;
    pcfg.H = 100;
    pc_sample->add_option("--L", pcfg.L, "Odd circumference")->required();
    pc_sample->add_option("--H", pcfg.H, "Height");
    pc_sample->add_option("--seed", pcfg.seed, "Random seed");
    pc_sample->add_option("--window", pcfg.window_fraction, "Fraction of rows in the bulk band");
    pc_sample->add_option("--batches", pcfg.batches, "Batch count for the error estimate");

    // check
    auto* check = app.add_subcommand("check", "Cross-route consistency report");
    long ck_L = 3;
    std::vector<std::string> ck_routes;
    std::string ck_inject;
    ConsistencyOptions copt;
    check->add_option("--L", ck_L, "Odd circumference")->required();
    check->add_option("--routes", ck_routes, "Subset of closed_form,tq,sixv,links,mc")->delimiter(',');
    check->add_option("--mc-rows", copt.mc_rows, "Chain rows for the mc route");
    check->add_option("--seed", copt.seed, "Seed for the mc route");
    check->add_option("--dgamma", copt.dgamma, "Finite-difference step for the sixv route");
    check->add_option("--inject-off-by-one", ck_inject, "Corrupt one route (harness self-test)");

    // series
    auto* series = app.add_subcommand("series", "Plot-ready asymptotic comparison data");
    long se_lmax = 51;
    std::string se_parity = "odd";
    series->add_option("--L-max", se_lmax, "Largest circumference")->required();
    series->add_option("--parity", se_parity, "odd or even")->check(CLI::IsMember({"odd", "even"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        PrecisionScope scope(g.precision_bits);
        Output out(g);

        if (*density) {
            std::vector<TableRow> rows;
            if (!d_l_range.empty()) {
                const Range r = parse_range(d_l_range);
                if (r.lo < 1) throw DomainError("L must be positive");
                for (long L = r.lo; L <= r.hi; ++L) rows.push_back(table_row(density_record(L)));
            } else {
                const Range r = parse_range(d_n_range);
                const Parity p = parse_parity(d_parity);
                if (r.lo < (p == Parity::Odd ? 0 : 1)) throw DomainError("N out of range");
                for (long n = r.lo; n <= r.hi; ++n) rows.push_back(table_row(density_record(p == Parity::Odd ? 2 * n + 1 : 2 * n)));
            }
            out.table(rows);
        } else if (*tq_verify) {
            out.format("json", false);
            const TQSolution sol = solve_tq(tv_n);
            const TQReport rep = verify_tq_identities(sol);
            json j;
            j["schema"] = 1;
            j["N"] = sol.N;
            j["L"] = sol.L;
            for (const auto& c : rep.checks) {
                j["identities"][c.name] = c.passed;
                if (!c.passed) j["failures"][c.name] = c.detail;
            }
            j["degrees"] = {{"fQ", sol.fQ.degree()}, {"fP", sol.fP.degree()}, {"Q", sol.Q.degree()}, {"P", sol.P.degree()}};
            j["Q"] = sol.Q.str();
            if (sol.N >= 1) {
                const Rational nu = nu_from_tq(sol.N).nu;
                j["nu_exact"] = nu.str();
                j["nu_decimal"] = decimal_string(nu);
                j["nu_decimal_digits"] = kDecimalDigits;
            }
            j["passed"] = rep.all_passed();
            fail_if(!rep.all_passed());
            out.write(j);
        } else if (*tq_nu) {
            const Range r = parse_range(tn_range);
            if (r.lo < 1) throw DomainError("N must be at least 1");
            std::vector<TableRow> rows;
            for (long n = r.lo; n <= r.hi; ++n) {
                const auto t0 = std::chrono::steady_clock::now();
                RouteResult res;
                res.route = Route::TQ;
                res.L = 2 * n + 1;
                res.exact = nu_from_tq(n).nu;
                res.runtime_ms = elapsed_ms(g, t0);
                rows.push_back(table_row(res));
            }
            out.table(rows);
        } else if (*tq_gamma) {
            out.format("json", false);
            const GammaCheckReport rep = gamma_closed_form_check(
                tg_n, g.precision_bits, tg_flip ? GammaVariant::FlippedDerivativeSign : GammaVariant::Standard, false);
            json j;
            j["schema"] = 1;
            j["N"] = rep.N;
            j["precision_bits"] = rep.precision_bits;
            j["variant"] = tg_flip ? "flipped_derivative_sign" : "standard";
            j["entries"] = json::array();
            for (const auto& e : rep.entries)
                j["entries"].push_back({{"name", e.name},
                                        {"exact", to_string(e.exact, 30)},
                                        {"closed_form", to_string(e.closed_form, 30)},
                                        {"relative_deviation", to_string(e.relative_deviation, 6)}});
            j["max_relative_deviation"] = to_string(rep.max_relative_deviation, 6);
            j["tolerance"] = to_string(rep.tolerance, 6);
            j["passed"] = rep.passed;
            fail_if(!rep.passed);
            out.write(j);
        } else if (*sv_spec) {
            out.format("json", false);
            RMatrixParams params;
            params.u = parse_complex(ss_u);
            params.gamma = parse_real(ss_gamma);
            int up = dominant_up_count(ss_L);
            if (ss_sector == "full")
                up = -1;
            else if (ss_sector != "dominant") {
                try {
                    up = std::stoi(ss_sector);
                } catch (const std::logic_error&) {
                    throw DomainError("bad sector '" + ss_sector + "'");
                }
            }
            const SectorMatrix m = build_transfer_matrix(ss_L, params, up, up < 0 ? kFullSpaceCap : kSixVertexCap);
            json j;
            j["schema"] = 1;
            j["L"] = ss_L;
            j["sector"] = up < 0 ? json("full") : json(up);
            j["dimension"] = m.dimension();
            const VertexWeights& w = m.weights();
            j["weights"] = {{"a", to_string(w.a, 20)}, {"b", to_string(w.b, 20)}, {"c", to_string(w.c, 20)}, {"real", w.real}};
            if (w.branch_warning) j["warnings"].push_back("u/q is close to the branch cut of the square root in c");
            if (m.dimension() <= 1000) {
                j["top_moduli"] = json::array();
                for (double x : top_moduli_double(m, ss_top)) {
                    std::ostringstream os;
                    os.precision(15);
                    os << x;
                    j["top_moduli"].push_back(os.str());
                }
            }
            const EigenResult lead = largest_eigenvalue(m);
            j["lambda_max"] = {{"modulus", big(abs(lead.eigenvalue))},
                               {"phase", big(arg(lead.eigenvalue))},
                               {"value", to_string(lead.eigenvalue, 30)},
                               {"iterations", lead.iterations}};
            out.write(j);
        } else if (*sv_nu) {
            const Range r = parse_range(sn_L);
            const BigFloat dg = parse_real(sn_dgamma);
            std::vector<TableRow> rows;
            for (long L = r.lo; L <= r.hi; ++L) {
                if (L % 2 == 0) continue;
                require_route_supports(Route::SixV, L);
                const auto t0 = std::chrono::steady_clock::now();
                const FiniteDifferenceResult fd = nu_finite_difference(static_cast<int>(L), dg);
                TableRow row;
                row.L = L;
                row.N = (L - 1) / 2;
                row.route = "sixv";
                row.nu_decimal = decimal_string(fd.nu);
                row.runtime_ms = elapsed_ms(g, t0);
                rows.push_back(row);
            }
            if (rows.empty()) throw DomainError("no odd L in range");
            out.table(rows);
        } else if (*lk_stat) {
            out.format("json", false);
            require_route_supports(Route::Links, ls_L);
            const MarkovMatrix mm = build_markov_matrix(ls_L);
            const StationaryState st = stationary_state(mm);
            const Rational nu = nu_stationary(mm, st);
            json j;
            j["schema"] = 1;
            j["L"] = ls_L;
            j["route"] = "links";
            j["patterns"] = json::array();
            for (std::size_t i = 0; i < st.patterns.size(); ++i)
                j["patterns"].push_back({{"word", st.patterns[i].word()},
                                         {"defect", st.patterns[i].defect},
                                         {"probability", st.probabilities[i].str()},
                                         {"scaled", st.scaled[i].get_str()}});
            j["common_denominator"] = st.common_denominator.get_str();
            j["nu_exact"] = nu.str();
            j["nu_decimal"] = decimal_string(nu);
            j["nu_decimal_digits"] = kDecimalDigits;
            j["primitive"] = is_primitive(mm);
            j["rotation_invariant"] = is_rotation_invariant(st);
            fail_if(!is_primitive(mm) || !is_rotation_invariant(st));
            out.write(j);
        } else if (*mc_run) {
            out.format("json", false);
            mcfg.mode = parse_mode(mc_mode);
            const MCEstimate e = simulate_chain(mcfg);
            json j;
            j["schema"] = 1;
            j["config"] = {{"L", mcfg.L}, {"H", mcfg.H}, {"seed", mcfg.seed}, {"burn_in", mcfg.burn_in},
                           {"mode", to_string(mcfg.mode)}, {"batches", mcfg.batches}};
            std::ostringstream m, s;
            m.precision(kDecimalDigits);
            s.precision(kDecimalDigits);
            m << e.mean;
            s << e.stderr_;
            j["estimate"] = m.str();
            j["stderr"] = s.str();
            j["batches"] = e.batches;
            j["samples"] = e.samples;
            j["decimal_digits"] = kDecimalDigits;
            const Rational exact = nu_odd_extended(mcfg.L);
            j["exact"] = {{"nu_exact", exact.str()}, {"nu_decimal", decimal_string(exact)}};
            const double dev = std::abs(e.mean - exact.to_double());
            // the torus estimate carries an O(1/H) finite-height correction
            const double allowance = mcfg.mode == SimulationMode::Torus ? 2.0 / static_cast<double>(mcfg.H) : 0.0;
            const bool ok = dev <= 4 * e.stderr_ + allowance;
            j["within_4sigma"] = ok;
            fail_if(!ok);
            out.write(j);
        } else if (*pc_sample) {
            out.format("json", false);
            if (pcfg.L < 1 || pcfg.L % 2 == 0) throw DomainError("perc sample needs odd L");
            if (pcfg.H < 1) throw DomainError("perc sample needs H >= 1");
            const PercConfig pc = map_to_percolation(sample_torus(pcfg));
            const ClusterStats cs = cluster_stats(pc, pcfg.window_fraction, pcfg.batches);
            json j;
            j["schema"] = 1;
            j["config"] = {{"L", pcfg.L}, {"H", pcfg.H}, {"seed", pcfg.seed}, {"window", pcfg.window_fraction}};
            j["width"] = pc.width;
            j["height"] = pc.height;
            j["bit_order"] =
                "rows[y][x] is bond (x, y) for 0 <= x < width, 0 <= y < height; '1' = open; bond (x, y) joins corners "
                "(x, y)-(x+1, y+1) when x + y is even and (x, y+1)-(x+1, y) otherwise";
            j["rows"] = json::array();
            for (long y = 0; y < pc.height; ++y) {
                std::string row(static_cast<std::size_t>(pc.width), '0');
                for (int x = 0; x < pc.width; ++x)
                    if (pc.is_open(x, y)) row[static_cast<std::size_t>(x)] = '1';
                j["rows"].push_back(row);
            }
            const bool dual = is_half_turn_self_dual(pc);
            const bool spanning_ok = cs.spanning_clusters >= 1 && cs.spanning_clusters <= 2;
            std::ostringstream d, s;
            d.precision(kDecimalDigits);
            s.precision(kDecimalDigits);
            d << cs.finite_cluster_density;
            s << cs.stderr_;
            j["clusters"] = {{"finite", cs.finite_clusters},     {"spanning", cs.spanning_clusters},
                             {"boundary", cs.boundary_clusters}, {"bulk_sites", cs.bulk_sites},
                             {"finite_density", d.str()},        {"stderr", s.str()},
                             {"batches", cs.batches}};
            j["checks"] = {{"half_turn_self_dual", dual}, {"spanning_one_or_two", spanning_ok}};
            const Rational exact = nu_odd_extended(pcfg.L);
            j["exact"] = {{"nu_exact", exact.str()}, {"nu_decimal", decimal_string(exact)}};
            fail_if(!dual || !spanning_ok);
            out.write(j);
        } else if (*check) {
            for (const auto& r : ck_routes) (void)parse_route(r);
            if (!ck_routes.empty()) {
                copt.routes.clear();
                for (const auto& r : ck_routes) copt.routes.push_back(parse_route(r));
            }
            if (!ck_inject.empty()) copt.inject_off_by_one = parse_route(ck_inject);
            copt.threads = g.threads;
            copt.timing = g.timing;
            const ConsistencyReport rep = run_consistency(ck_L, copt);
            if (out.format("json", true) == "json") {
                out.write(render_report_json(rep));
            } else {
                std::vector<TableRow> rows;
                for (const auto& r : rep.results) rows.push_back(table_row(r));
                out.write(render_table_csv(rows));
            }
            fail_if(!rep.passed());
            if (!rep.passed()) {
                std::cerr << "consistency check failed at L = " << ck_L << ":";
                for (Route r : rep.failing_routes()) std::cerr << " " << to_string(r);
                std::cerr << "\n";
            }
        } else if (*series) {
            const Parity p = parse_parity(se_parity);
            const auto rows = emit_series_data(se_lmax, p);
            out.write(out.format("csv", true) == "csv" ? render_series_csv(rows, p) : render_series_json(rows, p));
        }
    } catch (const CapExceeded& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kExitCap;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return exit_code;
}
