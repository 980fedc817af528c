#include "oddloop/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <sstream>

#include <json.hpp>

#include "oddloop/errors.hpp"
#include "oddloop/links.hpp"
#include "oddloop/loop_mc.hpp"
#include "oddloop/sixvertex.hpp"
#include "oddloop/tq.hpp"

namespace oddloop {

namespace {

constexpr long kTQMaxN = 100;
constexpr long kSixVMaxL = 13;
constexpr long kMCMaxL = 31;

std::string float_string(double v) {
    // fixed formatting so reports are byte-stable
    std::ostringstream os;
    os.precision(kDecimalDigits);
    os << v;
    return os.str();
}

nlohmann::json row_json(const TableRow& r) {
    nlohmann::json j;
    j["L"] = r.L;
    j["N"] = r.N;
    j["parity"] = to_string(r.parity);
    j["route"] = r.route;
    j["nu_exact"] = r.nu_exact;
    j["nu_decimal"] = r.nu_decimal;
    j["nu_decimal_digits"] = kDecimalDigits;
    j["stderr"] = r.stderr_;
    j["runtime_ms"] = r.runtime_ms;
    return j;
}

Comparison compare(const RouteResult& x, const RouteResult& y) {
    Comparison c;
    c.a = x.route;
    c.b = y.route;
    std::ostringstream os;
    if (x.exact && y.exact) {
        c.tolerance = ToleranceClass::Exact;
        c.passed = *x.exact == *y.exact;
        os << x.exact->str() << (c.passed ? " == " : " != ") << y.exact->str();
    } else if (x.route != Route::MC && y.route != Route::MC) {
        c.tolerance = ToleranceClass::Abs1e6;
        const double d = std::abs(x.value - y.value);
        c.passed = d < 1e-6;
        os << "|difference| = " << float_string(d);
    } else {
        c.tolerance = ToleranceClass::FourSigma;
        const double sigma = std::hypot(x.stderr_, y.stderr_);
        const double d = std::abs(x.value - y.value);
        c.passed = d <= 4 * sigma;
        os << "|difference| = " << float_string(d) << ", sigma = " << float_string(sigma);
    }
    c.detail = os.str();
    return c;
}

}  // namespace

std::string to_string(Route r) {
    switch (r) {
        case Route::ClosedForm: return "closed_form";
        case Route::TQ: return "tq";
        case Route::SixV: return "sixv";
        case Route::Links: return "links";
        case Route::MC: return "mc";
    }
    return "?";
}

Route parse_route(const std::string& text) {
    for (Route r : all_routes())
        if (to_string(r) == text) return r;
    throw DomainError("unknown route '" + text + "'");
}

std::vector<Route> all_routes() { return {Route::ClosedForm, Route::TQ, Route::SixV, Route::Links, Route::MC}; }

bool route_is_exact(Route r) { return r == Route::ClosedForm || r == Route::TQ || r == Route::Links; }

void require_route_supports(Route r, long L) {
    if (L < 1 || L % 2 == 0) throw DomainError("consistency routes need odd L >= 1");
    const std::string name = to_string(r);
    switch (r) {
        case Route::ClosedForm: return;
        case Route::TQ:
            if (L < 3) throw DomainError("route tq needs L >= 3");
            if ((L - 1) / 2 > kTQMaxN) throw CapExceeded("route tq supports L <= " + std::to_string(2 * kTQMaxN + 1));
            return;
        case Route::SixV:
            if (L > kSixVMaxL) throw CapExceeded("route sixv supports L <= " + std::to_string(kSixVMaxL));
            return;
        case Route::Links:
            if (L > kMarkovCap) throw CapExceeded("route links supports L <= " + std::to_string(kMarkovCap));
            return;
        case Route::MC:
            if (L > kMCMaxL) throw CapExceeded("route mc supports L <= " + std::to_string(kMCMaxL));
            return;
    }
}

std::string RouteResult::value_string() const {
    if (exact) return exact->str();
    if (route == Route::MC) return float_string(value) + " +- " + float_string(stderr_);
    return float_string(value);
}

std::string to_string(ToleranceClass t) {
    switch (t) {
        case ToleranceClass::Exact: return "exact";
        case ToleranceClass::Abs1e6: return "1e-6";
        case ToleranceClass::FourSigma: return "4sigma";
    }
    return "?";
}

bool ConsistencyReport::passed() const {
    return std::all_of(comparisons.begin(), comparisons.end(), [](const Comparison& c) { return c.passed; });
}

std::vector<Route> ConsistencyReport::failing_routes() const {
    std::vector<Route> out;
    for (Route r : all_routes()) {
        long fails = 0, involved = 0;
        for (const auto& c : comparisons) {
            if (c.a != r && c.b != r) continue;
            ++involved;
            if (!c.passed) ++fails;
        }
        // a route is blamed when it fails against every partner
        if (fails > 0 && (fails == involved || involved == 1)) out.push_back(r);
    }
    return out;
}

RouteResult run_route(Route r, long L, const ConsistencyOptions& options) {
    require_route_supports(r, L);
    const auto start = std::chrono::steady_clock::now();
    RouteResult res;
    res.route = r;
    res.L = L;
    switch (r) {
        case Route::ClosedForm: res.exact = nu_odd_extended(L); break;
        case Route::TQ: res.exact = nu_from_tq((L - 1) / 2).nu; break;
        case Route::Links: res.exact = nu_stationary(static_cast<int>(L)); break;
        case Route::SixV:
            res.value = nu_finite_difference(static_cast<int>(L), BigFloat(options.dgamma)).nu.convert_to<double>();
            break;
        case Route::MC: {
            SimulationConfig cfg;
            cfg.L = static_cast<int>(L);
            cfg.H = options.mc_rows;
            cfg.burn_in = options.mc_burn_in;
            cfg.seed = options.seed;
            const MCEstimate e = simulate_chain(cfg);
            res.value = e.mean;
            res.stderr_ = e.stderr_;
            break;
        }
    }
    if (options.inject_off_by_one && *options.inject_off_by_one == r) {
        if (res.exact)
            res.exact = Rational(res.exact->numerator() + 1, res.exact->denominator());
        else
            res.value += 1;
    }
    if (res.exact) res.value = res.exact->to_double();
    if (options.timing)
        res.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    return res;
}

ConsistencyReport run_consistency(long L, const ConsistencyOptions& options) {
    std::vector<Route> routes;
    for (Route r : all_routes())
        if (std::find(options.routes.begin(), options.routes.end(), r) != options.routes.end()) routes.push_back(r);
    if (routes.empty()) throw DomainError("no routes requested");
    for (Route r : routes) require_route_supports(r, L);

    ConsistencyReport rep;
    rep.L = L;
    if (options.threads <= 1 || routes.size() == 1) {
        for (Route r : routes) rep.results.push_back(run_route(r, L, options));
    } else {
        // one job per route; results are collected in route order
        std::vector<std::future<RouteResult>> jobs;
        std::size_t next = 0;
        rep.results.resize(routes.size());
        const auto width = static_cast<std::size_t>(options.threads);
        while (next < routes.size()) {
            const std::size_t batch_begin = next;
            jobs.clear();
            for (; next < routes.size() && next - batch_begin < width; ++next)
                jobs.push_back(std::async(std::launch::async, run_route, routes[next], L, std::cref(options)));
            for (std::size_t i = 0; i < jobs.size(); ++i) rep.results[batch_begin + i] = jobs[i].get();
        }
    }
    for (std::size_t i = 0; i < rep.results.size(); ++i)
        for (std::size_t j = i + 1; j < rep.results.size(); ++j) rep.comparisons.push_back(compare(rep.results[i], rep.results[j]));
    if (routes.size() == 1) {
        // a lone route is checked against the closed form
        RouteResult ref = run_route(Route::ClosedForm, L, ConsistencyOptions{});
        if (routes.front() != Route::ClosedForm) rep.comparisons.push_back(compare(ref, rep.results.front()));
    }
    return rep;
}

TableRow table_row(const RouteResult& r) {
    TableRow row;
    row.L = r.L;
    row.N = (r.L - 1) / 2;
    row.parity = Parity::Odd;
    row.route = to_string(r.route);
    if (r.exact) {
        row.nu_exact = r.exact->str();
        row.nu_decimal = decimal_string(*r.exact);
    } else {
        row.nu_decimal = decimal_string(BigFloat(r.value));
        if (r.route == Route::MC) row.stderr_ = float_string(r.stderr_);
    }
    row.runtime_ms = r.runtime_ms;
    return row;
}

TableRow table_row(const DensityRecord& rec, const std::string& route) {
    TableRow row;
    row.L = rec.L;
    row.N = rec.N;
    row.parity = rec.parity;
    row.route = route;
    row.nu_exact = rec.value.str();
    row.nu_decimal = rec.decimal();
    return row;
}

std::string render_table_csv(const std::vector<TableRow>& rows) {
    std::ostringstream os;
    os << kTableHeader << "\n";
    for (const auto& r : rows)
        os << r.L << ',' << r.N << ',' << to_string(r.parity) << ',' << r.route << ',' << r.nu_exact << ',' << r.nu_decimal << ','
           << r.stderr_ << ',' << r.runtime_ms << "\n";
    return os.str();
}

std::string render_table_json(const std::vector<TableRow>& rows) {
    nlohmann::json j;
    j["schema"] = 1;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) j["rows"].push_back(row_json(r));
    return j.dump(2) + "\n";
}

std::string render_report_json(const ConsistencyReport& report) {
    nlohmann::json j;
    j["schema"] = 1;
    j["L"] = report.L;
    j["passed"] = report.passed();
    j["results"] = nlohmann::json::array();
    for (const auto& r : report.results) {
        nlohmann::json x;
        x["route"] = to_string(r.route);
        x["L"] = r.L;
        x["exact"] = r.exact.has_value();
        x["value"] = r.value_string();
        x["nu_decimal"] = r.exact ? decimal_string(*r.exact) : decimal_string(BigFloat(r.value));
        x["nu_decimal_digits"] = kDecimalDigits;
        if (r.route == Route::MC) x["stderr"] = float_string(r.stderr_);
        x["runtime_ms"] = r.runtime_ms;
        j["results"].push_back(x);
    }
    j["comparisons"] = nlohmann::json::array();
    for (const auto& c : report.comparisons) {
        nlohmann::json x;
        x["routes"] = {to_string(c.a), to_string(c.b)};
        x["tolerance"] = to_string(c.tolerance);
        x["passed"] = c.passed;
        x["detail"] = c.detail;
        j["comparisons"].push_back(x);
    }
    j["failing_routes"] = nlohmann::json::array();
    for (Route r : report.failing_routes()) j["failing_routes"].push_back(to_string(r));
    return j.dump(2) + "\n";
}

std::vector<SeriesRow> emit_series_data(long L_max, Parity parity) {
    if (L_max < 3) throw DomainError("series needs L_max >= 3");
    std::vector<SeriesRow> rows;
    const long first = parity == Parity::Odd ? 3 : 2;
    for (long L = first; L <= L_max; L += 2) {
        SeriesRow row;
        row.L = L;
        row.exact = parity == Parity::Odd ? nu_odd_extended(L) : nu_even_contractible(L / 2);
        row.decimal = decimal_string(row.exact);
        const BigFloat x(L);
        const BigFloat nu = to_bigfloat(row.exact);
        const BigFloat a2 = nu_asymptotic(x, parity, 2);
        row.asymptote_order2 = decimal_string(a2);
        row.asymptote_order4 = decimal_string(nu_asymptotic(x, parity, 4));
        row.residual_L4 = decimal_string(BigFloat((nu - a2) * x * x * x * x));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_series_csv(const std::vector<SeriesRow>& rows, Parity parity) {
    std::ostringstream os;
    os << "L,parity,nu_exact,nu_decimal,asymptote_order2,asymptote_order4,residual_L4\n";
    for (const auto& r : rows)
        os << r.L << ',' << to_string(parity) << ',' << r.exact.str() << ',' << r.decimal << ',' << r.asymptote_order2 << ','
           << r.asymptote_order4 << ',' << r.residual_L4 << "\n";
    return os.str();
}

std::string render_series_json(const std::vector<SeriesRow>& rows, Parity parity) {
    nlohmann::json j;
    j["schema"] = 1;
    j["parity"] = to_string(parity);
    j["decimal_digits"] = kDecimalDigits;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json x;
        x["L"] = r.L;
        x["nu_exact"] = r.exact.str();
        x["nu_decimal"] = r.decimal;
        x["asymptote_order2"] = r.asymptote_order2;
        x["asymptote_order4"] = r.asymptote_order4;
        x["residual_L4"] = r.residual_L4;
        j["rows"].push_back(x);
    }
    return j.dump(2) + "\n";
}

}  // namespace oddloop
