#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "oddloop/errors.hpp"
#include "oddloop/report.hpp"

using namespace oddloop;

namespace {

ConsistencyOptions quick() {
    ConsistencyOptions o;
    o.mc_rows = 50000;
    return o;
}

double last_residual(const std::vector<SeriesRow>& rows) { return std::stod(rows.back().residual_L4); }

}  // namespace

TEST_CASE("route names") {
    for (Route r : all_routes()) CHECK(parse_route(to_string(r)) == r);
    CHECK_THROWS_AS(parse_route("oracle"), DomainError);
    CHECK_THROWS_AS(require_route_supports(Route::Links, 15), CapExceeded);
    CHECK_THROWS_AS(require_route_supports(Route::SixV, 15), CapExceeded);
    CHECK_THROWS_AS(require_route_supports(Route::ClosedForm, 4), DomainError);
    CHECK_NOTHROW(require_route_supports(Route::Links, 13));
}

TEST_CASE("all routes agree at L = 3") {
    const ConsistencyReport rep = run_consistency(3, quick());
    CHECK(rep.passed());
    REQUIRE(rep.results.size() == 5);
    for (const auto& r : rep.results)
        if (route_is_exact(r.route)) CHECK(*r.exact == Rational(1, 12));
    CHECK(rep.comparisons.size() == 10);
    CHECK(rep.failing_routes().empty());
}

TEST_CASE("closed form and T-Q agree exactly at L = 5") {
    ConsistencyOptions o;
    o.routes = {Route::ClosedForm, Route::TQ};
    const ConsistencyReport rep = run_consistency(5, o);
    CHECK(rep.passed());
    REQUIRE(rep.comparisons.size() == 1);
    CHECK(rep.comparisons[0].tolerance == ToleranceClass::Exact);
    CHECK(rep.results[1].value_string() == "37/400");
}

TEST_CASE("an injected error is caught and named") {
    for (Route bad : {Route::TQ, Route::Links, Route::SixV}) {
        ConsistencyOptions o = quick();
        o.inject_off_by_one = bad;
        const ConsistencyReport rep = run_consistency(3, o);
        CHECK(!rep.passed());
        const auto blamed = rep.failing_routes();
        REQUIRE(blamed.size() == 1);
        CHECK(blamed[0] == bad);
        const auto j = nlohmann::json::parse(render_report_json(rep));
        CHECK(j["passed"] == false);
        CHECK(j["failing_routes"][0] == to_string(bad));
    }
}

TEST_CASE("a single route is checked against the closed form") {
    ConsistencyOptions o;
    o.routes = {Route::Links};
    o.inject_off_by_one = Route::Links;
    const ConsistencyReport rep = run_consistency(5, o);
    CHECK(!rep.passed());
    CHECK_THROWS_AS(run_consistency(15, o), CapExceeded);
}

TEST_CASE("parallel dispatch gives the same report") {
    ConsistencyOptions o = quick();
    o.routes = {Route::ClosedForm, Route::TQ, Route::Links, Route::MC};
    const std::string serial = render_report_json(run_consistency(5, o));
    o.threads = 3;
    CHECK(render_report_json(run_consistency(5, o)) == serial);
}

TEST_CASE("table rendering") {
    std::vector<TableRow> rows;
    for (long L : {1, 3, 5, 4}) rows.push_back(table_row(density_record(L)));
    const std::string csv = render_table_csv(rows);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "L,N,parity,route,nu_exact,nu_decimal,stderr,runtime_ms");
    std::getline(is, line);
    CHECK(line == "1,0,odd,closed_form,0/1,0,,0");
    std::getline(is, line);
    CHECK(line == "3,1,odd,closed_form,1/12,0.0833333333333,,0");
    std::getline(is, line);
    std::getline(is, line);
    CHECK(line == "4,2,even,closed_form,17/160,0.10625,,0");

    const std::string js = render_table_json(rows);
    CHECK(js == render_table_json(rows));
    const auto j = nlohmann::json::parse(js);
    CHECK(j["schema"] == 1);
    CHECK(j["rows"][1]["nu_exact"] == "1/12");
    // keys are emitted in sorted order
    CHECK(js.find("\"L\"") < js.find("\"N\""));
    CHECK(js.find("\"nu_decimal\"") < js.find("\"nu_exact\""));
}

TEST_CASE("series data") {
    const auto one = emit_series_data(3, Parity::Odd);
    REQUIRE(one.size() == 1);
    CHECK(one[0].exact == Rational(1, 12));
    CHECK_THROWS_AS(emit_series_data(2, Parity::Odd), DomainError);

    const auto odd = emit_series_data(201, Parity::Odd);
    CHECK(odd.size() == 100);
    const double c4_odd = 35.0 / (144.0 * std::sqrt(3.0));
    CHECK(std::abs(last_residual(odd) / c4_odd - 1) < 0.02);

    const auto even = emit_series_data(200, Parity::Even);
    CHECK(even.front().L == 2);
    CHECK(even.front().exact == Rational(1, 8));
    const double c4_even = -23.0 / (48.0 * std::sqrt(3.0));
    CHECK(std::abs(last_residual(even) / c4_even - 1) < 0.02);

    const std::string csv = render_series_csv(one, Parity::Odd);
    CHECK(csv.rfind("L,parity,nu_exact,nu_decimal,asymptote_order2,asymptote_order4,residual_L4\n3,odd,1/12,", 0) == 0);
    CHECK(nlohmann::json::parse(render_series_json(one, Parity::Odd))["rows"].size() == 1);
}
