#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oddloop/density.hpp"
#include "oddloop/rational.hpp"

namespace oddloop {

enum class Route { ClosedForm, TQ, SixV, Links, MC };

std::string to_string(Route r);
Route parse_route(const std::string& text);
/// closed_form, tq, sixv, links, mc
std::vector<Route> all_routes();
bool route_is_exact(Route r);
/// Throws CapExceeded (or DomainError for even or nonpositive L) when the
/// route cannot handle L.
void require_route_supports(Route r, long L);

struct RouteResult {
    Route route = Route::ClosedForm;
    long L = 0;
    std::optional<Rational> exact;  // exact routes
    double value = 0;               // float value; the exact value rounded for exact routes
    double stderr_ = 0;             // mc only
    long runtime_ms = 0;
    std::string value_string() const;
};

enum class ToleranceClass { Exact, Abs1e6, FourSigma };
std::string to_string(ToleranceClass t);

struct Comparison {
    Route a = Route::ClosedForm;
    Route b = Route::ClosedForm;
    ToleranceClass tolerance = ToleranceClass::Exact;
    bool passed = false;
    std::string detail;
};

struct ConsistencyReport {
    long L = 0;
    std::vector<RouteResult> results;
    std::vector<Comparison> comparisons;
    bool passed() const;
    /// Routes appearing in a failed comparison, in route order.
    std::vector<Route> failing_routes() const;
};

struct ConsistencyOptions {
    std::vector<Route> routes = all_routes();
    long mc_rows = 200000;
    long mc_burn_in = 100;
    std::uint64_t seed = 1;
    double dgamma = 1e-4;
    int threads = 1;
    bool timing = false;
    /// Test hook: adds one to the numerator of this route's value (or one to a float route).
    std::optional<Route> inject_off_by_one;
};

RouteResult run_route(Route r, long L, const ConsistencyOptions& options);
ConsistencyReport run_consistency(long L, const ConsistencyOptions& options = {});

/// One row of the shared density table.
struct TableRow {
    long L = 0;
    long N = 0;
    Parity parity = Parity::Odd;
    std::string route;
    std::string nu_exact;  // empty for float routes
    std::string nu_decimal;
    std::string stderr_;   // empty for exact routes
    long runtime_ms = 0;
};

TableRow table_row(const RouteResult& r);
TableRow table_row(const DensityRecord& rec, const std::string& route = "closed_form");

inline constexpr const char* kTableHeader = "L,N,parity,route,nu_exact,nu_decimal,stderr,runtime_ms";
std::string render_table_csv(const std::vector<TableRow>& rows);
std::string render_table_json(const std::vector<TableRow>& rows);
std::string render_report_json(const ConsistencyReport& report);

struct SeriesRow {
    long L = 0;
    Rational exact;
    std::string decimal;
    std::string asymptote_order2;
    std::string asymptote_order4;
    /// (nu - order-2 expansion) * L^4
    std::string residual_L4;
};

/// Rows for every L <= L_max of the given parity (odd from 3, even from 2).
std::vector<SeriesRow> emit_series_data(long L_max, Parity parity);
std::string render_series_csv(const std::vector<SeriesRow>& rows, Parity parity);
std::string render_series_json(const std::vector<SeriesRow>& rows, Parity parity);

}  // namespace oddloop
