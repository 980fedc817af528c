#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace oddloop {

enum class SimulationMode { Chain, Torus };

std::string to_string(SimulationMode mode);
SimulationMode parse_mode(const std::string& text);

struct SimulationConfig {
    int L = 3;
    long H = 1000;  // rows (chain: measured rows after burn-in; torus: field height)
    std::uint64_t seed = 1;
    long burn_in = 0;
    SimulationMode mode = SimulationMode::Chain;
    int batches = 20;
    /// Fraction of the window height used for bulk cluster statistics.
    double window_fraction = 0.5;

    void validate() const;
};

/// Deterministic 64-bit word for (seed, stream, index); rows are independent
/// substreams, so any row can be generated without the ones before it.
std::uint64_t counter_word(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

struct MCEstimate {
    double mean = 0;
    double stderr_ = 0;
    long samples = 0;
    int batches = 0;
    std::uint64_t seed = 0;
};

/// Link-pattern chain estimate of nu(L) with batch-means error.
MCEstimate simulate_chain(const SimulationConfig& cfg);

/// Independent chains run on up to `threads` workers; results in input order.
std::vector<MCEstimate> simulate_chains(const std::vector<SimulationConfig>& cfgs, int threads);

/// L x H tile choices, row-major: bit(x, y) at y * L + x.
struct VertexField {
    int L = 0;
    long H = 0;
    std::vector<std::uint8_t> bits;

    int at(int x, long y) const { return bits[static_cast<std::size_t>(y) * static_cast<std::size_t>(L) + static_cast<std::size_t>(x)]; }
    /// Same field repeated `copies` times side by side.
    VertexField widened(int copies) const;
};

VertexField sample_torus(const SimulationConfig& cfg);

struct LoopCount {
    long contractible = 0;
    long winding = 0;  // non-contractible cycles
    /// (horizontal, vertical) winding numbers of the non-contractible cycles
    std::vector<std::pair<long, long>> windings;
    long total() const { return contractible + winding; }
};

/// Cycles of the arc system on the L x H torus.
LoopCount count_loops(const VertexField& field);

/// Bond configuration on the doubled, forty-five-degree rotated lattice.
/// Bond (x, y), 0 <= x < 2L, sits on the tile at (x mod L, y) and joins the
/// two primal corners of that tile; bits are row-major, bit y * 2L + x.
struct PercConfig {
    int width = 0;  // 2L
    long height = 0;
    std::vector<std::uint8_t> open;

    bool is_open(int x, long y) const { return open[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] != 0; }
    /// Corner (fx, fy) with 0 <= fy <= height is a primal site when fx + fy is even.
    static bool primal(int fx, long fy) { return ((fx + fy) % 2 + 2) % 2 == 0; }
};

PercConfig map_to_percolation(const VertexField& field);

/// open(x + L, y) is the complement of open(x, y) for every bond.
bool is_half_turn_self_dual(const PercConfig& pc);

struct ClusterStats {
    long finite_clusters = 0;    // touching neither cut row, anchored in the bulk band
    long spanning_clusters = 0;  // touching both cut rows
    long boundary_clusters = 0;  // touching exactly one cut row
    long bulk_sites = 0;
    double finite_cluster_density = 0;
    double stderr_ = 0;
    int batches = 0;
};

ClusterStats cluster_stats(const PercConfig& pc, double window_fraction = 0.5, int batches = 20);

}  // namespace oddloop
