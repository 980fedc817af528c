#include "oddloop/loop_mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "oddloop/errors.hpp"
#include "oddloop/links.hpp"

namespace oddloop {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kChainStream = 1;
constexpr std::uint64_t kTorusStream = 2;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct BatchMeans {
    double mean = 0;
    double stderr_ = 0;
};

// mean of equal-weight batch values and the standard error of that mean
BatchMeans batch_means(const std::vector<double>& values) {
    BatchMeans out;
    const auto n = static_cast<double>(values.size());
    if (values.empty()) return out;
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() < 2) return out;
    double ss = 0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stderr_ = std::sqrt(ss / (n * (n - 1)));
    return out;
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned char> rank_;
};

// tile sides
constexpr int kLeft = 0, kRight = 1, kBottom = 2, kTop = 3;
constexpr int kOpposite[4] = {kRight, kLeft, kTop, kBottom};
// side positions inside a tile, in half-lattice units
constexpr int kPosX[4] = {0, 2, 1, 1};
constexpr int kPosY[4] = {1, 1, 0, 2};
// partner side for tile 0 and tile 1
constexpr int kJoin[2][4] = {
    {kBottom, kTop, kLeft, kRight},
    {kTop, kBottom, kRight, kLeft},
};

}  // namespace

std::string to_string(SimulationMode mode) { return mode == SimulationMode::Chain ? "chain" : "torus"; }

SimulationMode parse_mode(const std::string& text) {
    if (text == "chain") return SimulationMode::Chain;
    if (text == "torus") return SimulationMode::Torus;
    throw DomainError("unknown simulation mode '" + text + "'");
}

void SimulationConfig::validate() const {
    if (L < 1 || L % 2 == 0) throw DomainError("simulation needs odd L >= 1");
    if (H < 1) throw DomainError("simulation needs H >= 1");
    if (burn_in < 0) throw DomainError("burn_in must be non-negative");
    if (batches < 20) throw DomainError("at least 20 batches are required");
    if (!(window_fraction > 0 && window_fraction <= 1)) throw DomainError("window_fraction must lie in (0, 1]");
    if (mode == SimulationMode::Chain) {
        if (L > 31) throw CapExceeded("chain mode supports L <= 31");
        if (H < batches) throw DomainError("chain mode needs at least one row per batch");
    }
}

std::uint64_t counter_word(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const std::uint64_t key = mix64(seed ^ mix64(stream + 0xD1B54A32D192ED03ULL));
    return mix64(key + kGolden * (index + 1));
}

MCEstimate simulate_chain(const SimulationConfig& cfg) {
    cfg.validate();
    MCEstimate est;
    est.seed = cfg.seed;
    est.batches = cfg.batches;
    est.samples = cfg.H;
    const int L = cfg.L;

    if (cfg.mode == SimulationMode::Torus) {
        // independent tori, one per batch
        std::vector<double> values;
        for (int b = 0; b < cfg.batches; ++b) {
            SimulationConfig sub = cfg;
            sub.seed = counter_word(cfg.seed, kTorusStream + 100, static_cast<std::uint64_t>(b));
            const LoopCount lc = count_loops(sample_torus(sub));
            values.push_back(static_cast<double>(lc.total()) / (static_cast<double>(L) * static_cast<double>(cfg.H)));
        }
        const BatchMeans bm = batch_means(values);
        est.mean = bm.mean;
        est.stderr_ = bm.stderr_;
        est.samples = cfg.H * cfg.batches;
        return est;
    }

    const std::uint32_t mask = (L == 32) ? 0xFFFFFFFFu : ((std::uint32_t{1} << L) - 1u);
    LinkPattern state = enumerate_patterns(L, 31).front();
    std::uint64_t row = 0;
    for (long i = 0; i < cfg.burn_in; ++i, ++row) {
        const auto w = static_cast<std::uint32_t>(counter_word(cfg.seed, kChainStream, row)) & mask;
        state = apply_row(state, RowChoice{L, w}).pattern;
    }
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(cfg.batches));
    for (int b = 0; b < cfg.batches; ++b) {
        const long begin = cfg.H * b / cfg.batches;
        const long end = cfg.H * (b + 1) / cfg.batches;
        long loops = 0;
        for (long i = begin; i < end; ++i, ++row) {
            const auto w = static_cast<std::uint32_t>(counter_word(cfg.seed, kChainStream, row)) & mask;
            RowResult res = apply_row(state, RowChoice{L, w});
            loops += res.loops_closed;
            state = std::move(res.pattern);
        }
        values.push_back(static_cast<double>(loops) / (static_cast<double>(end - begin) * L));
    }
    // batches can differ by one row; the weighted mean is the plain ratio
    const BatchMeans bm = batch_means(values);
    est.mean = bm.mean;
    est.stderr_ = bm.stderr_;
    return est;
}

std::vector<MCEstimate> simulate_chains(const std::vector<SimulationConfig>& cfgs, int threads) {
    for (const auto& c : cfgs) c.validate();
    std::vector<MCEstimate> out(cfgs.size());
    const auto workers = static_cast<std::size_t>(std::max(1, std::min<int>(threads, static_cast<int>(cfgs.size()))));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < cfgs.size(); i = next++) out[i] = simulate_chain(cfgs[i]);
    };
    if (workers <= 1) {
        work();
        return out;
    }
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return out;
}

VertexField VertexField::widened(int copies) const {
    VertexField w;
    w.L = L * copies;
    w.H = H;
    w.bits.resize(static_cast<std::size_t>(w.L) * static_cast<std::size_t>(H));
    for (long y = 0; y < H; ++y)
        for (int x = 0; x < w.L; ++x) w.bits[static_cast<std::size_t>(y) * static_cast<std::size_t>(w.L) + static_cast<std::size_t>(x)] = static_cast<std::uint8_t>(at(x % L, y));
    return w;
}

VertexField sample_torus(const SimulationConfig& cfg) {
    if (cfg.L < 1) throw DomainError("torus needs L >= 1");
    if (cfg.H < 1) throw DomainError("torus needs H >= 1");
    VertexField f;
    f.L = cfg.L;
    f.H = cfg.H;
    f.bits.resize(static_cast<std::size_t>(cfg.L) * static_cast<std::size_t>(cfg.H));
    const int words = (cfg.L + 63) / 64;
    for (long y = 0; y < cfg.H; ++y) {
        for (int k = 0; k < words; ++k) {
            const std::uint64_t w = counter_word(cfg.seed, kTorusStream, static_cast<std::uint64_t>(y) * static_cast<std::uint64_t>(words) + static_cast<std::uint64_t>(k));
            for (int b = 0; b < 64 && 64 * k + b < cfg.L; ++b)
                f.bits[static_cast<std::size_t>(y) * static_cast<std::size_t>(cfg.L) + static_cast<std::size_t>(64 * k + b)] = static_cast<std::uint8_t>((w >> b) & 1u);
        }
    }
    return f;
}

LoopCount count_loops(const VertexField& field) {
    const int L = field.L;
    const long H = field.H;
    if (L < 1 || H < 1) throw DomainError("empty field");
    const std::size_t tiles = static_cast<std::size_t>(L) * static_cast<std::size_t>(H);
    // edge ids: vertical edge under tile (x, y) is y*L + x, edge right of it is tiles + y*L + x
    auto tile_id = [L](int x, long y) { return static_cast<std::size_t>(y) * static_cast<std::size_t>(L) + static_cast<std::size_t>(x); };
    auto edge_of = [&](int x, long y, int side) -> std::size_t {
        switch (side) {
            case kLeft: return tiles + tile_id((x + L - 1) % L, y);
            case kRight: return tiles + tile_id(x, y);
            case kBottom: return tile_id(x, y);
            default: return tile_id(x, (y + 1) % H);
        }
    };
    std::vector<char> seen(2 * tiles, 0);
    LoopCount out;
    for (long y0 = 0; y0 < H; ++y0) {
        for (int x0 = 0; x0 < L; ++x0) {
            for (int s0 : {kBottom, kLeft}) {
                if (seen[edge_of(x0, y0, s0)]) continue;
                int x = x0, side = s0;
                long y = y0;
                long dx = 0, dy = 0;
                while (true) {
                    const int exit = kJoin[field.at(x, y)][side];
                    dx += kPosX[exit] - kPosX[side];
                    dy += kPosY[exit] - kPosY[side];
                    seen[edge_of(x, y, exit)] = 1;
                    switch (exit) {
                        case kLeft: x = (x + L - 1) % L; break;
                        case kRight: x = (x + 1) % L; break;
                        case kBottom: y = (y + H - 1) % H; break;
                        default: y = (y + 1) % H; break;
                    }
                    side = kOpposite[exit];
                    if (x == x0 && y == y0 && side == s0) break;
                }
                const long wx = dx / (2L * L);
                const long wy = dy / (2L * H);
                if (wx == 0 && wy == 0) {
                    ++out.contractible;
                } else {
                    ++out.winding;
                    out.windings.emplace_back(wx, wy);
                }
            }
        }
    }
    return out;
}

PercConfig map_to_percolation(const VertexField& field) {
    PercConfig pc;
    pc.width = 2 * field.L;
    pc.height = field.H;
    pc.open.resize(static_cast<std::size_t>(pc.width) * static_cast<std::size_t>(pc.height));
    for (long y = 0; y < field.H; ++y) {
        for (int x = 0; x < pc.width; ++x) {
            const int t = field.at(x % field.L, y);
            // tile 1 connects SW with NE, tile 0 connects NW with SE
            const bool sw_primal = PercConfig::primal(x, y);
            const bool open = sw_primal ? (t == 1) : (t == 0);
            pc.open[static_cast<std::size_t>(y) * static_cast<std::size_t>(pc.width) + static_cast<std::size_t>(x)] = open ? 1 : 0;
        }
    }
    return pc;
}

bool is_half_turn_self_dual(const PercConfig& pc) {
    if (pc.width % 2 != 0) return false;
    const int half = pc.width / 2;
    for (long y = 0; y < pc.height; ++y)
        for (int x = 0; x < half; ++x)
            if (pc.is_open(x + half, y) == pc.is_open(x, y)) return false;
    return true;
}

ClusterStats cluster_stats(const PercConfig& pc, double window_fraction, int batches) {
    if (pc.width < 2 || pc.width % 2 != 0 || pc.height < 1) throw DomainError("percolation window must have even width and positive height");
    if (!(window_fraction > 0 && window_fraction <= 1)) throw DomainError("window_fraction must lie in (0, 1]");
    if (batches < 1) throw DomainError("batches must be positive");
    const int W = pc.width;
    const long H = pc.height;
    // corners (fx, fy), 0 <= fy <= H; every corner gets a slot, only primal ones are used
    auto corner = [W](int fx, long fy) { return static_cast<std::size_t>(fy) * static_cast<std::size_t>(W) + static_cast<std::size_t>(((fx % W) + W) % W); };
    UnionFind uf(static_cast<std::size_t>(W) * static_cast<std::size_t>(H + 1));
    for (long y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            if (!pc.is_open(x, y)) continue;
            if (PercConfig::primal(x, y))
                uf.unite(corner(x, y), corner(x + 1, y + 1));
            else
                uf.unite(corner(x, y + 1), corner(x + 1, y));
        }
    }
    const std::size_t n = static_cast<std::size_t>(W) * static_cast<std::size_t>(H + 1);
    std::vector<char> bottom(n, 0), top(n, 0), root(n, 0);
    std::vector<long> min_row(n, H + 1);
    for (long fy = 0; fy <= H; ++fy) {
        for (int fx = 0; fx < W; ++fx) {
            if (!PercConfig::primal(fx, fy)) continue;
            const std::size_t r = uf.find(corner(fx, fy));
            root[r] = 1;
            if (fy == 0) bottom[r] = 1;
            if (fy == H) top[r] = 1;
            min_row[r] = std::min(min_row[r], fy);
        }
    }
    const long band = std::max<long>(1, static_cast<long>(std::llround(window_fraction * static_cast<double>(H + 1))));
    const long y0 = (H + 1 - band) / 2;
    const long y1 = y0 + band;
    const int nb = static_cast<int>(std::min<long>(batches, band));
    std::vector<long> per_batch(static_cast<std::size_t>(nb), 0);
    auto batch_of = [&](long fy) { return static_cast<std::size_t>((fy - y0) * nb / band); };

    ClusterStats st;
    for (std::size_t r = 0; r < n; ++r) {
        if (!root[r]) continue;
        if (bottom[r] && top[r])
            ++st.spanning_clusters;
        else if (bottom[r] || top[r])
            ++st.boundary_clusters;
        else if (min_row[r] >= y0 && min_row[r] < y1) {
            ++st.finite_clusters;
            ++per_batch[batch_of(min_row[r])];
        }
    }
    const long sites_per_row = W / 2;
    st.bulk_sites = band * sites_per_row;
    st.finite_cluster_density = static_cast<double>(st.finite_clusters) / static_cast<double>(st.bulk_sites);
    std::vector<double> values;
    for (int b = 0; b < nb; ++b) {
        const long lo = y0 + band * b / nb;
        const long hi = y0 + band * (b + 1) / nb;
        values.push_back(static_cast<double>(per_batch[static_cast<std::size_t>(b)]) / static_cast<double>((hi - lo) * sites_per_row));
    }
    st.batches = nb;
    st.stderr_ = batch_means(values).stderr_;
    return st;
}

}  // namespace oddloop
