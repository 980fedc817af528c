#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "oddloop/rational.hpp"

namespace oddloop {

inline constexpr int kPatternCap = 17;
inline constexpr int kMarkovCap = 13;

/// One defect plus a non-crossing matching of the other L - 1 sites, with
/// the circle cut at the defect.
struct LinkPattern {
    int L = 1;
    int defect = 0;
    /// partner[i] is the site paired with i; partner[defect] == defect.
    std::vector<int> partner;

    /// Balanced-parenthesis word read from the site after the defect.
    std::string word() const;
    static LinkPattern from_word(int L, int defect, const std::string& word);
    /// Throws DomainError unless the pattern is a valid one-defect pattern.
    void validate() const;

    friend bool operator==(const LinkPattern&, const LinkPattern&) = default;
};

/// Cyclic relabeling site i -> i + k.
LinkPattern rotate(const LinkPattern& p, int k);

/// Tile choices for one row; bit x selects the tile at column x.
struct RowChoice {
    int L = 1;
    std::uint32_t tiles = 0;
    int tile(int x) const { return static_cast<int>((tiles >> x) & 1u); }
};

/// Standard: tile 0 joins (left, bottom) and (top, right); tile 1 joins
/// (bottom, right) and (left, top). Mirrored swaps the two.
enum class TileConvention { Standard, Mirrored };

struct RowResult {
    LinkPattern pattern;
    int loops_closed = 0;
};

/// All binomial(L, (L-1)/2) patterns in canonical order (defect, then word
/// with '(' before ')').
std::vector<LinkPattern> enumerate_patterns(int L, int cap = kPatternCap);

RowResult apply_row(const LinkPattern& p, const RowChoice& row, TileConvention convention = TileConvention::Standard);

/// Dense position lookup for canonical patterns.
class PatternIndex {
public:
    explicit PatternIndex(int L);
    long operator()(const LinkPattern& p) const;
    std::size_t size() const { return count_; }

private:
    int L_;
    std::size_t count_ = 0;
    std::vector<long> table_;
};

/// Transition counts over all 2^L rows: counts[to * n + from].
struct MarkovMatrix {
    int L = 1;
    std::vector<LinkPattern> patterns;
    std::vector<std::uint32_t> counts;
    /// Total loops closed over all rows, per source pattern.
    std::vector<std::uint64_t> loops_from;

    std::size_t size() const { return patterns.size(); }
    std::uint32_t count(std::size_t to, std::size_t from) const { return counts[to * size() + from]; }
    std::uint64_t row_count() const { return std::uint64_t{1} << L; }
    Rational entry(std::size_t to, std::size_t from) const;
};

MarkovMatrix build_markov_matrix(int L, int cap = kMarkovCap, TileConvention convention = TileConvention::Standard);

struct StationaryState {
    int L = 1;
    std::vector<LinkPattern> patterns;
    std::vector<Rational> probabilities;
    mpz_class common_denominator;
    std::vector<mpz_class> scaled;  // probabilities * common_denominator
};

/// Exact stationary vector. Solved on rotation orbits by fraction-free
/// elimination, expanded, and verified against the full matrix exactly.
/// Throws RankAnomaly if the kernel is not one-dimensional.
StationaryState stationary_state(const MarkovMatrix& m);
StationaryState stationary_state(int L);

/// Reference solve on the full dense system (no symmetry reduction).
StationaryState stationary_state_dense(const MarkovMatrix& m);

/// Expected loops closed per row in stationarity, divided by L.
Rational nu_stationary(const MarkovMatrix& m, const StationaryState& s);
Rational nu_stationary(int L);

/// Some power of the transition graph (up to max_power) has every entry positive.
bool is_primitive(const MarkovMatrix& m, int max_power = 64);

bool is_rotation_invariant(const StationaryState& s);

/// Exact kernel vector of an integer matrix with nullity one, via Bareiss
/// elimination; normalized to sum 1. Throws RankAnomaly otherwise.
std::vector<Rational> integer_kernel_vector(std::vector<std::vector<mpz_class>> a);

}  // namespace oddloop
