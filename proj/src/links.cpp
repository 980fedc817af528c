#include "oddloop/links.hpp"

#include <algorithm>
#include <bitset>
#include <functional>

#include "oddloop/errors.hpp"

namespace oddloop {

std::string LinkPattern::word() const {
    std::string w;
    w.reserve(static_cast<std::size_t>(L - 1));
    for (int k = 0; k < L - 1; ++k) {
        const int s = (defect + 1 + k) % L;
        const int pos = ((partner[s] - defect - 1) % L + L) % L;
        w.push_back(pos > k ? '(' : ')');
    }
    return w;
}

LinkPattern LinkPattern::from_word(int L, int defect, const std::string& word) {
    if (L < 1 || L % 2 == 0) throw DomainError("link patterns need odd L");
    if (defect < 0 || defect >= L) throw DomainError("defect index out of range");
    if (static_cast<int>(word.size()) != L - 1) throw DomainError("word length must be L - 1");
    LinkPattern p;
    p.L = L;
    p.defect = defect;
    p.partner.assign(static_cast<std::size_t>(L), -1);
    p.partner[static_cast<std::size_t>(defect)] = defect;
    std::vector<int> stack;
    for (int k = 0; k < L - 1; ++k) {
        const int s = (defect + 1 + k) % L;
        if (word[static_cast<std::size_t>(k)] == '(') {
            stack.push_back(s);
        } else if (word[static_cast<std::size_t>(k)] == ')') {
            if (stack.empty()) throw DomainError("unbalanced parenthesis word '" + word + "'");
            p.partner[static_cast<std::size_t>(s)] = stack.back();
            p.partner[static_cast<std::size_t>(stack.back())] = s;
            stack.pop_back();
        } else {
            throw DomainError("parenthesis word may only contain '(' and ')'");
        }
    }
    if (!stack.empty()) throw DomainError("unbalanced parenthesis word '" + word + "'");
    return p;
}

void LinkPattern::validate() const {
    if (static_cast<int>(partner.size()) != L) throw DomainError("partner array has wrong length");
    int defects = 0;
    for (int i = 0; i < L; ++i) {
        const int j = partner[static_cast<std::size_t>(i)];
        if (j < 0 || j >= L || partner[static_cast<std::size_t>(j)] != i) throw DomainError("partner array is not an involution");
        if (j == i) ++defects;
    }
    if (defects != 1 || partner[static_cast<std::size_t>(defect)] != defect) throw DomainError("pattern must have exactly one defect");
    // non-crossing in the cut order: the word must rebuild the same pairing
    if (!(from_word(L, defect, word()) == *this)) throw DomainError("pattern crosses itself or the defect line");
}

LinkPattern rotate(const LinkPattern& p, int k) {
    const int L = p.L;
    LinkPattern r;
    r.L = L;
    r.defect = ((p.defect + k) % L + L) % L;
    r.partner.assign(static_cast<std::size_t>(L), 0);
    for (int i = 0; i < L; ++i)
        r.partner[static_cast<std::size_t>(((i + k) % L + L) % L)] = ((p.partner[static_cast<std::size_t>(i)] + k) % L + L) % L;
    return r;
}

std::vector<LinkPattern> enumerate_patterns(int L, int cap) {
    if (L < 1 || L % 2 == 0) throw DomainError("enumerate_patterns requires odd L");
    if (L > cap) throw CapExceeded("L = " + std::to_string(L) + " exceeds the pattern cap " + std::to_string(cap));
    std::vector<std::string> words;
    std::string cur;
    std::function<void(int, int)> rec = [&](int open, int close) {
        if (static_cast<int>(cur.size()) == L - 1) {
            words.push_back(cur);
            return;
        }
        if (open < (L - 1) / 2) {
            cur.push_back('(');
            rec(open + 1, close);
            cur.pop_back();
        }
        if (close < open) {
            cur.push_back(')');
            rec(open, close + 1);
            cur.pop_back();
        }
    };
    rec(0, 0);
    std::vector<LinkPattern> out;
    out.reserve(words.size() * static_cast<std::size_t>(L));
    for (int d = 0; d < L; ++d)
        for (const auto& w : words) out.push_back(LinkPattern::from_word(L, d, w));
    return out;
}

RowResult apply_row(const LinkPattern& p, const RowChoice& row, TileConvention convention) {
    const int L = p.L;
    if (row.L != L) throw DomainError("row length does not match the pattern");
    // nodes: bottom b_x = x, top t_x = L + x, horizontal h_x = 2L + x (between x and x+1)
    const int nodes = 3 * L;
    std::vector<int> adj(static_cast<std::size_t>(2 * nodes), -1);  // neighbor node per slot
    std::vector<int> eid(static_cast<std::size_t>(2 * nodes), -1);  // edge id per slot
    std::vector<int> deg(static_cast<std::size_t>(nodes), 0);
    int edges = 0;
    auto link = [&](int u, int v) {
        adj[static_cast<std::size_t>(2 * u + deg[u])] = v;
        eid[static_cast<std::size_t>(2 * u + deg[u]++)] = edges;
        adj[static_cast<std::size_t>(2 * v + deg[v])] = u;
        eid[static_cast<std::size_t>(2 * v + deg[v]++)] = edges;
        ++edges;
    };
    for (int x = 0; x < L; ++x) {
        const int left = 2 * L + (x + L - 1) % L;
        const int right = 2 * L + x;
        const int bottom = x;
        const int top = L + x;
        int t = row.tile(x);
        if (convention == TileConvention::Mirrored) t ^= 1;
        if (t == 0) {
            link(left, bottom);
            link(top, right);
        } else {
            link(bottom, right);
            link(left, top);
        }
    }
    for (int i = 0; i < L; ++i) {
        const int j = p.partner[static_cast<std::size_t>(i)];
        if (i < j) link(i, j);
    }
    std::vector<char> used(static_cast<std::size_t>(edges), 0);
    RowResult res;
    res.pattern.L = L;
    res.pattern.partner.assign(static_cast<std::size_t>(L), -1);
    for (int x = 0; x < L; ++x) {
        if (res.pattern.partner[static_cast<std::size_t>(x)] >= 0) continue;
        int cur = L + x;
        int slot = 2 * cur;
        while (true) {
            const int e = eid[static_cast<std::size_t>(slot)];
            used[static_cast<std::size_t>(e)] = 1;
            const int next = adj[static_cast<std::size_t>(slot)];
            if (deg[next] == 1) {
                // either another top or the old defect
                if (next >= L) {
                    const int y = next - L;
                    res.pattern.partner[static_cast<std::size_t>(x)] = y;
                    res.pattern.partner[static_cast<std::size_t>(y)] = x;
                } else {
                    res.pattern.partner[static_cast<std::size_t>(x)] = x;
                    res.pattern.defect = x;
                }
                break;
            }
            slot = (eid[static_cast<std::size_t>(2 * next)] == e) ? 2 * next + 1 : 2 * next;
            cur = next;
        }
    }
    // whatever is left is a union of closed cycles
    for (int start = 0; start < nodes; ++start) {
        for (int s = 0; s < deg[start]; ++s) {
            if (used[static_cast<std::size_t>(eid[static_cast<std::size_t>(2 * start + s)])]) continue;
            ++res.loops_closed;
            int slot = 2 * start + s;
            while (!used[static_cast<std::size_t>(eid[static_cast<std::size_t>(slot)])]) {
                const int e = eid[static_cast<std::size_t>(slot)];
                used[static_cast<std::size_t>(e)] = 1;
                const int next = adj[static_cast<std::size_t>(slot)];
                slot = (eid[static_cast<std::size_t>(2 * next)] == e) ? 2 * next + 1 : 2 * next;
            }
        }
    }
    return res;
}

PatternIndex::PatternIndex(int L) : L_(L), table_(static_cast<std::size_t>(L) << (L - 1), -1) {
    for (const auto& p : enumerate_patterns(L)) {
        const std::string w = p.word();
        std::size_t key = static_cast<std::size_t>(p.defect) << (L - 1);
        for (int k = 0; k < L - 1; ++k)
            if (w[static_cast<std::size_t>(k)] == '(') key |= std::size_t{1} << k;
        table_[key] = static_cast<long>(count_++);
    }
}

long PatternIndex::operator()(const LinkPattern& p) const {
    std::size_t key = static_cast<std::size_t>(p.defect) << (L_ - 1);
    for (int k = 0; k < L_ - 1; ++k) {
        const int s = (p.defect + 1 + k) % L_;
        const int pos = ((p.partner[static_cast<std::size_t>(s)] - p.defect - 1) % L_ + L_) % L_;
        if (pos > k) key |= std::size_t{1} << k;
    }
    return table_[key];
}

Rational MarkovMatrix::entry(std::size_t to, std::size_t from) const {
    return Rational(mpz_class(count(to, from)), mpz_class(1) << static_cast<unsigned>(L));
}

MarkovMatrix build_markov_matrix(int L, int cap, TileConvention convention) {
    if (L > cap) throw CapExceeded("L = " + std::to_string(L) + " exceeds the Markov-matrix cap " + std::to_string(cap));
    MarkovMatrix m;
    m.L = L;
    m.patterns = enumerate_patterns(L);
    const std::size_t n = m.size();
    const PatternIndex index(L);
    m.counts.assign(n * n, 0);
    m.loops_from.assign(n, 0);
    const std::uint32_t rows = 1u << L;
    for (std::size_t from = 0; from < n; ++from) {
        for (std::uint32_t r = 0; r < rows; ++r) {
            const RowResult res = apply_row(m.patterns[from], RowChoice{L, r}, convention);
            const auto to = static_cast<std::size_t>(index(res.pattern));
            ++m.counts[to * n + from];
            m.loops_from[from] += static_cast<std::uint64_t>(res.loops_closed);
        }
    }
    return m;
}

std::vector<Rational> integer_kernel_vector(std::vector<std::vector<mpz_class>> a) {
    const std::size_t rows = a.size();
    if (rows == 0) throw RankAnomaly("empty system");
    const std::size_t n = a[0].size();
    std::vector<std::size_t> pivot_cols;
    mpz_class prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < n; ++j) {
                mpz_class v = a[r][c] * a[i][j] - a[i][c] * a[r][j];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                a[i][j] = std::move(v);
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        pivot_cols.push_back(c);
        ++r;
    }
    if (r + 1 != n)
        throw RankAnomaly("kernel dimension is " + std::to_string(n - r) + ", expected 1");
    std::size_t free_col = n;
    for (std::size_t c = 0, k = 0; c < n; ++c) {
        if (k < pivot_cols.size() && pivot_cols[k] == c) {
            ++k;
        } else {
            free_col = c;
        }
    }
    std::vector<Rational> x(n, Rational(0));
    x[free_col] = Rational(1);
    for (std::size_t k = r; k-- > 0;) {
        const std::size_t c = pivot_cols[k];
        Rational acc(0);
        for (std::size_t j = c + 1; j < n; ++j)
            if (!x[j].is_zero() && a[k][j] != 0) acc += Rational(a[k][j]) * x[j];
        x[c] = -acc / Rational(a[k][c]);
    }
    Rational total(0);
    for (const auto& v : x) total += v;
    if (total.is_zero()) throw RankAnomaly("kernel vector sums to zero");
    for (auto& v : x) v /= total;
    return x;
}

namespace {

StationaryState finish(const MarkovMatrix& m, std::vector<Rational> probs) {
    StationaryState s;
    s.L = m.L;
    s.patterns = m.patterns;
    s.probabilities = std::move(probs);
    s.common_denominator = 1;
    for (const auto& p : s.probabilities) mpz_lcm(s.common_denominator.get_mpz_t(), s.common_denominator.get_mpz_t(), p.denominator().get_mpz_t());
    for (const auto& p : s.probabilities) s.scaled.push_back(p.numerator() * (s.common_denominator / p.denominator()));
    // exact stationarity on the full matrix: C s = 2^L s
    const std::size_t n = m.size();
    const mpz_class total = mpz_class(1) << static_cast<unsigned>(m.L);
    for (std::size_t to = 0; to < n; ++to) {
        mpz_class acc = 0;
        for (std::size_t from = 0; from < n; ++from) {
            const std::uint32_t c = m.count(to, from);
            if (c) acc += s.scaled[from] * c;
        }
        if (acc != total * s.scaled[to]) throw RankAnomaly("solved vector is not stationary");
    }
    return s;
}

int rotation_to_zero(const LinkPattern& p) { return (p.L - p.defect) % p.L; }

}  // namespace

StationaryState stationary_state(const MarkovMatrix& m) {
    const int L = m.L;
    const std::size_t n = m.size();
    const PatternIndex index(L);
    // orbit representatives: the patterns with the defect at site 0
    std::vector<std::size_t> reps;
    std::vector<long> orbit_of(n, -1);
    for (std::size_t i = 0; i < n; ++i)
        if (m.patterns[i].defect == 0) {
            orbit_of[i] = static_cast<long>(reps.size());
            reps.push_back(i);
        }
    for (std::size_t i = 0; i < n; ++i) {
        const LinkPattern base = rotate(m.patterns[i], rotation_to_zero(m.patterns[i]));
        orbit_of[i] = orbit_of[static_cast<std::size_t>(index(base))];
    }
    const std::size_t k = reps.size();
    std::vector<std::vector<mpz_class>> a(k, std::vector<mpz_class>(k, 0));
    for (std::size_t o = 0; o < k; ++o)
        for (std::size_t to = 0; to < n; ++to) {
            const std::uint32_t c = m.count(to, reps[o]);
            if (c) a[static_cast<std::size_t>(orbit_of[to])][o] += c;
        }
    const mpz_class total = mpz_class(1) << static_cast<unsigned>(L);
    for (std::size_t o = 0; o < k; ++o) a[o][o] -= total;
    const std::vector<Rational> w = integer_kernel_vector(std::move(a));
    std::vector<Rational> probs(n);
    for (std::size_t i = 0; i < n; ++i) probs[i] = w[static_cast<std::size_t>(orbit_of[i])] / Rational(L);
    return finish(m, std::move(probs));
}

StationaryState stationary_state(int L) { return stationary_state(build_markov_matrix(L)); }

StationaryState stationary_state_dense(const MarkovMatrix& m) {
    const std::size_t n = m.size();
    const mpz_class total = mpz_class(1) << static_cast<unsigned>(m.L);
    std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m.count(i, j);
    for (std::size_t i = 0; i < n; ++i) a[i][i] -= total;
    return finish(m, integer_kernel_vector(std::move(a)));
}

Rational nu_stationary(const MarkovMatrix& m, const StationaryState& s) {
    Rational acc(0);
    for (std::size_t i = 0; i < m.size(); ++i) acc += s.probabilities[i] * Rational(mpz_class(m.loops_from[i]));
    return acc / Rational(mpz_class(m.row_count())) / Rational(m.L);
}

Rational nu_stationary(int L) {
    if (L < 1 || L % 2 == 0) throw DomainError("nu_stationary requires odd L");
    const MarkovMatrix m = build_markov_matrix(L);
    return nu_stationary(m, stationary_state(m));
}

bool is_primitive(const MarkovMatrix& m, int max_power) {
    const std::size_t n = m.size();
    constexpr std::size_t W = 2048;
    if (n > W) throw CapExceeded("primitivity check limited to 2048 states");
    std::vector<std::bitset<W>> step(n), cur(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (m.count(i, j)) step[i].set(j);
    cur = step;
    for (int power = 1; power <= max_power; ++power) {
        bool all = true;
        for (std::size_t i = 0; i < n && all; ++i) all = cur[i].count() == n;
        if (all) return true;
        std::vector<std::bitset<W>> next(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                if (step[i][k]) next[i] |= cur[k];
        cur.swap(next);
    }
    return false;
}

bool is_rotation_invariant(const StationaryState& s) {
    const PatternIndex index(s.L);
    for (std::size_t i = 0; i < s.patterns.size(); ++i)
        for (int k = 1; k < s.L; ++k)
            if (!(s.probabilities[static_cast<std::size_t>(index(rotate(s.patterns[i], k)))] == s.probabilities[i])) return false;
    return true;
}

}  // namespace oddloop
