#include "ptk/simon.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <unordered_map>

namespace ptk {

namespace {

// Packed word: sentinel bit followed by 4-bit letters. Holds up to 15
// letters over up to 15 letters of alphabet, enough for every level a
// class automaton can reach before its state cap.
constexpr unsigned kMaxPackedLen = 15;

inline std::uint64_t packed_push(std::uint64_t w, std::uint8_t c) {
    return (w << 4) | (c + 1);
}

// Sorted list of all packed subwords of `syms` with length <= maxlen.
// This set determines the congruence class, so it doubles as the class
// key during automaton construction.
std::vector<std::uint64_t> subword_key(const std::vector<std::uint8_t>& syms, unsigned k,
                                       unsigned maxlen) {
    const std::size_t n = syms.size();
    std::vector<std::size_t> next((n + 1) * k, n);
    for (std::size_t p = n; p-- > 0;) {
        for (unsigned c = 0; c < k; ++c)
            next[p * k + c] = next[(p + 1) * k + c];
        next[p * k + syms[p]] = p;
    }
    std::vector<std::uint64_t> out{1};
    auto rec = [&](auto&& self, std::size_t pos, std::uint64_t packed, unsigned len) -> void {
        if (len >= maxlen)
            return;
        for (unsigned c = 0; c < k; ++c) {
            std::size_t np = next[pos * k + c];
            if (np >= n)
                continue;
            std::uint64_t nw = packed_push(packed, c);
            out.push_back(nw);
            self(self, np + 1, nw, len + 1);
        }
    };
    rec(rec, 0, 1, 0);
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t fnv1a(const std::vector<std::uint64_t>& blob) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint64_t x : blob)
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    return h;
}

}  // namespace

SubwordProfile profile(const Word& u, unsigned level) {
    std::set<std::vector<std::uint8_t>> all;
    detail::for_each_distinct_subword(u.syms, u.alphabet.size(), level,
                                      [&](const std::vector<std::uint8_t>& s) { all.insert(s); });
    SubwordProfile p;
    p.level = level;
    for (const auto& s : all) {
        // Maximal iff at the level ceiling or no one-letter extension
        // stays inside the set (the set is subword-closed).
        if (s.size() < level) {
            bool extendable = false;
            for (std::size_t pos = 0; pos <= s.size() && !extendable; ++pos)
                for (unsigned c = 0; c < u.alphabet.size() && !extendable; ++c) {
                    std::vector<std::uint8_t> ext(s);
                    ext.insert(ext.begin() + static_cast<std::ptrdiff_t>(pos),
                               static_cast<std::uint8_t>(c));
                    if (all.count(ext))
                        extendable = true;
                }
            if (extendable)
                continue;
        }
        p.maximal.emplace_back(u.alphabet, s);
    }
    std::sort(p.maximal.begin(), p.maximal.end(), ShortlexLess{});
    return p;
}

std::optional<unsigned> delta(const Word& u, const Word& v) {
    detail::require_same_alphabet(u.alphabet, v.alphabet, "delta");
    if (u.syms == v.syms)
        return std::nullopt;
    const unsigned k = u.alphabet.size();
    const std::size_t nu = u.size(), nv = v.size();

    auto next_table = [&](const std::vector<std::uint8_t>& syms) {
        const std::size_t n = syms.size();
        std::vector<std::uint32_t> next((n + 1) * k, static_cast<std::uint32_t>(n));
        for (std::size_t p = n; p-- > 0;) {
            for (unsigned c = 0; c < k; ++c)
                next[p * k + c] = next[(p + 1) * k + c];
            next[p * k + syms[p]] = static_cast<std::uint32_t>(p);
        }
        return next;
    };
    auto nextu = next_table(u.syms);
    auto nextv = next_table(v.syms);

    // Product of the two subword-set automata; position nu+1 / nv+1 is
    // the rejecting sink. Find the depth of the first state where
    // exactly one side has fallen off.
    const std::uint32_t su = static_cast<std::uint32_t>(nu + 1);
    const std::uint32_t sv = static_cast<std::uint32_t>(nv + 1);
    std::vector<char> seen((su + 1) * (sv + 1), 0);
    std::deque<std::pair<std::uint32_t, std::uint32_t>> queue{{0, 0}};
    std::deque<unsigned> depth{0};
    seen[0] = 1;
    while (!queue.empty()) {
        auto [p, q] = queue.front();
        unsigned dep = depth.front();
        queue.pop_front();
        depth.pop_front();
        if ((p == su) != (q == sv))
            return dep;
        for (unsigned c = 0; c < k; ++c) {
            std::uint32_t np = su, nq = sv;
            if (p < su) {
                std::uint32_t t = nextu[p * k + c];
                np = (t >= nu) ? su : t + 1;
            }
            if (q < sv) {
                std::uint32_t t = nextv[q * k + c];
                nq = (t >= nv) ? sv : t + 1;
            }
            if (!seen[np * (sv + 1) + nq]) {
                seen[np * (sv + 1) + nq] = 1;
                queue.push_back({np, nq});
                depth.push_back(dep + 1);
            }
        }
    }
    return std::nullopt;  // unreachable for distinct words
}

bool sim_equiv(const Word& u, const Word& v, unsigned level) {
    auto d = delta(u, v);
    return !d || *d > level;
}

unsigned pt_height_word(const Word& u) {
    unsigned h = 0;
    for (const auto& v : shuffle_with_alphabet(u)) {
        auto d = delta(u, v);
        if (d)
            h = std::max(h, *d);
    }
    return h;
}

unsigned pt_height_finite(const std::vector<Word>& words) {
    if (words.empty())
        throw precondition_error("pt_height_finite: empty input (the empty language has height 0)");
    for (std::size_t i = 1; i < words.size(); ++i)
        detail::require_same_alphabet(words[0].alphabet, words[i].alphabet, "pt_height_finite");
    unsigned h = 0;
    for (const auto& w : words)
        h = std::max(h, pt_height_word(w));
    return h;
}

namespace {

using Syms = std::vector<std::uint8_t>;

std::uint32_t occ_mask(const Syms& w) {
    std::uint32_t m = 0;
    for (auto s : w)
        m |= 1u << s;
    return m;
}

// Rich factorization relative to a letter set: blocks end at the
// letter completing the set.
struct MaskedFactorization {
    std::vector<std::pair<Syms, std::uint8_t>> blocks;
    Syms tail;
};

MaskedFactorization masked_rich_factorization(const Syms& w, std::uint32_t mask) {
    MaskedFactorization f;
    Syms cur;
    std::uint32_t seen = 0;
    for (auto s : w) {
        seen |= 1u << s;
        if (seen == mask) {
            f.blocks.emplace_back(cur, s);
            cur.clear();
            seen = 0;
        } else {
            cur.push_back(s);
        }
    }
    f.tail = std::move(cur);
    return f;
}

Syms small_subword_rec(const Syms& w, unsigned n) {
    if (w.empty() || n == 0)
        return {};
    std::uint32_t mask = occ_mask(w);
    unsigned k = static_cast<unsigned>(__builtin_popcount(mask));
    if (k == 1) {
        std::size_t len = std::min<std::size_t>(n, w.size());
        return Syms(len, w[0]);
    }
    auto f = masked_rich_factorization(w, mask);
    const unsigned m = static_cast<unsigned>(f.blocks.size());
    Syms out;
    if (m >= n) {
        // Already saturated: an n-rich subword on k*n letters has the
        // full set of short subwords, like w itself.
        for (unsigned i = 0; i < n; ++i) {
            const auto& [block, last] = f.blocks[i];
            std::uint32_t taken = 0;
            for (auto s : block)
                if (!(taken & (1u << s))) {
                    taken |= 1u << s;
                    out.push_back(s);
                }
            out.push_back(last);
        }
        return out;
    }
    const unsigned n2 = n + 1 - m;  // >= 2 here
    for (const auto& [block, last] : f.blocks) {
        Syms v = small_subword_rec(block, n2);
        out.insert(out.end(), v.begin(), v.end());
        out.push_back(last);
    }
    Syms tail = small_subword_rec(f.tail, n2 - 1);
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

}  // namespace

Word small_subword(const Word& u, unsigned n) {
    return Word(u.alphabet, small_subword_rec(u.syms, n));
}

State ClassAutomaton::state_of(const Word& w) const {
    detail::require_same_alphabet(alphabet, w.alphabet, "ClassAutomaton::state_of");
    State q = initial;
    for (auto s : w.syms)
        q = step(q, s);
    return q;
}

Word ClassAutomaton::representative(State s) const {
    Syms rev;
    while (s != initial) {
        rev.push_back(parent[s].second);
        s = parent[s].first;
    }
    std::reverse(rev.begin(), rev.end());
    return Word(alphabet, std::move(rev));
}

Dfa ClassAutomaton::as_dfa(const std::vector<bool>& accepting) const {
    Dfa d(alphabet);
    d.num_states = num_states();
    d.delta = delta;
    d.finals = accepting;
    d.initial = initial;
    return d;
}

namespace {

struct ClassAutomatonBuilder {
    const Alphabet& alphabet;
    const unsigned level;
    const Caps& caps;
    ClassAutomaton ca;
    std::unordered_map<std::uint64_t, std::vector<State>> buckets;

    ClassAutomatonBuilder(const Alphabet& a, unsigned lvl, const Caps& c)
        : alphabet(a), level(lvl), caps(c), ca{a, lvl, {}, {}, 0} {}

    std::vector<std::uint64_t> key_of(const Syms& w) const {
        return subword_key(w, alphabet.size(), level);
    }

    // Exact interning: the hash narrows candidates, equality is decided
    // on the full subword-set key.
    State intern(const Syms& w, const std::vector<std::uint64_t>& key, State parent_state,
                 std::uint8_t parent_sym) {
        (void)w;
        std::uint64_t h = fnv1a(key);
        auto& bucket = buckets[h];
        for (State cand : bucket) {
            Syms cw = ca.representative(cand).syms;
            if (key_of(cw) == key)
                return cand;
        }
        State s = static_cast<State>(ca.parent.size());
        if (ca.parent.size() >= caps.max_class_states)
            throw cap_exceeded("class_automaton: frontier reached " +
                               std::to_string(ca.parent.size()) + " states at level " +
                               std::to_string(level) + " over " + std::to_string(alphabet.size()) +
                               " letters (cap " + std::to_string(caps.max_class_states) + ")");
        ca.parent.emplace_back(parent_state, parent_sym);
        ca.delta.resize(ca.parent.size() * alphabet.size(), 0);
        bucket.push_back(s);
        return s;
    }

    void build() {
        if (alphabet.size() > kMaxPackedLen || level > kMaxPackedLen)
            throw cap_exceeded("class_automaton: level and alphabet size are limited to " +
                               std::to_string(kMaxPackedLen) + " (requested level " +
                               std::to_string(level) + ", " + std::to_string(alphabet.size()) +
                               " letters)");
        const unsigned k = alphabet.size();
        intern({}, key_of({}), 0, 0);
        for (State q = 0; q < ca.parent.size(); ++q) {
            Syms w = ca.representative(q).syms;
            for (unsigned c = 0; c < k; ++c) {
                Syms wc = w;
                wc.push_back(static_cast<std::uint8_t>(c));
                State t = intern(wc, key_of(wc), q, static_cast<std::uint8_t>(c));
                ca.delta[q * k + c] = t;
            }
        }
    }
};

std::mutex g_class_cache_mutex;
std::map<std::pair<std::string, unsigned>, std::shared_ptr<const ClassAutomaton>> g_class_cache;

}  // namespace

std::shared_ptr<const ClassAutomaton> class_automaton(const Alphabet& a, unsigned level,
                                                      const Caps& caps) {
    {
        std::lock_guard lock(g_class_cache_mutex);
        auto it = g_class_cache.find({a.letters(), level});
        if (it != g_class_cache.end())
            return it->second;
    }
    ClassAutomatonBuilder builder(a, level, caps);
    builder.build();
    auto ptr = std::make_shared<const ClassAutomaton>(std::move(builder.ca));
    std::lock_guard lock(g_class_cache_mutex);
    return g_class_cache.try_emplace({a.letters(), level}, ptr).first->second;
}

bool is_n_pt(const Dfa& d, unsigned level, const Caps& caps) {
    auto ca = class_automaton(d.alphabet, level, caps);
    const unsigned k = d.alphabet.size();
    // L(d) is a union of classes iff within every reachable class all
    // paired automaton states agree on acceptance.
    std::vector<signed char> verdict(ca->num_states(), -1);
    std::set<std::pair<State, State>> seen{{ca->initial, d.initial}};
    std::deque<std::pair<State, State>> queue{{ca->initial, d.initial}};
    while (!queue.empty()) {
        auto [cs, q] = queue.front();
        queue.pop_front();
        signed char acc = d.finals[q] ? 1 : 0;
        if (verdict[cs] == -1)
            verdict[cs] = acc;
        else if (verdict[cs] != acc)
            return false;
        for (unsigned c = 0; c < k; ++c) {
            auto nxt = std::make_pair(ca->step(cs, c), d.step(q, c));
            if (seen.insert(nxt).second)
                queue.push_back(nxt);
        }
    }
    return true;
}

std::optional<unsigned> pt_height_dfa(const Dfa& d, const Caps& caps) {
    Dfa c = d.canonical ? d : minimize(d);
    if (c.num_states == 1)
        return 0;  // empty or universal
    auto bound = acyclic_search_bound(c);
    if (!bound)
        return std::nullopt;  // proper cycle: not piecewise-testable
    for (unsigned n = 1; n <= *bound; ++n)
        if (is_n_pt(c, n, caps))
            return n;
    return std::nullopt;
}

std::vector<Word> enumerate_class(const Word& u, unsigned level, unsigned maxlen,
                                  const Caps& caps) {
    auto ca = class_automaton(u.alphabet, level, caps);
    State target = ca->state_of(u);
    const unsigned k = u.alphabet.size();
    std::vector<Word> out;
    std::size_t visited = 0;
    Syms cur;
    auto rec = [&](auto&& self, State q) -> void {
        if (++visited > caps.max_enum_words)
            throw cap_exceeded("enumerate_class: visited more than " +
                               std::to_string(caps.max_enum_words) + " words");
        if (q == target)
            out.emplace_back(u.alphabet, cur);
        if (cur.size() >= maxlen)
            return;
        for (unsigned c = 0; c < k; ++c) {
            cur.push_back(static_cast<std::uint8_t>(c));
            self(self, ca->step(q, c));
            cur.pop_back();
        }
    };
    rec(rec, ca->initial);
    std::sort(out.begin(), out.end(), ShortlexLess{});
    return out;
}

double class_count_bound_log2(unsigned k, unsigned n) {
    if (k < 2)
        throw precondition_error("class_count_bound_log2: defined for k >= 2");
    double base = (static_cast<double>(n) + 2.0 * k - 3.0) / (k - 1.0);
    return k * std::pow(base, k - 1.0) * std::log2(static_cast<double>(n)) *
           std::log2(static_cast<double>(k));
}

}  // namespace ptk
