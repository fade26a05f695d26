#include "ptk/incomparability.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <set>

#include "ptk/automata_io.hpp"
#include "ptk/closures.hpp"

namespace ptk {

bool is_incomparable(const Word& u, const Word& v) {
    return compare(u, v) == WordRelation::incomparable;
}

Dfa incomparability_singleton(const Word& u) {
    Dfa up = up_word_dfa(u);
    Dfa strict_down_u = difference(down_word_dfa(u), word_dfa(u));
    return complement(union_dfa(up, strict_down_u));
}

bool in_I(const Word& u, const Dfa& d) {
    detail::require_same_alphabet(u.alphabet, d.alphabet, "in_I");
    const unsigned k = u.alphabet.size();
    const std::size_t n = u.size();

    // Greedy next-occurrence table for the "v is a subword of u" side.
    std::vector<std::uint32_t> next((n + 1) * k, static_cast<std::uint32_t>(n));
    for (std::size_t p = n; p-- > 0;) {
        for (unsigned c = 0; c < k; ++c)
            next[p * k + c] = next[(p + 1) * k + c];
        next[p * k + u.syms[p]] = static_cast<std::uint32_t>(p);
    }
    const std::uint32_t sink = static_cast<std::uint32_t>(n + 1);

    // State: (automaton state, embedded prefix of u, subword matcher).
    // A witness is an accepted v with u not embedded and the matcher in
    // the sink, i.e. u and v incomparable.
    using Triple = std::tuple<State, std::uint32_t, std::uint32_t>;
    std::set<Triple> seen;
    std::deque<Triple> queue;
    Triple start{d.initial, 0, 0};
    seen.insert(start);
    queue.push_back(start);
    while (!queue.empty()) {
        auto [q, i, j] = queue.front();
        queue.pop_front();
        if (d.finals[q] && i < n && j == sink)
            return true;
        for (unsigned c = 0; c < k; ++c) {
            State nq = d.step(q, c);
            std::uint32_t ni = (i < n && u.syms[i] == c) ? i + 1 : i;
            std::uint32_t nj = sink;
            if (j != sink) {
                std::uint32_t np = next[j * k + c];
                nj = (np >= n) ? sink : np + 1;
            }
            if (seen.insert({nq, ni, nj}).second)
                queue.push_back({nq, ni, nj});
        }
    }
    return false;
}

bool in_C(const Word& u, const Dfa& d) {
    return !in_I(u, d);
}

namespace {

// Explicit members of a finite language; nullopt when infinite.
std::optional<std::vector<Word>> finite_language_words(const Dfa& d) {
    Dfa c = d.canonical ? d : minimize(d);
    const unsigned k = c.alphabet.size();
    std::vector<char> productive(c.num_states, 0);
    {
        std::vector<std::vector<State>> radj(c.num_states);
        for (State q = 0; q < c.num_states; ++q)
            for (unsigned ch = 0; ch < k; ++ch)
                radj[c.step(q, ch)].push_back(q);
        std::deque<State> queue;
        for (State q = 0; q < c.num_states; ++q)
            if (c.finals[q]) {
                productive[q] = 1;
                queue.push_back(q);
            }
        while (!queue.empty()) {
            State q = queue.front();
            queue.pop_front();
            for (State p : radj[q])
                if (!productive[p]) {
                    productive[p] = 1;
                    queue.push_back(p);
                }
        }
    }
    // A productive cycle (self-loops included) makes the language
    // infinite; otherwise the productive subgraph is a DAG and the
    // accepted words can be read off exhaustively.
    std::vector<int> color(c.num_states, 0);
    bool cyclic = false;
    auto visit = [&](auto&& self, State q) -> void {
        color[q] = 1;
        for (unsigned ch = 0; ch < k && !cyclic; ++ch) {
            State t = c.step(q, ch);
            if (!productive[t])
                continue;
            if (color[t] == 1)
                cyclic = true;
            else if (color[t] == 0)
                self(self, t);
        }
        color[q] = 2;
    };
    if (productive[c.initial])
        visit(visit, c.initial);
    if (cyclic)
        return std::nullopt;

    std::vector<Word> out;
    std::vector<std::uint8_t> cur;
    auto collect = [&](auto&& self, State q) -> void {
        if (c.finals[q])
            out.emplace_back(c.alphabet, cur);
        for (unsigned ch = 0; ch < k; ++ch) {
            State t = c.step(q, ch);
            if (!productive[t])
                continue;
            cur.push_back(static_cast<std::uint8_t>(ch));
            self(self, t);
            cur.pop_back();
        }
    };
    if (productive[c.initial])
        collect(collect, c.initial);
    std::sort(out.begin(), out.end(), ShortlexLess{});
    return out;
}

std::mutex g_iofpt_cache_mutex;
std::map<std::pair<std::string, unsigned>, Dfa> g_iofpt_cache;

}  // namespace

Dfa I_of_pt(const Dfa& d, unsigned n, const Caps& caps) {
    Dfa c = d.canonical ? d : minimize(d);
    std::string cache_key_text = to_text(c);
    {
        std::lock_guard lock(g_iofpt_cache_mutex);
        auto it = g_iofpt_cache.find({cache_key_text, n});
        if (it != g_iofpt_cache.end())
            return it->second;
    }
    if (!is_n_pt(c, n, caps))
        throw precondition_error("I_of_pt: language is not closed at order " + std::to_string(n));

    unsigned level;
    auto finite = finite_language_words(c);
    if (finite) {
        // The image of a finite set is the union of the singleton
        // images, each of height bounded by the word length.
        std::size_t longest = 0;
        for (const auto& w : *finite)
            longest = std::max(longest, w.size());
        level = std::max<unsigned>(1, static_cast<unsigned>(longest));
    } else {
        std::uint64_t m = small_subword_bound(c.alphabet.size(), n);
        if (m + 1 > 64)
            throw cap_exceeded("I_of_pt: required class-automaton order " + std::to_string(m + 1) +
                               " is far beyond any feasible size");
        level = static_cast<unsigned>(m) + 1;
    }

    auto ca = class_automaton(c.alphabet, level, caps);
    std::vector<bool> accepting(ca->num_states(), false);
    for (State s = 0; s < ca->num_states(); ++s)
        accepting[s] = in_I(ca->representative(s), c);
    Dfa result = minimize(ca->as_dfa(accepting));

    std::lock_guard lock(g_iofpt_cache_mutex);
    return g_iofpt_cache.try_emplace({std::move(cache_key_text), n}, std::move(result))
        .first->second;
}

Word two_witness(const Word& w, const Word& u, const Word& v, unsigned n) {
    detail::require_same_alphabet(w.alphabet, u.alphabet, "two_witness");
    detail::require_same_alphabet(w.alphabet, v.alphabet, "two_witness");
    if (u == v)
        throw precondition_error("two_witness: the two deletions must be distinct");
    if (u.size() + 1 != w.size() || v.size() + 1 != w.size())
        throw precondition_error("two_witness: deletions must be one letter shorter than w");
    auto check_premise = [&](const Word& x, const char* name) {
        if (!is_subword(x, w) || !sim_equiv(x, w, n))
            throw precondition_error(std::string("two_witness: ") + name +
                                     " is not a congruent subword of w at order " +
                                     std::to_string(n));
    };
    check_premise(u, "u");
    check_premise(v, "v");

    auto deletion = [&](std::size_t pos) {
        std::vector<std::uint8_t> s(w.syms);
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(pos));
        return s;
    };
    // Find deletion positions p1 < p2 realizing {u, v}, smallest pair
    // first for determinism.
    for (std::size_t p1 = 0; p1 < w.size(); ++p1)
        for (std::size_t p2 = p1 + 1; p2 < w.size(); ++p2) {
            auto d1 = deletion(p1), d2 = deletion(p2);
            bool fits = (d1 == v.syms && d2 == u.syms) || (d1 == u.syms && d2 == v.syms);
            if (!fits)
                continue;
            // w = w0 a1 w1 a2 w2; the witness drops a1 and doubles a2.
            std::vector<std::uint8_t> out;
            out.insert(out.end(), w.syms.begin(), w.syms.begin() + static_cast<std::ptrdiff_t>(p1));
            out.insert(out.end(), w.syms.begin() + static_cast<std::ptrdiff_t>(p1) + 1,
                       w.syms.begin() + static_cast<std::ptrdiff_t>(p2));
            out.push_back(w.syms[p2]);
            out.push_back(w.syms[p2]);
            out.insert(out.end(), w.syms.begin() + static_cast<std::ptrdiff_t>(p2) + 1,
                       w.syms.end());
            Word wp(w.alphabet, std::move(out));
            if (wp == w)
                throw error("two_witness: constructed witness equals w (bug)");
            if (!sim_equiv(w, wp, n))
                throw error("two_witness: constructed witness is not congruent (bug)");
            return wp;
        }
    throw precondition_error("two_witness: no valid decomposition of w into the two deletions");
}

LayerReport layer_report(const Word& u, unsigned level, unsigned maxlen, const Caps& caps) {
    LayerReport r{.representative = u, .level = level, .maxlen = maxlen, .counts = {}};
    r.counts.assign(maxlen + 1, 0);
    for (const auto& w : enumerate_class(u, level, maxlen, caps))
        r.counts[w.size()]++;
    return r;
}

}  // namespace ptk
