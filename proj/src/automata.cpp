#include "ptk/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace ptk {

namespace {

std::vector<std::vector<State>> eps_adjacency(const Nfa& n) {
    std::vector<std::vector<State>> adj(n.num_states);
    for (const auto& t : n.transitions)
        if (t.sym == Nfa::EPSILON)
            adj[t.src].push_back(t.dst);
    return adj;
}

void close_under_eps(std::vector<State>& states, const std::vector<std::vector<State>>& eps,
                     std::vector<char>& mark) {
    std::fill(mark.begin(), mark.end(), 0);
    std::deque<State> queue(states.begin(), states.end());
    for (State s : states)
        mark[s] = 1;
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        for (State t : eps[s])
            if (!mark[t]) {
                mark[t] = 1;
                queue.push_back(t);
            }
    }
    states.clear();
    for (State s = 0; s < mark.size(); ++s)
        if (mark[s])
            states.push_back(s);
}

}  // namespace

bool Nfa::accepts(const Word& w) const {
    detail::require_same_alphabet(alphabet, w.alphabet, "Nfa::accepts");
    auto eps = eps_adjacency(*this);
    std::vector<char> mark(num_states);
    std::vector<State> cur = initials;
    close_under_eps(cur, eps, mark);
    for (auto sym : w.syms) {
        std::set<State> next;
        for (const auto& t : transitions)
            if (t.sym == static_cast<int>(sym) &&
                std::binary_search(cur.begin(), cur.end(), t.src))
                next.insert(t.dst);
        cur.assign(next.begin(), next.end());
        close_under_eps(cur, eps, mark);
        if (cur.empty())
            return false;
    }
    for (State s : cur)
        for (State f : finals)
            if (s == f)
                return true;
    return false;
}

State Dfa::run(State q, const Word& w) const {
    for (auto sym : w.syms)
        q = step(q, sym);
    return q;
}

bool Dfa::accepts(const Word& w) const {
    detail::require_same_alphabet(alphabet, w.alphabet, "Dfa::accepts");
    return finals[run(initial, w)];
}

std::size_t Cfg::max_rhs_len() const {
    std::size_t m = 0;
    for (const auto& [lhs, rhs] : productions)
        m = std::max(m, rhs.size());
    return m;
}

Dfa determinize(const Nfa& n) {
    const unsigned k = n.alphabet.size();
    auto eps = eps_adjacency(n);
    std::vector<char> mark(n.num_states);

    // Letter-indexed adjacency for the subset construction.
    std::vector<std::vector<std::pair<State, State>>> by_sym(k);
    for (const auto& t : n.transitions)
        if (t.sym != Nfa::EPSILON)
            by_sym[t.sym].push_back({t.src, t.dst});
    for (auto& v : by_sym)
        std::sort(v.begin(), v.end());

    std::vector<State> start = n.initials;
    std::sort(start.begin(), start.end());
    start.erase(std::unique(start.begin(), start.end()), start.end());
    if (n.num_states > 0)
        close_under_eps(start, eps, mark);

    Dfa d(n.alphabet);
    std::map<std::vector<State>, State> ids;
    std::vector<std::vector<State>> sets;
    auto intern = [&](std::vector<State> s) {
        auto [it, inserted] = ids.try_emplace(std::move(s), static_cast<State>(sets.size()));
        if (inserted) {
            sets.push_back(it->first);
            d.num_states++;
            d.delta.resize(d.num_states * k, 0);
            d.finals.push_back(false);
        }
        return it->second;
    };

    d.initial = intern(start);
    for (State q = 0; q < d.num_states; ++q) {
        const std::vector<State> cur = sets[q];  // copy: sets grows below
        for (State s : cur)
            for (State f : n.finals)
                if (s == f)
                    d.finals[q] = true;
        for (unsigned c = 0; c < k; ++c) {
            std::set<State> next;
            for (State s : cur) {
                auto lo = std::lower_bound(by_sym[c].begin(), by_sym[c].end(),
                                           std::make_pair(s, State(0)));
                for (; lo != by_sym[c].end() && lo->first == s; ++lo)
                    next.insert(lo->second);
            }
            std::vector<State> nx(next.begin(), next.end());
            if (n.num_states > 0)
                close_under_eps(nx, eps, mark);
            State t = intern(std::move(nx));
            d.delta[q * k + c] = t;
        }
    }
    return d;
}

namespace {

Dfa restrict_to_reachable(const Dfa& d) {
    const unsigned k = d.alphabet.size();
    std::vector<State> order;
    std::vector<State> remap(d.num_states, UINT32_MAX);
    std::deque<State> queue{d.initial};
    remap[d.initial] = 0;
    order.push_back(d.initial);
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        for (unsigned c = 0; c < k; ++c) {
            State t = d.step(q, c);
            if (remap[t] == UINT32_MAX) {
                remap[t] = static_cast<State>(order.size());
                order.push_back(t);
                queue.push_back(t);
            }
        }
    }
    Dfa out(d.alphabet);
    out.num_states = static_cast<State>(order.size());
    out.delta.resize(out.num_states * k);
    out.finals.resize(out.num_states);
    out.initial = 0;
    for (State q = 0; q < out.num_states; ++q) {
        out.finals[q] = d.finals[order[q]];
        for (unsigned c = 0; c < k; ++c)
            out.delta[q * k + c] = remap[d.step(order[q], c)];
    }
    return out;
}

// Hopcroft partition refinement on a reachable complete DFA.
std::vector<State> hopcroft_classes(const Dfa& d, State& num_classes) {
    const unsigned k = d.alphabet.size();
    const State n = d.num_states;

    std::vector<std::vector<std::vector<State>>> pre(k);  // pre[c][q] = sources
    for (unsigned c = 0; c < k; ++c)
        pre[c].resize(n);
    for (State q = 0; q < n; ++q)
        for (unsigned c = 0; c < k; ++c)
            pre[c][d.step(q, c)].push_back(q);

    std::vector<State> block_of(n, 0);
    std::vector<std::vector<State>> blocks;
    {
        std::vector<State> fin, nonfin;
        for (State q = 0; q < n; ++q)
            (d.finals[q] ? fin : nonfin).push_back(q);
        if (!fin.empty()) {
            for (State q : fin)
                block_of[q] = static_cast<State>(blocks.size());
            blocks.push_back(std::move(fin));
        }
        if (!nonfin.empty()) {
            for (State q : nonfin)
                block_of[q] = static_cast<State>(blocks.size());
            blocks.push_back(std::move(nonfin));
        }
    }

    std::set<std::pair<State, unsigned>> work;
    for (State b = 0; b < blocks.size(); ++b)
        for (unsigned c = 0; c < k; ++c)
            work.insert({b, c});

    while (!work.empty()) {
        auto [splitter, c] = *work.begin();
        work.erase(work.begin());

        // States with a c-transition into the splitter block, bucketed
        // by their current block.
        std::map<State, std::vector<State>> movers;
        for (State q : blocks[splitter])
            for (State p : pre[c][q])
                movers[block_of[p]].push_back(p);

        for (auto& [b, qs] : movers) {
            if (qs.size() == blocks[b].size())
                continue;  // whole block moves: no split
            State nb = static_cast<State>(blocks.size());
            std::vector<State> moved;
            std::sort(qs.begin(), qs.end());
            std::vector<State> stay;
            for (State q : blocks[b]) {
                if (std::binary_search(qs.begin(), qs.end(), q))
                    moved.push_back(q);
                else
                    stay.push_back(q);
            }
            blocks[b] = std::move(stay);
            for (State q : moved)
                block_of[q] = nb;
            blocks.push_back(std::move(moved));
            for (unsigned cc = 0; cc < k; ++cc) {
                if (work.count({b, cc})) {
                    work.insert({nb, cc});
                } else {
                    // Split by the smaller half.
                    if (blocks[nb].size() < blocks[b].size())
                        work.insert({nb, cc});
                    else
                        work.insert({b, cc});
                }
            }
        }
    }
    num_classes = static_cast<State>(blocks.size());
    return block_of;
}

Dfa bfs_renumber(const Dfa& d) {
    const unsigned k = d.alphabet.size();
    std::vector<State> remap(d.num_states, UINT32_MAX);
    std::vector<State> order;
    std::deque<State> queue{d.initial};
    remap[d.initial] = 0;
    order.push_back(d.initial);
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        for (unsigned c = 0; c < k; ++c) {
            State t = d.step(q, c);
            if (remap[t] == UINT32_MAX) {
                remap[t] = static_cast<State>(order.size());
                order.push_back(t);
                queue.push_back(t);
            }
        }
    }
    Dfa out(d.alphabet);
    out.num_states = static_cast<State>(order.size());
    out.delta.resize(out.num_states * k);
    out.finals.resize(out.num_states);
    out.initial = 0;
    for (State q = 0; q < out.num_states; ++q) {
        out.finals[q] = d.finals[order[q]];
        for (unsigned c = 0; c < k; ++c)
            out.delta[q * k + c] = remap[d.step(order[q], c)];
    }
    return out;
}

}  // namespace

Dfa minimize(const Dfa& d) {
    Dfa r = restrict_to_reachable(d);
    State num_classes = 0;
    auto block_of = hopcroft_classes(r, num_classes);
    const unsigned k = r.alphabet.size();
    Dfa m(r.alphabet);
    m.num_states = num_classes;
    m.delta.resize(num_classes * k);
    m.finals.assign(num_classes, false);
    for (State q = 0; q < r.num_states; ++q) {
        State b = block_of[q];
        m.finals[b] = r.finals[q];
        for (unsigned c = 0; c < k; ++c)
            m.delta[b * k + c] = block_of[r.step(q, c)];
    }
    m.initial = block_of[r.initial];
    Dfa out = bfs_renumber(m);
    out.canonical = true;
    return out;
}

Dfa canonical_dfa(const Nfa& n) {
    return minimize(determinize(n));
}

Nfa dfa_to_nfa(const Dfa& d) {
    Nfa n(d.alphabet);
    n.num_states = d.num_states;
    n.initials = {d.initial};
    for (State q = 0; q < d.num_states; ++q) {
        if (d.finals[q])
            n.finals.push_back(q);
        for (unsigned c = 0; c < d.alphabet.size(); ++c)
            n.add_transition(q, static_cast<int>(c), d.step(q, c));
    }
    return n;
}

Dfa complement(const Dfa& d) {
    Dfa c = d;
    for (std::size_t i = 0; i < c.finals.size(); ++i)
        c.finals[i] = !c.finals[i];
    return minimize(c);
}

namespace {

template <typename Combine>
Dfa product(const Dfa& a, const Dfa& b, Combine accept, const char* op) {
    detail::require_same_alphabet(a.alphabet, b.alphabet, op);
    const unsigned k = a.alphabet.size();
    Dfa d(a.alphabet);
    std::map<std::pair<State, State>, State> ids;
    std::vector<std::pair<State, State>> pairs;
    auto intern = [&](State x, State y) {
        auto [it, inserted] = ids.try_emplace({x, y}, static_cast<State>(pairs.size()));
        if (inserted) {
            pairs.push_back({x, y});
            d.num_states++;
            d.delta.resize(d.num_states * k, 0);
            d.finals.push_back(accept(a.finals[x], b.finals[y]));
        }
        return it->second;
    };
    d.initial = intern(a.initial, b.initial);
    for (State q = 0; q < d.num_states; ++q) {
        auto [x, y] = pairs[q];
        for (unsigned c = 0; c < k; ++c)
            d.delta[q * k + c] = intern(a.step(x, c), b.step(y, c));
    }
    return minimize(d);
}

}  // namespace

Dfa intersect(const Dfa& a, const Dfa& b) {
    return product(a, b, [](bool x, bool y) { return x && y; }, "intersect");
}

Dfa union_dfa(const Dfa& a, const Dfa& b) {
    return product(a, b, [](bool x, bool y) { return x || y; }, "union");
}

Dfa difference(const Dfa& a, const Dfa& b) {
    return product(a, b, [](bool x, bool y) { return x && !y; }, "difference");
}

bool is_empty(const Dfa& d) {
    const unsigned k = d.alphabet.size();
    std::vector<char> seen(d.num_states, 0);
    std::deque<State> queue{d.initial};
    seen[d.initial] = 1;
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        if (d.finals[q])
            return false;
        for (unsigned c = 0; c < k; ++c) {
            State t = d.step(q, c);
            if (!seen[t]) {
                seen[t] = 1;
                queue.push_back(t);
            }
        }
    }
    return true;
}

bool is_universal(const Dfa& d) {
    return is_empty(complement(d));
}

bool includes(const Dfa& big, const Dfa& small) {
    return is_empty(difference(small, big));
}

bool same_language(const Dfa& a, const Dfa& b) {
    detail::require_same_alphabet(a.alphabet, b.alphabet, "same_language");
    Dfa ca = a.canonical ? a : minimize(a);
    Dfa cb = b.canonical ? b : minimize(b);
    return ca.num_states == cb.num_states && ca.finals == cb.finals && ca.delta == cb.delta;
}

std::optional<Word> shortest_word(const Dfa& d) {
    const unsigned k = d.alphabet.size();
    std::vector<int> pred_state(d.num_states, -1);
    std::vector<std::uint8_t> pred_sym(d.num_states, 0);
    std::vector<char> seen(d.num_states, 0);
    std::deque<State> queue{d.initial};
    seen[d.initial] = 1;
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        if (d.finals[q]) {
            std::vector<std::uint8_t> rev;
            for (State s = q; s != d.initial; s = static_cast<State>(pred_state[s]))
                rev.push_back(pred_sym[s]);
            std::reverse(rev.begin(), rev.end());
            return Word(d.alphabet, std::move(rev));
        }
        for (unsigned c = 0; c < k; ++c) {
            State t = d.step(q, c);
            if (!seen[t]) {
                seen[t] = 1;
                pred_state[t] = static_cast<int>(q);
                pred_sym[t] = static_cast<std::uint8_t>(c);
                queue.push_back(t);
            }
        }
    }
    return std::nullopt;
}

std::optional<Word> shortest_separator(const Dfa& a, const Dfa& b) {
    detail::require_same_alphabet(a.alphabet, b.alphabet, "shortest_separator");
    const unsigned k = a.alphabet.size();
    std::map<std::pair<State, State>, std::pair<std::pair<State, State>, std::uint8_t>> pred;
    std::set<std::pair<State, State>> seen;
    std::deque<std::pair<State, State>> queue{{a.initial, b.initial}};
    seen.insert({a.initial, b.initial});
    while (!queue.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        if (a.finals[cur.first] != b.finals[cur.second]) {
            std::vector<std::uint8_t> rev;
            auto s = cur;
            while (s != std::make_pair(a.initial, b.initial)) {
                auto [p, sym] = pred.at(s);
                rev.push_back(sym);
                s = p;
            }
            std::reverse(rev.begin(), rev.end());
            return Word(a.alphabet, std::move(rev));
        }
        for (unsigned c = 0; c < k; ++c) {
            auto nxt = std::make_pair(a.step(cur.first, c), b.step(cur.second, c));
            if (seen.insert(nxt).second) {
                pred[nxt] = {cur, static_cast<std::uint8_t>(c)};
                queue.push_back(nxt);
            }
        }
    }
    return std::nullopt;
}

Dfa empty_dfa(const Alphabet& a) {
    Dfa d(a);
    d.num_states = 1;
    d.delta.assign(a.size(), 0);
    d.finals = {false};
    d.initial = 0;
    d.canonical = true;
    return d;
}

Dfa universal_dfa(const Alphabet& a) {
    Dfa d = empty_dfa(a);
    d.finals = {true};
    return d;
}

Dfa word_dfa(const Word& u) {
    const unsigned k = u.alphabet.size();
    Dfa d(u.alphabet);
    const State sink = static_cast<State>(u.size() + 1);
    d.num_states = sink + 1;
    d.delta.assign(d.num_states * k, sink);
    d.finals.assign(d.num_states, false);
    d.finals[u.size()] = true;
    for (std::size_t i = 0; i < u.size(); ++i)
        d.delta[i * k + u.syms[i]] = static_cast<State>(i + 1);
    d.initial = 0;
    return minimize(d);
}

Dfa word_set_dfa(const Alphabet& a, const std::vector<Word>& words) {
    Nfa n(a);
    State root = n.add_state();
    n.initials = {root};
    for (const auto& w : words) {
        detail::require_same_alphabet(a, w.alphabet, "word_set_dfa");
        State cur = root;
        for (auto sym : w.syms) {
            State nxt = n.add_state();
            n.add_transition(cur, static_cast<int>(sym), nxt);
            cur = nxt;
        }
        n.finals.push_back(cur);
    }
    return canonical_dfa(n);
}

Dfa down_word_dfa(const Word& u) {
    const unsigned k = u.alphabet.size();
    const std::size_t n = u.size();
    Dfa d(u.alphabet);
    const State sink = static_cast<State>(n + 1);
    d.num_states = sink + 1;
    d.delta.assign(d.num_states * k, sink);
    d.finals.assign(d.num_states, true);
    d.finals[sink] = false;
    // State p remembers how much of u the greedy embedding consumed.
    std::vector<std::size_t> next((n + 1) * k, n);
    for (std::size_t p = n; p-- > 0;) {
        for (unsigned c = 0; c < k; ++c)
            next[p * k + c] = next[(p + 1) * k + c];
        next[p * k + u.syms[p]] = p;
    }
    for (std::size_t p = 0; p <= n; ++p)
        for (unsigned c = 0; c < k; ++c) {
            std::size_t np = next[p * k + c];
            d.delta[p * k + c] = (np >= n) ? sink : static_cast<State>(np + 1);
        }
    d.initial = 0;
    return minimize(d);
}

Dfa up_word_dfa(const Word& u) {
    const unsigned k = u.alphabet.size();
    const std::size_t n = u.size();
    Dfa d(u.alphabet);
    d.num_states = static_cast<State>(n + 1);
    d.delta.resize(d.num_states * k);
    d.finals.assign(d.num_states, false);
    d.finals[n] = true;
    for (std::size_t p = 0; p <= n; ++p)
        for (unsigned c = 0; c < k; ++c) {
            if (p < n && u.syms[p] == c)
                d.delta[p * k + c] = static_cast<State>(p + 1);
            else
                d.delta[p * k + c] = static_cast<State>(p);
        }
    d.initial = 0;
    return minimize(d);
}

unsigned nfa_depth(const Nfa& n, const Caps& caps) {
    // Trim to states on some initial -> final path.
    std::vector<std::vector<std::pair<int, State>>> adj(n.num_states);
    std::vector<std::vector<State>> radj(n.num_states);
    for (const auto& t : n.transitions) {
        adj[t.src].push_back({t.sym, t.dst});
        radj[t.dst].push_back(t.src);
    }
    std::vector<char> fwd(n.num_states, 0), bwd(n.num_states, 0);
    std::deque<State> queue;
    for (State s : n.initials)
        if (!fwd[s]) {
            fwd[s] = 1;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        for (auto [sym, t] : adj[q])
            if (!fwd[t]) {
                fwd[t] = 1;
                queue.push_back(t);
            }
    }
    for (State s : n.finals)
        if (!bwd[s]) {
            bwd[s] = 1;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        for (State t : radj[q])
            if (!bwd[t]) {
                bwd[t] = 1;
                queue.push_back(t);
            }
    }
    std::vector<char> useful(n.num_states);
    unsigned useful_count = 0;
    bool any_final_reachable = false;
    for (State q = 0; q < n.num_states; ++q) {
        useful[q] = fwd[q] && bwd[q];
        useful_count += useful[q];
    }
    for (State f : n.finals)
        if (fwd[f])
            any_final_reachable = true;
    if (!any_final_reachable)
        throw precondition_error("nfa_depth: no final state is reachable (empty language)");
    if (useful_count > caps.max_depth_states)
        throw cap_exceeded("nfa_depth: " + std::to_string(useful_count) +
                           " useful states exceed cap " + std::to_string(caps.max_depth_states));

    unsigned best = 0;
    std::vector<char> on_path(n.num_states, 0);
    std::vector<char> is_final(n.num_states, 0);
    for (State f : n.finals)
        is_final[f] = 1;
    auto dfs = [&](auto&& self, State q, unsigned letters) -> void {
        if (is_final[q])
            best = std::max(best, letters);
        on_path[q] = 1;
        for (auto [sym, t] : adj[q])
            if (useful[t] && !on_path[t])
                self(self, t, letters + (sym == Nfa::EPSILON ? 0u : 1u));
        on_path[q] = 0;
    };
    std::set<State> starts(n.initials.begin(), n.initials.end());
    for (State s : starts)
        if (useful[s])
            dfs(dfs, s, 0);
    return best;
}

std::optional<unsigned> acyclic_search_bound(const Dfa& d) {
    const unsigned k = d.alphabet.size();
    // Kahn's algorithm on the self-loop-free transition graph; a cycle
    // means no bound exists.
    std::vector<std::set<State>> succ(d.num_states);
    for (State q = 0; q < d.num_states; ++q)
        for (unsigned c = 0; c < k; ++c) {
            State t = d.step(q, c);
            if (t != q)
                succ[q].insert(t);
        }
    std::vector<unsigned> indeg(d.num_states, 0);
    for (State q = 0; q < d.num_states; ++q)
        for (State t : succ[q])
            indeg[t]++;
    std::deque<State> queue;
    std::vector<State> topo;
    for (State q = 0; q < d.num_states; ++q)
        if (indeg[q] == 0)
            queue.push_back(q);
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        topo.push_back(q);
        for (State t : succ[q])
            if (--indeg[t] == 0)
                queue.push_back(t);
    }
    if (topo.size() != d.num_states)
        return std::nullopt;
    std::vector<int> dist(d.num_states, -1);
    dist[d.initial] = 0;
    for (State q : topo) {
        if (dist[q] < 0)
            continue;
        for (State t : succ[q])
            dist[t] = std::max(dist[t], dist[q] + 1);
    }
    int best = 0;
    for (State q = 0; q < d.num_states; ++q)
        best = std::max(best, dist[q]);
    return static_cast<unsigned>(best);
}

unsigned productive_state_count(const Dfa& d) {
    const unsigned k = d.alphabet.size();
    std::vector<std::vector<State>> radj(d.num_states);
    for (State q = 0; q < d.num_states; ++q)
        for (unsigned c = 0; c < k; ++c)
            radj[d.step(q, c)].push_back(q);
    std::vector<char> coreach(d.num_states, 0);
    std::deque<State> queue;
    for (State q = 0; q < d.num_states; ++q)
        if (d.finals[q]) {
            coreach[q] = 1;
            queue.push_back(q);
        }
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        for (State p : radj[q])
            if (!coreach[p]) {
                coreach[p] = 1;
                queue.push_back(p);
            }
    }
    unsigned count = 0;
    for (State q = 0; q < d.num_states; ++q)
        count += coreach[q];
    return count;
}

// -- regular expression parsing -------------------------------------------

namespace {

// Thompson-style fragments over a growing NFA.
struct RegexParser {
    const Alphabet& alphabet;
    std::string_view text;
    std::size_t pos = 0;
    Nfa nfa;

    explicit RegexParser(const Alphabet& a, std::string_view t) : alphabet(a), text(t), nfa(a) {}

    struct Frag {
        State in, out;
    };

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t'))
            ++pos;
    }
    bool peek_is(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }
    bool atom_ahead() {
        skip_ws();
        if (pos >= text.size())
            return false;
        char c = text[pos];
        return c == '(' || c == '_' || c == '~' || alphabet.index(c).has_value();
    }

    Frag parse_union() {
        Frag f = parse_concat();
        while (peek_is('+')) {
            ++pos;
            Frag g = parse_concat();
            State in = nfa.add_state(), out = nfa.add_state();
            nfa.add_transition(in, Nfa::EPSILON, f.in);
            nfa.add_transition(in, Nfa::EPSILON, g.in);
            nfa.add_transition(f.out, Nfa::EPSILON, out);
            nfa.add_transition(g.out, Nfa::EPSILON, out);
            f = {in, out};
        }
        return f;
    }

    Frag parse_concat() {
        Frag f = parse_star();
        while (atom_ahead()) {
            Frag g = parse_star();
            nfa.add_transition(f.out, Nfa::EPSILON, g.in);
            f = {f.in, g.out};
        }
        return f;
    }

    Frag parse_star() {
        Frag f = parse_atom();
        while (peek_is('*')) {
            ++pos;
            State in = nfa.add_state(), out = nfa.add_state();
            nfa.add_transition(in, Nfa::EPSILON, f.in);
            nfa.add_transition(in, Nfa::EPSILON, out);
            nfa.add_transition(f.out, Nfa::EPSILON, f.in);
            nfa.add_transition(f.out, Nfa::EPSILON, out);
            f = {in, out};
        }
        return f;
    }

    Frag parse_atom() {
        skip_ws();
        if (pos >= text.size())
            throw parse_error("regex: unexpected end of input");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            Frag f = parse_union();
            if (!peek_is(')'))
                throw parse_error("regex: missing ')'");
            ++pos;
            return f;
        }
        if (c == '_') {
            ++pos;
            State in = nfa.add_state(), out = nfa.add_state();
            nfa.add_transition(in, Nfa::EPSILON, out);
            return {in, out};
        }
        if (c == '~') {
            ++pos;
            State in = nfa.add_state(), out = nfa.add_state();
            return {in, out};  // no path: empty language
        }
        auto idx = alphabet.index(c);
        if (!idx)
            throw parse_error(std::string("regex: unexpected character '") + c + "'");
        ++pos;
        State in = nfa.add_state(), out = nfa.add_state();
        nfa.add_transition(in, static_cast<int>(*idx), out);
        return {in, out};
    }
};

}  // namespace

Nfa regex_to_nfa(const Alphabet& a, std::string_view expr) {
    RegexParser p(a, expr);
    auto frag = p.parse_union();
    p.skip_ws();
    if (p.pos != expr.size())
        throw parse_error("regex: trailing input at position " + std::to_string(p.pos));
    p.nfa.initials = {frag.in};
    p.nfa.finals = {frag.out};
    return p.nfa;
}

}  // namespace ptk
