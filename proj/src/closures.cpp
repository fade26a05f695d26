#include "ptk/closures.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "ptk/simon.hpp"

namespace ptk {

Dfa up_closure(const Nfa& n) {
    Nfa m = n;
    for (State q = 0; q < m.num_states; ++q)
        for (unsigned c = 0; c < m.alphabet.size(); ++c)
            m.add_transition(q, static_cast<int>(c), q);
    return canonical_dfa(m);
}

Dfa down_closure(const Nfa& n) {
    Nfa m = n;
    for (const auto& t : n.transitions)
        if (t.sym != Nfa::EPSILON)
            m.add_transition(t.src, Nfa::EPSILON, t.dst);
    return canonical_dfa(m);
}

namespace {

// Two copies of the automaton; crossing to the second copy consumes
// one inserted (resp. skipped) letter, and only the second copy
// accepts.
Nfa one_edit_layer(const Nfa& n, bool insertion) {
    Nfa m(n.alphabet);
    m.num_states = 2 * n.num_states;
    auto lo = [&](State q) { return q; };
    auto hi = [&](State q) { return q + n.num_states; };
    for (const auto& t : n.transitions) {
        m.add_transition(lo(t.src), t.sym, lo(t.dst));
        m.add_transition(hi(t.src), t.sym, hi(t.dst));
    }
    if (insertion) {
        // Read a letter the base automaton does not consume.
        for (State q = 0; q < n.num_states; ++q)
            for (unsigned c = 0; c < n.alphabet.size(); ++c) {
                m.add_transition(lo(q), static_cast<int>(c), hi(q));
                m.add_transition(hi(q), static_cast<int>(c), hi(q));
            }
    } else {
        // Skip one letter the base automaton consumes.
        for (const auto& t : n.transitions)
            if (t.sym != Nfa::EPSILON) {
                m.add_transition(lo(t.src), Nfa::EPSILON, hi(t.dst));
                m.add_transition(hi(t.src), Nfa::EPSILON, hi(t.dst));
            }
    }
    for (State s : n.initials)
        m.initials.push_back(lo(s));
    for (State s : n.finals)
        m.finals.push_back(hi(s));
    return m;
}

}  // namespace

Dfa strict_up(const Nfa& n) {
    return canonical_dfa(one_edit_layer(n, /*insertion=*/true));
}

Dfa strict_down(const Nfa& n) {
    return canonical_dfa(one_edit_layer(n, /*insertion=*/false));
}

Dfa min_lang(const Nfa& n) {
    return difference(canonical_dfa(n), strict_up(n));
}

namespace {

// Epsilon elimination: same states, letter transitions only.
Nfa eliminate_epsilon(const Nfa& n) {
    std::vector<std::vector<State>> eps(n.num_states);
    for (const auto& t : n.transitions)
        if (t.sym == Nfa::EPSILON)
            eps[t.src].push_back(t.dst);
    auto closure_of = [&](State s) {
        std::vector<char> mark(n.num_states, 0);
        std::deque<State> queue{s};
        mark[s] = 1;
        while (!queue.empty()) {
            State q = queue.front();
            queue.pop_front();
            for (State t : eps[q])
                if (!mark[t]) {
                    mark[t] = 1;
                    queue.push_back(t);
                }
        }
        return mark;
    };

    Nfa m(n.alphabet);
    m.num_states = n.num_states;
    m.initials = n.initials;
    std::vector<char> is_final(n.num_states, 0);
    for (State f : n.finals)
        is_final[f] = 1;
    std::set<Nfa::Trans> trans;
    for (State q = 0; q < n.num_states; ++q) {
        auto cl = closure_of(q);
        bool fin = false;
        for (State r = 0; r < n.num_states; ++r)
            if (cl[r]) {
                fin = fin || is_final[r];
                for (const auto& t : n.transitions)
                    if (t.src == r && t.sym != Nfa::EPSILON)
                        trans.insert({q, t.sym, t.dst});
            }
        if (fin)
            m.finals.push_back(q);
    }
    m.transitions.assign(trans.begin(), trans.end());
    return m;
}

}  // namespace

std::vector<Word> min_words(const Nfa& n, const Caps& caps) {
    Nfa m = eliminate_epsilon(n);
    std::vector<std::vector<std::pair<std::uint8_t, State>>> adj(m.num_states);
    for (const auto& t : m.transitions)
        adj[t.src].push_back({static_cast<std::uint8_t>(t.sym), t.dst});
    for (auto& v : adj)
        std::sort(v.begin(), v.end());
    std::vector<char> is_final(m.num_states, 0);
    for (State f : m.finals)
        is_final[f] = 1;

    std::set<std::vector<std::uint8_t>> collected;
    std::vector<char> on_path(m.num_states, 0);
    std::vector<std::uint8_t> cur;
    std::size_t steps = 0;
    auto dfs = [&](auto&& self, State q) -> void {
        if (++steps > caps.max_path_enum)
            throw cap_exceeded("min_words: more than " + std::to_string(caps.max_path_enum) +
                               " acyclic path steps");
        if (is_final[q])
            collected.insert(cur);
        on_path[q] = 1;
        for (auto [sym, t] : adj[q])
            if (!on_path[t]) {
                cur.push_back(sym);
                self(self, t);
                cur.pop_back();
            }
        on_path[q] = 0;
    };
    std::set<State> starts(m.initials.begin(), m.initials.end());
    for (State s : starts)
        dfs(dfs, s);

    std::vector<Word> words;
    words.reserve(collected.size());
    for (const auto& s : collected)
        words.emplace_back(m.alphabet, s);
    // Minimal members of the collected set are exactly the minimal
    // members of the language: every minimal member is accepted along
    // some acyclic path.
    std::vector<Word> out;
    for (const auto& w : words) {
        bool minimal = true;
        for (const auto& v : words)
            if (compare(v, w) == WordRelation::strictly_below) {
                minimal = false;
                break;
            }
        if (minimal)
            out.push_back(w);
    }
    std::sort(out.begin(), out.end(), ShortlexLess{});
    return out;
}

std::vector<Word> cfg_nonrepeating_words(const Cfg& g, const Caps& caps) {
    if (g.nonterminals.size() > 64)
        throw cap_exceeded("cfg_nonrepeating_words: more than 64 nonterminals");
    using Mask = std::uint64_t;
    using WordSet = std::set<std::vector<std::uint8_t>>;
    std::map<std::pair<std::uint32_t, Mask>, WordSet> memo;
    std::size_t budget = caps.max_enum_words;

    auto derive = [&](auto&& self, std::uint32_t nt, Mask forbidden) -> const WordSet& {
        auto key = std::make_pair(nt, forbidden);
        auto it = memo.find(key);
        if (it != memo.end())
            return it->second;
        WordSet result;
        for (const auto& [lhs, rhs] : g.productions) {
            if (lhs != nt)
                continue;
            WordSet partial{{}};
            bool dead = false;
            for (const auto& sym : rhs) {
                WordSet next;
                if (sym.terminal) {
                    for (auto w : partial) {
                        w.push_back(static_cast<std::uint8_t>(sym.id));
                        next.insert(std::move(w));
                    }
                } else {
                    if (forbidden & (Mask(1) << sym.id)) {
                        dead = true;  // nonterminal would repeat on this branch
                        break;
                    }
                    const WordSet& sub = self(self, sym.id, forbidden | (Mask(1) << sym.id));
                    for (const auto& w : partial)
                        for (const auto& s : sub) {
                            std::vector<std::uint8_t> cat(w);
                            cat.insert(cat.end(), s.begin(), s.end());
                            next.insert(std::move(cat));
                            if (next.size() > budget)
                                throw cap_exceeded(
                                    "cfg_nonrepeating_words: derivation set exceeded " +
                                    std::to_string(budget) + " words");
                        }
                }
                partial = std::move(next);
                if (partial.size() > budget)
                    throw cap_exceeded("cfg_nonrepeating_words: derivation set exceeded " +
                                       std::to_string(budget) + " words");
            }
            if (!dead)
                result.insert(partial.begin(), partial.end());
        }
        return memo.emplace(key, std::move(result)).first->second;
    };

    const WordSet& s = derive(derive, g.start, Mask(1) << g.start);
    std::vector<Word> out;
    out.reserve(s.size());
    for (const auto& w : s)
        out.emplace_back(g.alphabet, w);
    std::sort(out.begin(), out.end(), ShortlexLess{});
    return out;
}

Dfa up_closure_cfg(const Cfg& g, const Caps& caps) {
    auto words = cfg_nonrepeating_words(g, caps);
    // Only minimal words matter for the upward closure.
    std::vector<Word> minimal;
    for (const auto& w : words) {
        bool keep = true;
        for (const auto& v : words)
            if (compare(v, w) == WordRelation::strictly_below) {
                keep = false;
                break;
            }
        if (keep)
            minimal.push_back(w);
    }
    Nfa n(g.alphabet);
    State root = n.add_state();
    n.initials = {root};
    for (const auto& w : minimal) {
        State cur = root;
        for (auto sym : w.syms) {
            State nxt = n.add_state();
            n.add_transition(cur, static_cast<int>(sym), nxt);
            cur = nxt;
        }
        n.finals.push_back(cur);
    }
    return up_closure(n);
}

Morphism::Morphism(Alphabet src, Alphabet tgt, std::vector<Word> img)
    : source(std::move(src)), target(std::move(tgt)), image(std::move(img)) {
    if (image.size() != source.size())
        throw precondition_error("Morphism: need exactly one image word per source letter");
    for (const auto& w : image)
        detail::require_same_alphabet(target, w.alphabet, "Morphism");
}

Dfa inverse_morphism(const Dfa& d, const Morphism& rho) {
    detail::require_same_alphabet(d.alphabet, rho.target, "inverse_morphism");
    const unsigned k = rho.source.size();
    Dfa out(rho.source);
    out.num_states = d.num_states;
    out.delta.resize(d.num_states * k);
    out.finals = d.finals;
    out.initial = d.initial;
    for (State q = 0; q < d.num_states; ++q)
        for (unsigned c = 0; c < k; ++c)
            out.delta[q * k + c] = d.run(q, rho.image[c]);
    return minimize(out);
}

std::string DProduct::str() const {
    if (factors.empty())
        return "_";
    std::ostringstream out;
    bool first = true;
    for (const auto& f : factors) {
        if (!first)
            out << ' ';
        first = false;
        if (f.is_star) {
            out << '[';
            for (unsigned c = 0; c < alphabet.size(); ++c)
                if (f.mask & (1u << c))
                    out << alphabet.letter(c);
            out << "]*";
        } else {
            out << alphabet.letter(f.letter);
        }
    }
    return out.str();
}

DProduct parse_dproduct(const Alphabet& a, std::string_view text) {
    DProduct p(a);
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        if (tok == "_") {
            if (!p.factors.empty())
                throw parse_error("dproduct: '_' is only valid alone");
            continue;
        }
        if (tok.front() == '[') {
            if (tok.size() < 4 || tok.substr(tok.size() - 2) != "]*")
                throw parse_error("dproduct: malformed star factor '" + tok + "'");
            std::uint32_t mask = 0;
            for (char c : tok.substr(1, tok.size() - 3)) {
                auto idx = a.index(c);
                if (!idx)
                    throw parse_error(std::string("dproduct: letter '") + c +
                                      "' not in alphabet");
                mask |= 1u << *idx;
            }
            if (mask == 0)
                throw parse_error("dproduct: empty star factor");
            p.factors.push_back({true, mask, 0});
        } else if (tok.size() == 1 && a.index(tok[0])) {
            p.factors.push_back({false, 0, static_cast<std::uint8_t>(*a.index(tok[0]))});
        } else {
            throw parse_error("dproduct: unexpected token '" + tok + "'");
        }
    }
    return p;
}

Nfa dproduct_to_nfa(const DProduct& p) {
    Nfa n(p.alphabet);
    n.num_states = static_cast<State>(p.length() + 1);
    for (std::size_t i = 0; i < p.factors.size(); ++i) {
        const auto& f = p.factors[i];
        State src = static_cast<State>(i), dst = static_cast<State>(i + 1);
        if (f.is_star) {
            for (unsigned c = 0; c < p.alphabet.size(); ++c)
                if (f.mask & (1u << c))
                    n.add_transition(src, static_cast<int>(c), src);
            n.add_transition(src, Nfa::EPSILON, dst);
        } else {
            n.add_transition(src, static_cast<int>(f.letter), dst);
        }
    }
    n.initials = {0};
    n.finals = {static_cast<State>(p.length())};
    return n;
}

bool dproduct_member(const Word& u, const DProduct& p) {
    detail::require_same_alphabet(u.alphabet, p.alphabet, "dproduct_member");
    // Positions in u reachable after consuming a prefix of the product.
    std::vector<char> reach(u.size() + 1, 0);
    reach[0] = 1;
    for (const auto& f : p.factors) {
        std::vector<char> next(u.size() + 1, 0);
        if (f.is_star) {
            for (std::size_t pos = 0; pos <= u.size(); ++pos) {
                if (!reach[pos])
                    continue;
                next[pos] = 1;
                for (std::size_t q = pos; q < u.size() && (f.mask & (1u << u.syms[q])); ++q)
                    next[q + 1] = 1;
            }
        } else {
            for (std::size_t pos = 0; pos < u.size(); ++pos)
                if (reach[pos] && u.syms[pos] == f.letter)
                    next[pos + 1] = 1;
        }
        reach = std::move(next);
    }
    return reach[u.size()];
}

Dfa down_closure_dproduct(const DProduct& p) {
    Nfa n = dproduct_to_nfa(p);
    // Letter factors become optional.
    for (std::size_t i = 0; i < p.factors.size(); ++i)
        if (!p.factors[i].is_star)
            n.add_transition(static_cast<State>(i), Nfa::EPSILON, static_cast<State>(i + 1));
    return canonical_dfa(n);
}

std::vector<DProduct> dproduct_cover_nfa(const Nfa& nfa, const Caps& caps) {
    Nfa m = eliminate_epsilon(nfa);

    // reach[p][q]: q is reachable from p.
    std::vector<std::vector<char>> reach(m.num_states, std::vector<char>(m.num_states, 0));
    for (State p = 0; p < m.num_states; ++p) {
        std::deque<State> queue{p};
        reach[p][p] = 1;
        while (!queue.empty()) {
            State q = queue.front();
            queue.pop_front();
            for (const auto& t : m.transitions)
                if (t.src == q && !reach[p][t.dst]) {
                    reach[p][t.dst] = 1;
                    queue.push_back(t.dst);
                }
        }
    }
    // loop_mask[q]: letters occurring on some cycle through q.
    std::vector<std::uint32_t> loop_mask(m.num_states, 0);
    for (const auto& t : m.transitions)
        for (State q = 0; q < m.num_states; ++q)
            if (reach[q][t.src] && reach[t.dst][q])
                loop_mask[q] |= 1u << t.sym;

    std::vector<char> is_final(m.num_states, 0);
    for (State f : m.finals)
        is_final[f] = 1;
    std::vector<std::vector<std::pair<std::uint8_t, State>>> adj(m.num_states);
    for (const auto& t : m.transitions)
        adj[t.src].push_back({static_cast<std::uint8_t>(t.sym), t.dst});
    for (auto& v : adj)
        std::sort(v.begin(), v.end());

    std::set<std::string> seen;
    std::vector<DProduct> cover;
    auto emit = [&](const std::vector<std::pair<State, std::uint8_t>>& path, State last) {
        DProduct p(m.alphabet);
        auto push_star = [&](State q) {
            if (loop_mask[q])
                p.factors.push_back({true, loop_mask[q], 0});
        };
        for (const auto& [q, sym] : path) {
            push_star(q);
            p.factors.push_back({false, 0, sym});
        }
        push_star(last);
        if (seen.insert(p.str()).second)
            cover.push_back(std::move(p));
    };

    std::vector<char> on_path(m.num_states, 0);
    std::vector<std::pair<State, std::uint8_t>> path;
    std::size_t steps = 0;
    auto dfs = [&](auto&& self, State q) -> void {
        if (++steps > caps.max_path_enum)
            throw cap_exceeded("dproduct_cover_nfa: more than " +
                               std::to_string(caps.max_path_enum) + " path steps");
        if (is_final[q])
            emit(path, q);
        on_path[q] = 1;
        for (auto [sym, t] : adj[q])
            if (!on_path[t]) {
                path.push_back({q, sym});
                self(self, t);
                path.pop_back();
            }
        on_path[q] = 0;
    };
    std::set<State> starts(m.initials.begin(), m.initials.end());
    for (State s : starts)
        dfs(dfs, s);

    std::sort(cover.begin(), cover.end(),
              [](const DProduct& a, const DProduct& b) { return a.str() < b.str(); });
    return cover;
}

DProduct dproduct_for_word(const Word& u, const Dfa& d, unsigned n, const Caps& caps) {
    detail::require_same_alphabet(u.alphabet, d.alphabet, "dproduct_for_word");
    if (!d.accepts(u))
        throw precondition_error("dproduct_for_word: word is not in the language");
    if (!is_n_pt(d, n, caps))
        throw precondition_error("dproduct_for_word: language is not piecewise-testable "
                                 "at order " + std::to_string(n));

    const Word v = small_subword(u, n);

    // Greedy leftmost embedding of v into u splits u into segments of
    // letters that can all be pumped.
    std::vector<std::size_t> vpos;
    {
        std::size_t i = 0;
        for (std::size_t j = 0; j < u.size() && i < v.size(); ++j)
            if (u.syms[j] == v.syms[i]) {
                vpos.push_back(j);
                ++i;
            }
    }

    DProduct p(u.alphabet);
    std::size_t seg_begin = 0;
    for (std::size_t i = 0; i <= v.size(); ++i) {
        std::size_t seg_end = (i < v.size()) ? vpos[i] : u.size();
        // Widen: a letter sandwiched between two equal letters within
        // the segment joins every star factor in between, then merge
        // adjacent comparable factors to a fixed point.
        std::vector<std::uint32_t> masks;
        for (std::size_t j = seg_begin; j < seg_end; ++j) {
            std::uint32_t mask = 1u << u.syms[j];
            for (std::size_t j1 = seg_begin; j1 < j; ++j1)
                for (std::size_t j2 = j + 1; j2 < seg_end; ++j2)
                    if (u.syms[j1] == u.syms[j2])
                        mask |= 1u << u.syms[j1];
            masks.push_back(mask);
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t j = 0; j + 1 < masks.size(); ++j) {
                std::uint32_t a = masks[j], b = masks[j + 1];
                if ((a & b) == a || (a & b) == b) {
                    masks[j] = a | b;
                    masks.erase(masks.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                    changed = true;
                    break;
                }
            }
        }
        for (std::uint32_t mask : masks)
            p.factors.push_back({true, mask, 0});
        if (i < v.size()) {
            p.factors.push_back({false, 0, v.syms[i]});
            seg_begin = vpos[i] + 1;
        }
    }

    if (!dproduct_member(u, p))
        throw error("dproduct_for_word: constructed product misses the input word (bug)");
    Dfa pdfa = canonical_dfa(dproduct_to_nfa(p));
    if (!includes(d, pdfa))
        throw error("dproduct_for_word: constructed product leaves the language (bug)");
    return p;
}

std::pair<Word, Word> lower_bound_witness(const Word& u) {
    if (u.empty())
        throw precondition_error("lower_bound_witness: input word must be nonempty");
    const unsigned k = u.alphabet.size();
    Word v(u.alphabet);
    // Per position of u (except the last), append a permutation of the
    // alphabet ending with that letter.
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        for (unsigned c = 0; c < k; ++c)
            if (c != u.syms[i])
                v.syms.push_back(static_cast<std::uint8_t>(c));
        v.syms.push_back(u.syms[i]);
    }
    Word vp = v;
    vp.syms.push_back(u.syms.back());
    return {std::move(v), std::move(vp)};
}

}  // namespace ptk
