#include "ptk/automata_io.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

namespace ptk {

namespace {

std::string sym_name(const Alphabet& a, int sym) {
    if (sym == Nfa::EPSILON)
        return "eps";
    return std::string(1, a.letter(static_cast<unsigned>(sym)));
}

// Letters sort before eps so emitted transition blocks read naturally.
int sym_order(int sym) {
    return sym == Nfa::EPSILON ? 1 << 20 : sym;
}

std::string render(const Alphabet& alphabet, State num_states, std::vector<State> initials,
                   std::vector<State> finals, std::vector<Nfa::Trans> trans) {
    std::sort(initials.begin(), initials.end());
    initials.erase(std::unique(initials.begin(), initials.end()), initials.end());
    std::sort(finals.begin(), finals.end());
    finals.erase(std::unique(finals.begin(), finals.end()), finals.end());
    std::sort(trans.begin(), trans.end(), [](const Nfa::Trans& a, const Nfa::Trans& b) {
        return std::tuple(a.src, sym_order(a.sym), a.dst) <
               std::tuple(b.src, sym_order(b.sym), b.dst);
    });
    trans.erase(std::unique(trans.begin(), trans.end()), trans.end());

    std::ostringstream out;
    out << "alphabet: " << alphabet.letters() << "\n";
    out << "states: " << num_states << "\n";
    out << "initial:";
    for (State s : initials)
        out << ' ' << s;
    out << "\n";
    out << "final:";
    for (State s : finals)
        out << ' ' << s;
    out << "\n";
    for (const auto& t : trans)
        out << "trans: " << t.src << ' ' << sym_name(alphabet, t.sym) << ' ' << t.dst << "\n";
    return out.str();
}

}  // namespace

std::string to_text(const Nfa& n) {
    return render(n.alphabet, n.num_states, n.initials, n.finals, n.transitions);
}

std::string to_text(const Dfa& d) {
    std::vector<Nfa::Trans> trans;
    std::vector<State> finals;
    for (State q = 0; q < d.num_states; ++q) {
        if (d.finals[q])
            finals.push_back(q);
        for (unsigned c = 0; c < d.alphabet.size(); ++c)
            trans.push_back({q, static_cast<int>(c), d.step(q, c)});
    }
    return render(d.alphabet, d.num_states, {d.initial}, std::move(finals), std::move(trans));
}

Nfa nfa_from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::optional<Alphabet> alphabet;
    std::optional<State> num_states;
    std::vector<State> initials, finals;
    std::vector<std::tuple<State, std::string, State>> raw_trans;

    auto fail = [](const std::string& msg) -> void { throw parse_error("automaton: " + msg); };

    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // Strip comments and whitespace-only lines.
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key))
            continue;
        if (key == "alphabet:") {
            std::string letters;
            if (!(ls >> letters))
                fail("missing letters on line " + std::to_string(lineno));
            alphabet = Alphabet(letters);
        } else if (key == "states:") {
            State n;
            if (!(ls >> n))
                fail("bad state count on line " + std::to_string(lineno));
            num_states = n;
        } else if (key == "initial:") {
            State s;
            while (ls >> s)
                initials.push_back(s);
        } else if (key == "final:") {
            State s;
            while (ls >> s)
                finals.push_back(s);
        } else if (key == "trans:") {
            State src, dst;
            std::string sym;
            if (!(ls >> src >> sym >> dst))
                fail("bad transition on line " + std::to_string(lineno));
            raw_trans.emplace_back(src, sym, dst);
        } else {
            fail("unknown key '" + key + "' on line " + std::to_string(lineno));
        }
    }
    if (!alphabet)
        fail("missing 'alphabet:' line");
    if (!num_states)
        fail("missing 'states:' line");

    Nfa n(*alphabet);
    n.num_states = *num_states;
    auto check_state = [&](State s) {
        if (s >= n.num_states)
            fail("state " + std::to_string(s) + " out of range");
    };
    for (State s : initials)
        check_state(s);
    for (State s : finals)
        check_state(s);
    n.initials = std::move(initials);
    n.finals = std::move(finals);
    for (auto& [src, sym, dst] : raw_trans) {
        check_state(src);
        check_state(dst);
        if (sym == "eps") {
            n.add_transition(src, Nfa::EPSILON, dst);
        } else if (sym.size() == 1 && alphabet->index(sym[0])) {
            n.add_transition(src, static_cast<int>(*alphabet->index(sym[0])), dst);
        } else {
            fail("unknown symbol '" + sym + "'");
        }
    }
    return n;
}

namespace {

std::string dot_render(const Alphabet& alphabet, State num_states,
                       const std::vector<State>& initials, const std::vector<State>& finals,
                       std::vector<Nfa::Trans> trans, std::string_view name) {
    std::sort(trans.begin(), trans.end(), [](const Nfa::Trans& a, const Nfa::Trans& b) {
        return std::tuple(a.src, a.dst, sym_order(a.sym)) <
               std::tuple(b.src, b.dst, sym_order(b.sym));
    });
    std::ostringstream out;
    out << "digraph " << name << " {\n  rankdir=LR;\n";
    std::vector<char> is_final(num_states, 0);
    for (State f : finals)
        is_final[f] = 1;
    for (State q = 0; q < num_states; ++q)
        out << "  q" << q << " [shape=" << (is_final[q] ? "doublecircle" : "circle") << "];\n";
    std::vector<State> sorted_initials(initials);
    std::sort(sorted_initials.begin(), sorted_initials.end());
    for (State s : sorted_initials) {
        out << "  start" << s << " [shape=point];\n";
        out << "  start" << s << " -> q" << s << ";\n";
    }
    // Merge parallel edges into one label.
    for (std::size_t i = 0; i < trans.size();) {
        std::size_t j = i;
        std::string label;
        while (j < trans.size() && trans[j].src == trans[i].src && trans[j].dst == trans[i].dst) {
            if (!label.empty())
                label += ",";
            label += (trans[j].sym == Nfa::EPSILON)
                         ? "eps"
                         : std::string(1, alphabet.letter(static_cast<unsigned>(trans[j].sym)));
            ++j;
        }
        out << "  q" << trans[i].src << " -> q" << trans[i].dst << " [label=\"" << label
            << "\"];\n";
        i = j;
    }
    out << "}\n";
    return out.str();
}

}  // namespace

std::string to_dot(const Nfa& n, std::string_view name) {
    return dot_render(n.alphabet, n.num_states, n.initials, n.finals, n.transitions, name);
}

std::string to_dot(const Dfa& d, std::string_view name) {
    std::vector<Nfa::Trans> trans;
    std::vector<State> finals;
    for (State q = 0; q < d.num_states; ++q) {
        if (d.finals[q])
            finals.push_back(q);
        for (unsigned c = 0; c < d.alphabet.size(); ++c)
            trans.push_back({q, static_cast<int>(c), d.step(q, c)});
    }
    return dot_render(d.alphabet, d.num_states, {d.initial}, finals, std::move(trans), name);
}

Cfg cfg_from_text(const Alphabet& a, std::string_view text) {
    Cfg g(a);
    std::map<std::string, std::uint32_t> nt_ids;
    auto nt_id = [&](const std::string& name) {
        auto [it, inserted] = nt_ids.try_emplace(name, static_cast<std::uint32_t>(
                                                           g.nonterminals.size()));
        if (inserted)
            g.nonterminals.push_back(name);
        return it->second;
    };
    auto is_terminal_token = [&](const std::string& tok) {
        for (char c : tok)
            if (!a.index(c))
                return false;
        return true;
    };

    std::istringstream in{std::string(text)};
    std::string line;
    bool saw_any = false;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::istringstream ls(line);
        std::string lhs, arrow;
        if (!(ls >> lhs))
            continue;
        if (!(ls >> arrow) || arrow != "->")
            throw parse_error("cfg: expected '->' after '" + lhs + "'");
        if (is_terminal_token(lhs) && lhs != "_")
            throw parse_error("cfg: left-hand side '" + lhs + "' clashes with terminal letters");
        std::uint32_t lhs_id = nt_id(lhs);
        if (!saw_any) {
            g.start = lhs_id;
            saw_any = true;
        }
        std::vector<Cfg::Symbol> rhs;
        std::string tok;
        auto flush = [&]() {
            g.productions.emplace_back(lhs_id, rhs);
            rhs.clear();
        };
        bool any_tok = false;
        while (ls >> tok) {
            if (tok == "|") {
                flush();
                continue;
            }
            any_tok = true;
            if (tok == "_")
                continue;  // empty word contributes no symbols
            if (is_terminal_token(tok)) {
                for (char c : tok)
                    rhs.push_back({true, *a.index(c)});
            } else {
                rhs.push_back({false, nt_id(tok)});
            }
        }
        if (!any_tok)
            throw parse_error("cfg: empty right-hand side for '" + lhs + "' (use '_')");
        flush();
    }
    if (!saw_any)
        throw parse_error("cfg: no productions");
    return g;
}

std::string to_text(const Cfg& g) {
    // Group alternatives per nonterminal, first-seen order.
    std::ostringstream out;
    for (std::uint32_t nt = 0; nt < g.nonterminals.size(); ++nt) {
        bool first = true;
        for (const auto& [lhs, rhs] : g.productions) {
            if (lhs != nt)
                continue;
            out << (first ? g.nonterminals[nt] + " ->" : " |");
            first = false;
            if (rhs.empty()) {
                out << " _";
            } else {
                for (const auto& sym : rhs) {
                    if (sym.terminal)
                        out << ' ' << g.alphabet.letter(sym.id);
                    else
                        out << ' ' << g.nonterminals[sym.id];
                }
            }
        }
        if (!first)
            out << "\n";
    }
    return out.str();
}

}  // namespace ptk
