#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptk/caps.hpp"
#include "ptk/words.hpp"

namespace ptk {

using State = std::uint32_t;

/// Nondeterministic finite automaton. Epsilon moves are allowed
/// (symbol == EPSILON); they are eliminated during determinization.
struct Nfa {
    static constexpr int EPSILON = -1;

    struct Trans {
        State src;
        int sym;  // letter index, or EPSILON
        State dst;

        friend auto operator<=>(const Trans&, const Trans&) = default;
    };

    Alphabet alphabet;
    State num_states = 0;
    std::vector<Trans> transitions;
    std::vector<State> initials;
    std::vector<State> finals;

    explicit Nfa(Alphabet a) : alphabet(std::move(a)) {}

    State add_state() { return num_states++; }
    void add_transition(State src, int sym, State dst) { transitions.push_back({src, sym, dst}); }

    bool accepts(const Word& w) const;
};

/// Complete deterministic finite automaton: the transition map is total.
/// `canonical` marks the minimal complete DFA in its fixed BFS state
/// numbering, which makes serialization byte-for-byte reproducible and
/// lets language equality be decided by structural comparison.
struct Dfa {
    Alphabet alphabet;
    State num_states = 0;
    std::vector<State> delta;  // num_states * |A|, row-major
    State initial = 0;
    std::vector<bool> finals;
    bool canonical = false;

    explicit Dfa(Alphabet a) : alphabet(std::move(a)) {}

    State step(State q, unsigned c) const { return delta[q * alphabet.size() + c]; }
    State run(State q, const Word& w) const;
    bool accepts(const Word& w) const;
};

/// Context-free grammar; terminals are the alphabet letters.
struct Cfg {
    struct Symbol {
        bool terminal;
        std::uint32_t id;  // letter index or nonterminal index

        friend auto operator<=>(const Symbol&, const Symbol&) = default;
    };

    Alphabet alphabet;
    std::vector<std::string> nonterminals;
    std::vector<std::pair<std::uint32_t, std::vector<Symbol>>> productions;
    std::uint32_t start = 0;

    explicit Cfg(Alphabet a) : alphabet(std::move(a)) {}

    /// Maximum right-hand-side length over all productions.
    std::size_t max_rhs_len() const;
};

// -- determinization / canonical form ---------------------------------

Dfa determinize(const Nfa& n);

/// The unique minimal complete DFA, states renumbered in BFS order
/// (initial first, successors by letter order). Idempotent.
Dfa minimize(const Dfa& d);

/// determinize + minimize.
Dfa canonical_dfa(const Nfa& n);

Nfa dfa_to_nfa(const Dfa& d);

// -- boolean operations (results are canonical) ------------------------

Dfa complement(const Dfa& d);
Dfa intersect(const Dfa& a, const Dfa& b);
Dfa union_dfa(const Dfa& a, const Dfa& b);
Dfa difference(const Dfa& a, const Dfa& b);

// -- decision procedures ------------------------------------------------

bool is_empty(const Dfa& d);
bool is_universal(const Dfa& d);
/// True iff L(small) is included in L(big).
bool includes(const Dfa& big, const Dfa& small);
bool same_language(const Dfa& a, const Dfa& b);

/// Shortest accepted word (breadth-first, smallest letters first);
/// absent iff the language is empty.
std::optional<Word> shortest_word(const Dfa& d);

/// Shortest word accepted by exactly one of the two automata; absent
/// iff the languages coincide.
std::optional<Word> shortest_separator(const Dfa& a, const Dfa& b);

// -- word-derived automata ----------------------------------------------

Dfa empty_dfa(const Alphabet& a);
Dfa universal_dfa(const Alphabet& a);

/// DFA of the singleton {u}.
Dfa word_dfa(const Word& u);
/// DFA of a finite set of words.
Dfa word_set_dfa(const Alphabet& a, const std::vector<Word>& words);
/// Canonical DFA of the set of subwords of u; has |u|+2 states.
Dfa down_word_dfa(const Word& u);
/// Canonical DFA of the set of superwords of u.
Dfa up_word_dfa(const Word& u);

// -- structural measures --------------------------------------------------

/// Maximum number of letter transitions along any path visiting no
/// state twice, from an initial to a final state. Exhaustive search;
/// errors when the trimmed automaton exceeds caps.max_depth_states or
/// when no final state is reachable.
unsigned nfa_depth(const Nfa& n, const Caps& caps = {});

/// Longest self-loop-free path (in transitions) from the initial state
/// to any state of a DFA whose transition graph is acyclic apart from
/// self-loops. Used as the search ceiling for exact heights.
std::optional<unsigned> acyclic_search_bound(const Dfa& d);

/// Number of states from which some final state is reachable
/// (i.e. states other than the rejecting sink).
unsigned productive_state_count(const Dfa& d);

// -- regular expressions ---------------------------------------------------

/// Parses `+` (union), juxtaposition, `*`, parentheses, `_` (empty
/// word), `~` (empty language) and alphabet letters.
Nfa regex_to_nfa(const Alphabet& a, std::string_view expr);

}  // namespace ptk
