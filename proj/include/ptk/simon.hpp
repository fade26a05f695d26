#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "ptk/automata.hpp"
#include "ptk/caps.hpp"
#include "ptk/words.hpp"

namespace ptk {

/// Canonical description of a congruence class at a given order: the
/// antichain of maximal subwords of length <= level. Two words are
/// congruent at that order iff their profiles are equal.
struct SubwordProfile {
    unsigned level = 0;
    std::vector<Word> maximal;  // pairwise incomparable, shortlex-sorted

    friend bool operator==(const SubwordProfile& a, const SubwordProfile& b) {
        return a.level == b.level && a.maximal == b.maximal;
    }
    friend bool operator!=(const SubwordProfile& a, const SubwordProfile& b) { return !(a == b); }
};

SubwordProfile profile(const Word& u, unsigned level);

/// True iff u and v have the same subwords of length <= level.
bool sim_equiv(const Word& u, const Word& v, unsigned level);

/// The least order at which u and v become distinguishable, i.e. the
/// length of a shortest word that is a subword of exactly one of them.
/// Absent (= infinity) iff u == v. Computed by breadth-first search on
/// the product of the two subword-set automata.
std::optional<unsigned> delta(const Word& u, const Word& v);

/// Exact height of the singleton {u}: the least order whose congruence
/// class of u is {u} itself. Always between 1 and |u|+1.
unsigned pt_height_word(const Word& u);

/// Exact height of a finite nonempty language: the max over members.
unsigned pt_height_finite(const std::vector<Word>& words);

/// A congruence-equivalent subword of u of length at most
/// small_subword_bound(k', n), where k' counts the letters occurring
/// in u. The recursion follows the rich factorization, shrinking the
/// alphabet one letter per block.
Word small_subword(const Word& u, unsigned n);

/// Deterministic automaton whose states are the congruence classes of
/// the given order: reading w from the initial state lands on the
/// class of w. Representatives are breadth-first shortest witnesses,
/// reconstructed from the BFS tree.
struct ClassAutomaton {
    Alphabet alphabet;
    unsigned level = 0;
    std::vector<State> delta;                             // state * |A| + c
    std::vector<std::pair<State, std::uint8_t>> parent;   // BFS tree; [0] is a self-edge
    State initial = 0;

    State num_states() const { return static_cast<State>(parent.size()); }
    State step(State q, unsigned c) const { return delta[q * alphabet.size() + c]; }
    State state_of(const Word& w) const;
    Word representative(State s) const;

    /// DFA with the same transition structure and the given acceptance.
    Dfa as_dfa(const std::vector<bool>& accepting) const;
};

/// Builds (or fetches from the process-wide cache) the class automaton
/// for the alphabet at the given order. Throws cap_exceeded with a
/// cost report when the frontier outgrows caps.max_class_states.
std::shared_ptr<const ClassAutomaton> class_automaton(const Alphabet& a, unsigned level,
                                                      const Caps& caps = {});

/// True iff L(d) is a union of congruence classes of the given order.
bool is_n_pt(const Dfa& d, unsigned level, const Caps& caps = {});

/// Exact piecewise-testable height of L(d); absent when the language
/// is not piecewise-testable. The search runs over increasing orders
/// up to the longest self-loop-free path of the canonical DFA, which
/// bounds the height of every piecewise-testable language.
std::optional<unsigned> pt_height_dfa(const Dfa& d, const Caps& caps = {});

/// All words of length <= maxlen congruent to u at the given order.
std::vector<Word> enumerate_class(const Word& u, unsigned level, unsigned maxlen,
                                  const Caps& caps = {});

/// log2 of the published bound on the number of congruence classes
/// (and hence on canonical-DFA size for languages of that height).
/// Meaningful for k >= 2 and n >= 2.
double class_count_bound_log2(unsigned k, unsigned n);

}  // namespace ptk
