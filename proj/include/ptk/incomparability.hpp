#pragma once

#include <optional>
#include <vector>

#include "ptk/automata.hpp"
#include "ptk/caps.hpp"
#include "ptk/simon.hpp"
#include "ptk/words.hpp"

namespace ptk {

bool is_incomparable(const Word& u, const Word& v);

/// Canonical DFA of the words incomparable with u: everything except
/// the superwords and the strict subwords of u. Empty over a unary
/// alphabet or for u = epsilon.
Dfa incomparability_singleton(const Word& u);

/// Does some member of L(d) sit incomparable with u? Decided by a
/// reachability search on the product of d with the two subword
/// matchers for u; no automata are materialized.
bool in_I(const Word& u, const Dfa& d);

/// Is u comparable with every member of L(d)? Complement of in_I.
bool in_C(const Word& u, const Dfa& d);

/// Canonical DFA of the incomparability image of an n-piecewise-
/// testable language: the classes (at a sufficient order) whose
/// representatives have an incomparable partner in L(d). The order is
/// small_subword_bound(k, n) + 1 in general; for finite languages the
/// longest member + 1 already suffices and is used instead. Results
/// are cached per (language, n). Errors when L(d) is not closed at
/// order n or when the class automaton outgrows its cap.
Dfa I_of_pt(const Dfa& d, unsigned n, const Caps& caps = {});

/// For two distinct one-letter deletions u, v of w that both stay
/// congruent to w at the given order: a word w' of the same length as
/// w, different from w, and congruent to it. The deletion positions
/// are chosen lexicographically smallest.
Word two_witness(const Word& w, const Word& u, const Word& v, unsigned n);

/// Per-length census of a congruence class.
struct LayerReport {
    enum class Tag { empty, singular, populous };

    Word representative;
    unsigned level = 0;
    unsigned maxlen = 0;
    std::vector<std::size_t> counts;  // one entry per length 0..maxlen

    Tag tag(unsigned len) const {
        std::size_t c = counts.at(len);
        return c == 0 ? Tag::empty : (c == 1 ? Tag::singular : Tag::populous);
    }
};

LayerReport layer_report(const Word& u, unsigned level, unsigned maxlen, const Caps& caps = {});

}  // namespace ptk
