#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ptk/automata.hpp"
#include "ptk/caps.hpp"
#include "ptk/words.hpp"

namespace ptk {

/// Canonical DFA of the superword closure: all words containing some
/// member of L as a subword.
Dfa up_closure(const Nfa& n);

/// Canonical DFA of the subword closure: all subwords of members of L.
Dfa down_closure(const Nfa& n);

/// Strict variants: at least one letter inserted / deleted.
Dfa strict_up(const Nfa& n);
Dfa strict_down(const Nfa& n);

/// The subword-minimal members of L, as a language (always exact).
Dfa min_lang(const Nfa& n);

/// The subword-minimal members of L as explicit words, obtained by
/// enumerating acyclic accepting paths and filtering minimal ones.
/// Capped via caps.max_path_enum.
std::vector<Word> min_words(const Nfa& n, const Caps& caps = {});

/// Words derivable from the grammar with no nonterminal repeated along
/// any branch of the derivation tree; their upward closure equals the
/// upward closure of the whole language.
std::vector<Word> cfg_nonrepeating_words(const Cfg& g, const Caps& caps = {});

Dfa up_closure_cfg(const Cfg& g, const Caps& caps = {});

/// Total letter-to-word substitution.
struct Morphism {
    Alphabet source;
    Alphabet target;
    std::vector<Word> image;  // one word over `target` per source letter

    Morphism(Alphabet src, Alphabet tgt, std::vector<Word> img);
};

/// Canonical DFA of the set of words whose image lands in L(d).
Dfa inverse_morphism(const Dfa& d, const Morphism& rho);

/// A concatenation of star factors B* (B a nonempty subalphabet) and
/// single-letter factors; the building block for subword-closure
/// decompositions. The empty product denotes {epsilon}.
struct DProduct {
    struct Factor {
        bool is_star;
        std::uint32_t mask;   // star factor: letter bitmask, nonzero
        std::uint8_t letter;  // letter factor

        friend auto operator<=>(const Factor&, const Factor&) = default;
    };

    Alphabet alphabet;
    std::vector<Factor> factors;

    explicit DProduct(Alphabet a) : alphabet(std::move(a)) {}

    std::size_t length() const { return factors.size(); }
    std::string str() const;
};

/// Parses the whitespace-separated form `[ab]* a [b]* c`; `_` denotes
/// the empty product.
DProduct parse_dproduct(const Alphabet& a, std::string_view text);

/// Chain automaton with length+1 states; star factors become
/// self-loops.
Nfa dproduct_to_nfa(const DProduct& p);

bool dproduct_member(const Word& u, const DProduct& p);

/// Canonical DFA of the subword closure of the product (letter factors
/// become optional).
Dfa down_closure_dproduct(const DProduct& p);

/// A finite family of products covering L from below within its
/// subword closure: L is contained in the union, the union is
/// contained in the closure. One product per simple initial-to-final
/// path; each has length at most 2*depth+1.
std::vector<DProduct> dproduct_cover_nfa(const Nfa& n, const Caps& caps = {});

/// For u in an n-piecewise-testable language L(d): a product P with
/// u in P and P included in L(d), of length at most m*k+m+k where
/// m = small_subword_bound(k, n). The inclusion is verified before
/// returning; a violation signals an implementation bug and throws.
DProduct dproduct_for_word(const Word& u, const Dfa& d, unsigned n, const Caps& caps = {});

/// A pair (v, v') with v congruent to v' at order |u|-1, u a subword
/// of v' but not of v. Witnesses that requiring u as a subword cannot
/// be expressed with shorter subword constraints.
std::pair<Word, Word> lower_bound_witness(const Word& u);

}  // namespace ptk
