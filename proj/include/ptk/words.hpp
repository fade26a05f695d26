#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptk/caps.hpp"
#include "ptk/errors.hpp"

namespace ptk {

/// A finite ordered set of distinct letters. Cheap to copy (shared,
/// immutable) and compared by content, so two alphabets declared from
/// the same string are interchangeable.
class Alphabet {
public:
    explicit Alphabet(std::string_view letters);

    unsigned size() const { return static_cast<unsigned>(letters_->size()); }
    char letter(unsigned i) const { return (*letters_)[i]; }
    std::optional<unsigned> index(char c) const;
    const std::string& letters() const { return *letters_; }

    friend bool operator==(const Alphabet& a, const Alphabet& b) {
        return a.letters_ == b.letters_ || *a.letters_ == *b.letters_;
    }
    friend bool operator!=(const Alphabet& a, const Alphabet& b) { return !(a == b); }

private:
    std::shared_ptr<const std::string> letters_;
};

/// A word over a fixed alphabet; letters are stored as alphabet indices.
/// Immutable by convention: operations return fresh words.
struct Word {
    Alphabet alphabet;
    std::vector<std::uint8_t> syms;

    explicit Word(Alphabet a) : alphabet(std::move(a)) {}
    Word(Alphabet a, std::vector<std::uint8_t> s) : alphabet(std::move(a)), syms(std::move(s)) {}

    std::size_t size() const { return syms.size(); }
    bool empty() const { return syms.empty(); }
    std::string str() const;

    /// Number of occurrences of the letter with the given index.
    std::size_t count(unsigned letter) const;
    /// Bitmask of letters occurring in the word.
    std::uint32_t letter_mask() const;

    friend bool operator==(const Word& u, const Word& v) {
        return u.alphabet == v.alphabet && u.syms == v.syms;
    }
    friend bool operator!=(const Word& u, const Word& v) { return !(u == v); }
};

/// Parses a word from plain text over the declared alphabet.
Word parse_word(const Alphabet& a, std::string_view text);

/// Length-then-lexicographic order; the canonical order used for all
/// deterministic word listings.
bool shortlex_less(const Word& u, const Word& v);

struct ShortlexLess {
    bool operator()(const Word& u, const Word& v) const { return shortlex_less(u, v); }
};

enum class WordRelation { equal, strictly_below, strictly_above, incomparable };

/// Subword (scattered subsequence) test: true iff u embeds into v
/// order-preservingly. Decided by the greedy left-most embedding.
bool is_subword(const Word& u, const Word& v);

/// The unique relation between u and v: the four outcomes partition
/// all pairs.
WordRelation compare(const Word& u, const Word& v);

/// All words obtained from u by inserting one alphabet letter at one
/// position, deduplicated and in shortlex order. At most (|u|+1)*|A|
/// results.
std::vector<Word> shuffle_with_alphabet(const Word& u);

/// A word is rich when every alphabet letter occurs in it. The rich
/// factorization splits u = u1 a1 ... um am v by repeatedly removing
/// the shortest rich prefix; the blocks ui and the tail v are poor.
struct RichFactorization {
    std::vector<std::pair<Word, std::uint8_t>> blocks;
    Word tail;

    unsigned richness() const { return static_cast<unsigned>(blocks.size()); }
    Word concatenated() const;
};

RichFactorization rich_factorization(const Word& u);

/// The largest m such that u is a concatenation of m rich factors
/// (followed by anything). Equals the block count of the rich
/// factorization.
unsigned richness(const Word& u);

/// Exact value of the small-subword length bound: every word over k
/// letters has a congruence-equivalent subword of length at most
/// small_subword_bound(k, n) at order n. Memoized.
std::uint64_t small_subword_bound(unsigned k, unsigned n);

/// The recursively self-similar word family over the first k letters
/// of the alphabet: each level repeats the previous one eta+1 times
/// around a fresh letter. Length (eta+1)^k - 1.
Word generate_uk(unsigned k, unsigned eta, const Alphabet& a);

/// The positive/negative subword constraint sets that characterize the
/// level-k family word: a word over the first k letters satisfies all
/// positive constraints and avoids all negative ones iff it equals
/// generate_uk(k, eta). Positive words have length k*eta, negative
/// ones at most k*eta+1.
std::pair<std::vector<Word>, std::vector<Word>> generate_pk_nk(unsigned k, unsigned eta,
                                                               const Alphabet& a);

/// The exact set of distinct subwords of u, shortlex-sorted. Explicit
/// enumeration; capped via caps.max_subword_enum_len / max_enum_words.
std::vector<Word> distinct_subwords(const Word& u, const Caps& caps = {});

namespace detail {

/// Calls fn once per distinct subword of u with length <= maxlen,
/// passing the letter-index sequence. Enumeration is by canonical
/// leftmost embeddings, so no deduplication pass is needed.
void for_each_distinct_subword(const std::vector<std::uint8_t>& syms, unsigned alphabet_size,
                               std::size_t maxlen,
                               const std::function<void(const std::vector<std::uint8_t>&)>& fn);

void require_same_alphabet(const Alphabet& a, const Alphabet& b, const char* op);

}  // namespace detail

}  // namespace ptk
