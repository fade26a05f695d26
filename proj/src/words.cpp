#include "ptk/words.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace ptk {

Alphabet::Alphabet(std::string_view letters) {
    if (letters.empty())
        throw parse_error("alphabet must contain at least one letter");
    if (letters.size() > 255)
        throw parse_error("alphabet too large (at most 255 letters)");
    std::string s(letters);
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (s[i] == s[j])
                throw parse_error(std::string("duplicate letter '") + s[i] + "' in alphabet");
    letters_ = std::make_shared<const std::string>(std::move(s));
}

std::optional<unsigned> Alphabet::index(char c) const {
    auto pos = letters_->find(c);
    if (pos == std::string::npos)
        return std::nullopt;
    return static_cast<unsigned>(pos);
}

std::string Word::str() const {
    std::string out;
    out.reserve(syms.size());
    for (auto s : syms)
        out.push_back(alphabet.letter(s));
    return out;
}

std::size_t Word::count(unsigned letter) const {
    return static_cast<std::size_t>(
        std::count(syms.begin(), syms.end(), static_cast<std::uint8_t>(letter)));
}

std::uint32_t Word::letter_mask() const {
    std::uint32_t m = 0;
    for (auto s : syms)
        m |= (s < 32 ? (1u << s) : 0u);
    return m;
}

Word parse_word(const Alphabet& a, std::string_view text) {
    Word w(a);
    w.syms.reserve(text.size());
    for (char c : text) {
        auto idx = a.index(c);
        if (!idx)
            throw parse_error(std::string("letter '") + c + "' not in alphabet \"" +
                              a.letters() + "\"");
        w.syms.push_back(static_cast<std::uint8_t>(*idx));
    }
    return w;
}

bool shortlex_less(const Word& u, const Word& v) {
    if (u.size() != v.size())
        return u.size() < v.size();
    return u.syms < v.syms;
}

namespace detail {

void require_same_alphabet(const Alphabet& a, const Alphabet& b, const char* op) {
    if (a != b)
        throw alphabet_mismatch(std::string(op) + ": operands use different alphabets (\"" +
                                a.letters() + "\" vs \"" + b.letters() + "\")");
}

void for_each_distinct_subword(const std::vector<std::uint8_t>& syms, unsigned alphabet_size,
                               std::size_t maxlen,
                               const std::function<void(const std::vector<std::uint8_t>&)>& fn) {
    const std::size_t n = syms.size();
    // next[p][c]: least position >= p holding letter c, or n.
    std::vector<std::size_t> next((n + 1) * alphabet_size, n);
    for (std::size_t p = n; p-- > 0;) {
        for (unsigned c = 0; c < alphabet_size; ++c)
            next[p * alphabet_size + c] = next[(p + 1) * alphabet_size + c];
        next[p * alphabet_size + syms[p]] = p;
    }

    std::vector<std::uint8_t> cur;
    fn(cur);
    // Each distinct subword has a unique leftmost embedding, so the
    // recursion below visits every subword exactly once.
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (cur.size() >= maxlen)
            return;
        for (unsigned c = 0; c < alphabet_size; ++c) {
            std::size_t np = next[pos * alphabet_size + c];
            if (np >= n)
                continue;
            cur.push_back(static_cast<std::uint8_t>(c));
            fn(cur);
            self(self, np + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
}

}  // namespace detail

bool is_subword(const Word& u, const Word& v) {
    detail::require_same_alphabet(u.alphabet, v.alphabet, "is_subword");
    std::size_t i = 0;
    for (std::size_t j = 0; i < u.size() && j < v.size(); ++j)
        if (u.syms[i] == v.syms[j])
            ++i;
    return i == u.size();
}

WordRelation compare(const Word& u, const Word& v) {
    detail::require_same_alphabet(u.alphabet, v.alphabet, "compare");
    if (u.syms == v.syms)
        return WordRelation::equal;
    if (is_subword(u, v))
        return WordRelation::strictly_below;
    if (is_subword(v, u))
        return WordRelation::strictly_above;
    return WordRelation::incomparable;
}

std::vector<Word> shuffle_with_alphabet(const Word& u) {
    std::set<std::vector<std::uint8_t>> seen;
    const unsigned k = u.alphabet.size();
    for (std::size_t pos = 0; pos <= u.size(); ++pos) {
        for (unsigned c = 0; c < k; ++c) {
            std::vector<std::uint8_t> w(u.syms);
            w.insert(w.begin() + static_cast<std::ptrdiff_t>(pos),
                     static_cast<std::uint8_t>(c));
            seen.insert(std::move(w));
        }
    }
    std::vector<Word> out;
    out.reserve(seen.size());
    for (auto& s : seen)
        out.emplace_back(u.alphabet, s);
    std::sort(out.begin(), out.end(), ShortlexLess{});
    return out;
}

RichFactorization rich_factorization(const Word& u) {
    RichFactorization rf{.blocks = {}, .tail = Word(u.alphabet)};
    const unsigned k = u.alphabet.size();
    const std::uint32_t full = (k >= 32) ? 0xffffffffu : ((1u << k) - 1);

    std::size_t start = 0;
    std::uint32_t seen = 0;
    Word block(u.alphabet);
    for (std::size_t i = 0; i < u.size(); ++i) {
        seen |= 1u << u.syms[i];
        if (seen == full) {
            // u[start..i] is the shortest rich prefix of the remainder.
            block.syms.assign(u.syms.begin() + static_cast<std::ptrdiff_t>(start),
                              u.syms.begin() + static_cast<std::ptrdiff_t>(i));
            rf.blocks.emplace_back(block, u.syms[i]);
            start = i + 1;
            seen = 0;
        }
    }
    rf.tail.syms.assign(u.syms.begin() + static_cast<std::ptrdiff_t>(start), u.syms.end());
    return rf;
}

Word RichFactorization::concatenated() const {
    Word w(tail.alphabet);
    for (const auto& [block, a] : blocks) {
        w.syms.insert(w.syms.end(), block.syms.begin(), block.syms.end());
        w.syms.push_back(a);
    }
    w.syms.insert(w.syms.end(), tail.syms.begin(), tail.syms.end());
    return w;
}

unsigned richness(const Word& u) {
    const unsigned k = u.alphabet.size();
    const std::uint32_t full = (k >= 32) ? 0xffffffffu : ((1u << k) - 1);
    unsigned m = 0;
    std::uint32_t seen = 0;
    for (auto s : u.syms) {
        seen |= 1u << s;
        if (seen == full) {
            ++m;
            seen = 0;
        }
    }
    return m;
}

std::uint64_t small_subword_bound(unsigned k, unsigned n) {
    if (k == 0)
        throw precondition_error("small_subword_bound: k must be >= 1");
    static std::map<std::pair<unsigned, unsigned>, std::uint64_t> memo;
    auto it = memo.find({k, n});
    if (it != memo.end())
        return it->second;
    std::uint64_t val;
    if (k == 1) {
        val = n;
    } else {
        // Exhaustive max over the split parameter; exact values are
        // needed for bound ledgers, not just the closed-form estimate.
        val = 0;
        for (unsigned m = 0; m <= n; ++m) {
            std::uint64_t cand =
                m * small_subword_bound(k - 1, n + 1 - m) + m + small_subword_bound(k - 1, n - m);
            val = std::max(val, cand);
        }
    }
    memo[{k, n}] = val;
    return val;
}

Word generate_uk(unsigned k, unsigned eta, const Alphabet& a) {
    if (eta < 1)
        throw precondition_error("generate_uk: eta must be >= 1");
    if (a.size() < k)
        throw precondition_error("generate_uk: alphabet has fewer than k letters");
    Word w(a);
    for (unsigned level = 1; level <= k; ++level) {
        std::vector<std::uint8_t> prev = w.syms;
        w.syms.clear();
        for (unsigned rep = 0; rep < eta; ++rep) {
            w.syms.insert(w.syms.end(), prev.begin(), prev.end());
            w.syms.push_back(static_cast<std::uint8_t>(level - 1));
        }
        w.syms.insert(w.syms.end(), prev.begin(), prev.end());
    }
    return w;
}

std::pair<std::vector<Word>, std::vector<Word>> generate_pk_nk(unsigned k, unsigned eta,
                                                               const Alphabet& a) {
    if (a.size() < k)
        throw precondition_error("generate_pk_nk: alphabet has fewer than k letters");
    std::set<std::vector<std::uint8_t>> pos{{}}, neg;
    for (unsigned level = 1; level <= k; ++level) {
        const auto letter = static_cast<std::uint8_t>(level - 1);
        std::set<std::vector<std::uint8_t>> npos, nneg;
        for (unsigned i = 0; i <= eta; ++i) {
            for (const auto& v : pos) {
                std::vector<std::uint8_t> w(i, letter);
                w.insert(w.end(), v.begin(), v.end());
                w.insert(w.end(), eta - i, letter);
                npos.insert(std::move(w));
            }
            for (const auto& v : neg) {
                std::vector<std::uint8_t> w(i, letter);
                w.insert(w.end(), v.begin(), v.end());
                w.insert(w.end(), eta - i, letter);
                nneg.insert(std::move(w));
            }
        }
        nneg.insert(std::vector<std::uint8_t>(eta + 1, letter));
        pos = std::move(npos);
        neg = std::move(nneg);
    }
    auto collect = [&](const std::set<std::vector<std::uint8_t>>& src) {
        std::vector<Word> out;
        out.reserve(src.size());
        for (const auto& s : src)
            out.emplace_back(a, s);
        std::sort(out.begin(), out.end(), ShortlexLess{});
        return out;
    };
    return {collect(pos), collect(neg)};
}

std::vector<Word> distinct_subwords(const Word& u, const Caps& caps) {
    if (u.size() > caps.max_subword_enum_len)
        throw cap_exceeded("distinct_subwords: |u| = " + std::to_string(u.size()) +
                           " exceeds cap " + std::to_string(caps.max_subword_enum_len));
    std::vector<Word> out;
    detail::for_each_distinct_subword(u.syms, u.alphabet.size(), u.size(),
                                      [&](const std::vector<std::uint8_t>& s) {
                                          if (out.size() >= caps.max_enum_words)
                                              throw cap_exceeded(
                                                  "distinct_subwords: more than " +
                                                  std::to_string(caps.max_enum_words) +
                                                  " distinct subwords");
                                          out.emplace_back(u.alphabet, s);
                                      });
    std::sort(out.begin(), out.end(), ShortlexLess{});
    return out;
}

}  // namespace ptk
