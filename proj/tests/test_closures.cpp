#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "ptk/automata_io.hpp"
#include "ptk/closures.hpp"
#include "ptk/simon.hpp"

using namespace ptk;

namespace {
const Alphabet A1("a");
const Alphabet AB("ab");
const Alphabet ABC("abc");

Word W(const Alphabet& a, std::string_view s) {
    return parse_word(a, s);
}

Nfa random_nfa(std::mt19937_64& rng, const Alphabet& a, State states, double density) {
    Nfa n(a);
    n.num_states = states;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (State p = 0; p < states; ++p)
        for (unsigned c = 0; c < a.size(); ++c)
            for (State q = 0; q < states; ++q)
                if (coin(rng) < density)
                    n.add_transition(p, static_cast<int>(c), q);
    n.initials = {0};
    std::uniform_int_distribution<State> pick(0, states - 1);
    n.finals = {pick(rng)};
    return n;
}
}  // namespace

TEST_CASE("upward and downward closures") {
    CHECK(is_empty(up_closure(regex_to_nfa(AB, "~"))));
    CHECK(is_empty(down_closure(regex_to_nfa(AB, "~"))));
    CHECK(same_language(up_closure(regex_to_nfa(AB, "ab")), up_word_dfa(W(AB, "ab"))));
    CHECK(is_universal(up_closure(regex_to_nfa(AB, "(ab)*"))));
    CHECK(is_universal(down_closure(regex_to_nfa(AB, "(ab)*"))));
    CHECK(same_language(down_closure(regex_to_nfa(AB, "ab")), down_word_dfa(W(AB, "ab"))));
}

TEST_CASE("closures are closed (randomized)") {
    std::mt19937_64 rng(53);
    auto words = oracle::all_words(AB, 5);
    for (int i = 0; i < 20; ++i) {
        Nfa n = random_nfa(rng, AB, 4, 0.2);
        Dfa up = up_closure(n);
        Dfa down = down_closure(n);
        for (const auto& w : words) {
            if (n.accepts(w)) {
                CHECK(up.accepts(w));
                CHECK(down.accepts(w));
            }
            if (up.accepts(w))
                for (const auto& v : shuffle_with_alphabet(w))
                    CHECK(up.accepts(v));
            if (!w.empty() && down.accepts(w)) {
                Word v = w;
                v.syms.pop_back();
                CHECK(down.accepts(v));
            }
        }
    }
}

TEST_CASE("strict closures") {
    Dfa su = strict_up(regex_to_nfa(AB, "a"));
    CHECK(su.accepts(W(AB, "aa")));
    CHECK(su.accepts(W(AB, "ab")));
    CHECK(su.accepts(W(AB, "ba")));
    CHECK_FALSE(su.accepts(W(AB, "a")));
    CHECK_FALSE(su.accepts(W(AB, "")));
    CHECK_FALSE(su.accepts(W(AB, "b")));

    Dfa sd = strict_down(regex_to_nfa(AB, "ab"));
    for (const auto& w : oracle::all_words(AB, 3)) {
        bool expect = w.str() == "" || w.str() == "a" || w.str() == "b";
        CHECK(sd.accepts(w) == expect);
    }
    CHECK(is_empty(strict_up(regex_to_nfa(AB, "~"))));
}

TEST_CASE("minimal elements") {
    auto mw = min_words(regex_to_nfa(AB, "(a+b)*"));
    REQUIRE(mw.size() == 1);
    CHECK(mw[0].empty());

    mw = min_words(regex_to_nfa(AB, "a(a)*(b)*"));
    REQUIRE(mw.size() == 1);
    CHECK(mw[0].str() == "a");

    mw = min_words(dfa_to_nfa(up_word_dfa(W(AB, "abba"))));
    REQUIRE(mw.size() == 1);
    CHECK(mw[0].str() == "abba");

    // The language-level and the enumerative route agree.
    std::mt19937_64 rng(59);
    for (int i = 0; i < 25; ++i) {
        Nfa n = random_nfa(rng, AB, 4, 0.22);
        Dfa lang_route = min_lang(n);
        auto words_route = min_words(n);
        Dfa from_words = word_set_dfa(AB, words_route);
        CHECK(same_language(lang_route, from_words));
    }
}

TEST_CASE("minimal-length bound certifies closure heights") {
    // With all minimal words of length <= m the closure is m-testable,
    // the strict closure and the minimal set one order higher.
    std::mt19937_64 rng(61);
    for (int i = 0; i < 12; ++i) {
        Nfa n = random_nfa(rng, AB, 4, 0.25);
        Dfa up = up_closure(n);
        if (is_empty(up))
            continue;
        auto mins = min_words(n);
        std::size_t m = 0;
        for (const auto& w : mins)
            m = std::max(m, w.size());
        if (m > 4)
            continue;
        CHECK(is_n_pt(up, static_cast<unsigned>(m)));
        CHECK(is_n_pt(strict_up(n), static_cast<unsigned>(m) + 1));
        CHECK(is_n_pt(min_lang(n), static_cast<unsigned>(m) + 1));
    }
}

TEST_CASE("closures of piecewise-testable languages stay bounded (randomized)") {
    std::mt19937_64 rng(67);
    const unsigned k = 2;
    for (int i = 0; i < 10; ++i) {
        // Random boolean combination of up-filters of words of length <= n.
        unsigned n = 1 + static_cast<unsigned>(rng() % 3);
        Dfa lang = universal_dfa(AB);
        for (int f = 0; f < 3; ++f) {
            Word w = oracle::random_word(rng, AB, n);
            Dfa filter = up_word_dfa(w);
            if (rng() % 2)
                filter = complement(filter);
            lang = (rng() % 2) ? intersect(lang, filter) : union_dfa(lang, filter);
        }
        if (!is_n_pt(lang, n))
            continue;  // the combination may be simpler than n; skip mismatches
        std::uint64_t m = small_subword_bound(k, n);
        Nfa nf = dfa_to_nfa(lang);
        CHECK(is_n_pt(up_closure(nf), static_cast<unsigned>(m)));
        CHECK(is_n_pt(down_closure(nf), static_cast<unsigned>((k + 1) * (m + 1))));
    }
}

TEST_CASE("grammar upward closures") {
    Cfg balanced = cfg_from_text(AB, "S -> a S b | _\n");
    CHECK(is_universal(up_closure_cfg(balanced)));

    Cfg pairs = cfg_from_text(AB, "S -> a S b | ab\n");
    CHECK(same_language(up_closure_cfg(pairs), up_word_dfa(W(AB, "ab"))));

    auto derived = cfg_nonrepeating_words(pairs);
    REQUIRE(derived.size() == 1);
    CHECK(derived[0].str() == "ab");

    // Minimal words stay within max-rhs-length ^ nonterminal-count.
    Cfg two = cfg_from_text(AB, "S -> T T | a\nT -> a b\n");
    std::uint64_t bound = 1;
    for (std::size_t i = 0; i < two.nonterminals.size(); ++i)
        bound *= two.max_rhs_len();
    for (const auto& w : cfg_nonrepeating_words(two))
        CHECK(w.size() <= bound);
}

TEST_CASE("inverse morphisms") {
    Dfa lang = word_dfa(W(AB, "a"));
    Morphism identity(AB, AB, {W(AB, "a"), W(AB, "b")});
    CHECK(same_language(inverse_morphism(lang, identity), lang));

    // b erases: preimage of {a} is b*ab*.
    Morphism erase_b(AB, AB, {W(AB, "a"), W(AB, "")});
    Dfa pre = inverse_morphism(lang, erase_b);
    CHECK(same_language(pre, canonical_dfa(regex_to_nfa(AB, "(b)*a(b)*"))));

    // Preimages cannot raise the height.
    std::mt19937_64 rng(71);
    Morphism swap(AB, AB, {W(AB, "b"), W(AB, "a")});
    Morphism dup(AB, AB, {W(AB, "ab"), W(AB, "b")});
    for (int i = 0; i < 20; ++i) {
        Word w = oracle::random_word(rng, AB, 3);
        Dfa l = up_word_dfa(w);
        unsigned n = std::max<unsigned>(1, static_cast<unsigned>(w.size()));
        for (const Morphism* rho : {&swap, &dup}) {
            CHECK(is_n_pt(inverse_morphism(l, *rho), n));
        }
    }
}

TEST_CASE("product parsing, membership, and closure") {
    DProduct p = parse_dproduct(AB, "[ab]* a [b]* ");
    CHECK(p.length() == 3);
    CHECK(p.str() == "[ab]* a [b]*");
    CHECK(parse_dproduct(AB, "_").length() == 0);
    CHECK(parse_dproduct(AB, "_").str() == "_");
    CHECK_THROWS_AS(parse_dproduct(AB, "[]* a"), parse_error);
    CHECK_THROWS_AS(parse_dproduct(AB, "c"), parse_error);

    // The empty product holds exactly the empty word.
    DProduct empty(AB);
    CHECK(dproduct_member(Word(AB), empty));
    CHECK_FALSE(dproduct_member(W(AB, "a"), empty));

    DProduct star_a = parse_dproduct(AB, "[ab]* a");
    CHECK(dproduct_member(W(AB, "ba"), star_a));
    CHECK_FALSE(dproduct_member(W(AB, "ab"), star_a));

    DProduct ba = parse_dproduct(AB, "b a");
    for (const auto& w : oracle::all_words(AB, 3))
        CHECK(dproduct_member(w, ba) == (w.str() == "ba"));

    // Membership agrees with the chain automaton.
    std::mt19937_64 rng(73);
    for (int i = 0; i < 30; ++i) {
        DProduct q(AB);
        unsigned len = static_cast<unsigned>(rng() % 5);
        for (unsigned j = 0; j < len; ++j) {
            if (rng() % 2)
                q.factors.push_back({true, 1u + static_cast<std::uint32_t>(rng() % 3), 0});
            else
                q.factors.push_back({false, 0, static_cast<std::uint8_t>(rng() % 2)});
        }
        CHECK(parse_dproduct(AB, q.str()).str() == q.str());
        Dfa d = canonical_dfa(dproduct_to_nfa(q));
        for (const auto& w : oracle::all_words(AB, 4))
            CHECK(d.accepts(w) == dproduct_member(w, q));
    }
}

TEST_CASE("product closures have few productive states") {
    DProduct aaa = parse_dproduct(A1, "a a a");
    Dfa down = down_closure_dproduct(aaa);
    CHECK(down.num_states == 5);
    CHECK(productive_state_count(down) == 4);
    for (const auto& w : oracle::all_words(A1, 5))
        CHECK(down.accepts(w) == (w.size() <= 3));
    CHECK(pt_height_dfa(down) == 4u);

    DProduct all = parse_dproduct(AB, "[ab]*");
    CHECK(is_universal(down_closure_dproduct(all)));

    std::mt19937_64 rng(79);
    for (int i = 0; i < 60; ++i) {
        DProduct q(ABC);
        unsigned len = static_cast<unsigned>(rng() % 7);
        for (unsigned j = 0; j < len; ++j) {
            if (rng() % 2)
                q.factors.push_back({true, 1u + static_cast<std::uint32_t>(rng() % 7), 0});
            else
                q.factors.push_back({false, 0, static_cast<std::uint8_t>(rng() % 3)});
        }
        Dfa d = down_closure_dproduct(q);
        CHECK(productive_state_count(d) <= q.length() + 1);
        CHECK(is_n_pt(d, static_cast<unsigned>(q.length()) + 1));
    }
}

TEST_CASE("covers decompose downward closures (randomized)") {
    std::mt19937_64 rng(83);
    for (int i = 0; i < 30; ++i) {
        Nfa n = random_nfa(rng, AB, 4, 0.25);
        Dfa down = down_closure(n);
        auto cover = dproduct_cover_nfa(n);
        if (is_empty(canonical_dfa(n))) {
            CHECK(cover.empty());
            continue;
        }
        unsigned depth = nfa_depth(n);
        Dfa covered = empty_dfa(AB);
        Dfa lang = canonical_dfa(n);
        for (const auto& p : cover) {
            CHECK(p.length() <= 2 * depth + 1);
            covered = union_dfa(covered, down_closure_dproduct(p));
        }
        CHECK(same_language(covered, down));
        // L itself sits inside the union of the products.
        Dfa raw_union = empty_dfa(AB);
        for (const auto& p : cover)
            raw_union = union_dfa(raw_union, canonical_dfa(dproduct_to_nfa(p)));
        CHECK(includes(raw_union, lang));
        CHECK(includes(down, raw_union));
    }
}

TEST_CASE("cover of a simple loop language") {
    auto cover = dproduct_cover_nfa(regex_to_nfa(AB, "(ab)*"));
    Dfa covered = empty_dfa(AB);
    for (const auto& p : cover)
        covered = union_dfa(covered, down_closure_dproduct(p));
    CHECK(is_universal(covered));
}

TEST_CASE("products around single members") {
    Dfa up_a2 = up_word_dfa(W(AB, "a"));
    DProduct p = dproduct_for_word(W(AB, "ba"), up_a2, 1);
    CHECK(p.length() <= 8);
    CHECK(dproduct_member(W(AB, "ba"), p));

    Dfa up_a1 = up_word_dfa(W(A1, "a"));
    DProduct q = dproduct_for_word(W(A1, "aaa"), up_a1, 1);
    CHECK(q.str() == "a [a]*");

    // Everything pumps against the full language.
    DProduct r = dproduct_for_word(W(AB, "abab"), universal_dfa(AB), 0);
    CHECK(r.str() == "[ab]*");

    CHECK_THROWS_AS(dproduct_for_word(W(AB, "b"), up_a2, 1), precondition_error);

    std::mt19937_64 rng(89);
    const unsigned k = 2;
    int exercised = 0;
    for (int i = 0; i < 40 && exercised < 25; ++i) {
        unsigned n = 1 + static_cast<unsigned>(rng() % 3);
        Dfa lang = universal_dfa(AB);
        for (int f = 0; f < 3; ++f) {
            Dfa filter = up_word_dfa(oracle::random_word(rng, AB, n));
            if (rng() % 2)
                filter = complement(filter);
            lang = (rng() % 2) ? intersect(lang, filter) : union_dfa(lang, filter);
        }
        if (!is_n_pt(lang, n) || is_empty(lang))
            continue;
        std::uint64_t m = small_subword_bound(k, n);
        for (int j = 0; j < 3; ++j) {
            Word u = oracle::random_word(rng, AB, 9);
            if (!lang.accepts(u))
                continue;
            ++exercised;
            DProduct p2 = dproduct_for_word(u, lang, n);
            CHECK(dproduct_member(u, p2));
            CHECK(includes(lang, canonical_dfa(dproduct_to_nfa(p2))));
            CHECK(p2.length() <= m * k + m + k);
        }
    }
    CHECK(exercised > 0);
}

TEST_CASE("adjacent star factors stay incomparable after simplification") {
    std::mt19937_64 rng(97);
    int exercised = 0;
    for (int i = 0; i < 60; ++i) {
        unsigned n = 1 + static_cast<unsigned>(rng() % 2);
        Dfa lang = up_word_dfa(oracle::random_word(rng, ABC, n));
        if (is_empty(lang))
            continue;
        Word u = oracle::random_word(rng, ABC, 10);
        if (!lang.accepts(u))
            continue;
        ++exercised;
        DProduct p = dproduct_for_word(u, lang, n);
        unsigned run = 0;
        for (std::size_t j = 0; j < p.factors.size(); ++j) {
            if (!p.factors[j].is_star) {
                run = 0;
                continue;
            }
            ++run;
            CHECK(run <= 3);  // at most |A| consecutive star factors
            if (j + 1 < p.factors.size() && p.factors[j + 1].is_star) {
                auto a = p.factors[j].mask, b = p.factors[j + 1].mask;
                CHECK((a & b) != a);
                CHECK((a & b) != b);
            }
        }
    }
    CHECK(exercised > 5);
}

TEST_CASE("witness pairs for filter heights") {
    auto [v, vp] = lower_bound_witness(W(AB, "ab"));
    CHECK(v.str() == "ba");
    CHECK(vp.str() == "bab");
    CHECK(sim_equiv(v, vp, 1));
    CHECK(is_subword(W(AB, "ab"), vp));
    CHECK_FALSE(is_subword(W(AB, "ab"), v));

    auto [v2, vp2] = lower_bound_witness(W(AB, "aa"));
    CHECK(v2.str() == "ba");
    CHECK(vp2.str() == "baa");

    CHECK_THROWS_AS(lower_bound_witness(Word(AB)), precondition_error);

    std::mt19937_64 rng(101);
    for (int i = 0; i < 60; ++i) {
        Word u = oracle::random_word(rng, ABC, 8);
        if (u.empty())
            continue;
        auto [w, wp] = lower_bound_witness(u);
        CHECK(sim_equiv(w, wp, static_cast<unsigned>(u.size()) - 1));
        CHECK(is_subword(u, wp));
        CHECK_FALSE(is_subword(u, w));
    }
}
