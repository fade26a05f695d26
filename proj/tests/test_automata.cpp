#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "ptk/automata.hpp"
#include "ptk/automata_io.hpp"

using namespace ptk;

namespace {
const Alphabet AB("ab");

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

TEST_CASE("regex parsing and membership") {
    Nfa n = regex_to_nfa(AB, "(ab)*+(ba)*");
    CHECK(n.accepts(W(AB, "abab")));
    CHECK(n.accepts(W(AB, "baba")));
    CHECK(n.accepts(W(AB, "")));
    CHECK_FALSE(n.accepts(W(AB, "aab")));

    Nfa plus = regex_to_nfa(AB, "a(a)*(b)*");
    CHECK(plus.accepts(W(AB, "ab")));
    CHECK(plus.accepts(W(AB, "a")));
    CHECK_FALSE(plus.accepts(W(AB, "ba")));
    CHECK_FALSE(plus.accepts(W(AB, "")));

    CHECK(regex_to_nfa(AB, "_").accepts(W(AB, "")));
    CHECK_FALSE(regex_to_nfa(AB, "~").accepts(W(AB, "")));
    CHECK_THROWS_AS(regex_to_nfa(AB, "(a"), parse_error);
    CHECK_THROWS_AS(regex_to_nfa(AB, "a)"), parse_error);
}

TEST_CASE("determinize + minimize produce the canonical automaton") {
    Dfa d = canonical_dfa(regex_to_nfa(AB, "a(a)*(b)*"));
    CHECK(d.num_states == 4);  // start, a-run, b-run, sink
    CHECK(d.canonical);
    CHECK(d.accepts(W(AB, "aab")));
    CHECK_FALSE(d.accepts(W(AB, "ba")));

    // Idempotence, and stability of the canonical numbering.
    Dfa again = minimize(d);
    CHECK(again.num_states == d.num_states);
    CHECK(again.delta == d.delta);
    CHECK(again.finals == d.finals);
    CHECK(to_text(again) == to_text(d));
}

TEST_CASE("boolean operations agree with pointwise membership (randomized)") {
    std::mt19937_64 rng(42);
    auto words = oracle::all_words(AB, 6);
    for (int i = 0; i < 25; ++i) {
        Nfa n1 = random_nfa(rng, AB, 4, 0.18);
        Nfa n2 = random_nfa(rng, AB, 4, 0.18);
        Dfa d1 = canonical_dfa(n1);
        Dfa d2 = canonical_dfa(n2);
        Dfa u = union_dfa(d1, d2);
        Dfa i2 = intersect(d1, d2);
        Dfa df = difference(d1, d2);
        Dfa c = complement(d1);
        for (const auto& w : words) {
            bool m1 = d1.accepts(w), m2 = d2.accepts(w);
            CHECK(d1.accepts(w) == n1.accepts(w));
            CHECK(u.accepts(w) == (m1 || m2));
            CHECK(i2.accepts(w) == (m1 && m2));
            CHECK(df.accepts(w) == (m1 && !m2));
            CHECK(c.accepts(w) == !m1);
        }
        CHECK(same_language(complement(c), d1));
        CHECK(is_empty(intersect(d1, complement(d1))));
        CHECK(includes(d1, d1));
        CHECK(is_empty(difference(d1, d1)));
    }
}

TEST_CASE("emptiness, universality, inclusion") {
    Dfa all = canonical_dfa(regex_to_nfa(AB, "(a+b)*"));
    Dfa abstar = canonical_dfa(regex_to_nfa(AB, "(ab)*"));
    CHECK(is_universal(all));
    CHECK_FALSE(is_universal(abstar));
    CHECK(includes(all, abstar));
    CHECK_FALSE(includes(abstar, all));
    CHECK(is_empty(canonical_dfa(regex_to_nfa(AB, "~"))));
}

TEST_CASE("shortest word and shortest separator") {
    CHECK_FALSE(shortest_word(canonical_dfa(regex_to_nfa(AB, "~"))).has_value());
    auto w = shortest_word(canonical_dfa(regex_to_nfa(AB, "b(a+b)*a")));
    REQUIRE(w.has_value());
    CHECK(w->str() == "ba");

    Dfa du = down_word_dfa(W(AB, "ab"));
    Dfa dv = down_word_dfa(W(AB, "ba"));
    auto sep = shortest_separator(du, dv);
    REQUIRE(sep.has_value());
    CHECK(sep->size() == 2);
    CHECK_FALSE(shortest_separator(du, du).has_value());
}

TEST_CASE("word-derived automata") {
    Dfa d = word_dfa(W(AB, ""));
    CHECK(d.accepts(W(AB, "")));
    CHECK_FALSE(d.accepts(W(AB, "a")));

    Dfa down = down_word_dfa(W(AB, "ab"));
    for (const auto& w : oracle::all_words(AB, 4)) {
        bool expect = w.str() == "" || w.str() == "a" || w.str() == "b" || w.str() == "ab";
        CHECK(down.accepts(w) == expect);
    }
    CHECK(down_word_dfa(W(AB, "")).accepts(W(AB, "")));
    CHECK(down_word_dfa(W(AB, "")).num_states == 2);

    Dfa up = up_word_dfa(W(AB, "ab"));
    Dfa ref = canonical_dfa(regex_to_nfa(AB, "(a+b)*a(a+b)*b(a+b)*"));
    CHECK(same_language(up, ref));

    std::mt19937_64 rng(17);
    for (int i = 0; i < 40; ++i) {
        Word u = oracle::random_word(rng, AB, 9);
        CHECK(down_word_dfa(u).num_states == u.size() + 2);
    }
}

TEST_CASE("depth of an automaton") {
    // Single accepting state with a self-loop.
    Nfa loop(AB);
    loop.num_states = 1;
    loop.initials = {0};
    loop.finals = {0};
    loop.add_transition(0, 0, 0);
    CHECK(nfa_depth(loop) == 0);

    // A chain counts its transitions.
    Nfa chain(AB);
    chain.num_states = 4;
    chain.initials = {0};
    chain.finals = {3};
    for (State q = 0; q + 1 < 4; ++q)
        chain.add_transition(q, 0, q + 1);
    CHECK(nfa_depth(chain) == 3);

    // Productive part of the canonical automaton of a+b*.
    Dfa d = canonical_dfa(regex_to_nfa(AB, "a(a)*(b)*"));
    Nfa n = dfa_to_nfa(d);
    CHECK(nfa_depth(n) == 2);

    CHECK_THROWS_AS(nfa_depth(regex_to_nfa(AB, "~"), Caps{}), std::exception);
    Caps tiny;
    tiny.max_depth_states = 2;
    CHECK_THROWS_AS(nfa_depth(chain, tiny), cap_exceeded);
}

TEST_CASE("text round trip is lossless and deterministic") {
    Nfa n(AB);
    n.num_states = 3;
    n.initials = {0};
    n.finals = {1};
    n.add_transition(0, 0, 1);
    n.add_transition(1, 1, 2);
    n.add_transition(1, 0, 1);
    n.add_transition(2, Nfa::EPSILON, 0);

    std::string text = to_text(n);
    Nfa parsed = nfa_from_text(text);
    CHECK(to_text(parsed) == text);
    CHECK(same_language(canonical_dfa(parsed), canonical_dfa(n)));

    Dfa d = canonical_dfa(n);
    CHECK(to_text(d) == to_text(canonical_dfa(nfa_from_text(to_text(d)))));
    CHECK(to_dot(d).find("doublecircle") != std::string::npos);

    CHECK_THROWS_AS(nfa_from_text("states: 1\n"), parse_error);
    CHECK_THROWS_AS(nfa_from_text("alphabet: ab\nstates: 1\ntrans: 0 c 0\n"), parse_error);
    CHECK_THROWS_AS(nfa_from_text("alphabet: ab\nstates: 1\ninitial: 4\n"), parse_error);
}

TEST_CASE("grammar parsing") {
    Cfg g = cfg_from_text(AB, "S -> a S b | ab | _\n");
    CHECK(g.nonterminals.size() == 1);
    CHECK(g.productions.size() == 3);
    CHECK(g.max_rhs_len() == 3);
    CHECK_THROWS_AS(cfg_from_text(AB, "S -> T\nU => x\n"), parse_error);
    CHECK_THROWS_AS(cfg_from_text(AB, "S ->\n"), parse_error);
}
