#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "fo2_brute.hpp"
#include "oracles.hpp"
#include "ptk/fo2.hpp"
#include "ptk/simon.hpp"

using namespace ptk;
using namespace ptk::fo2;

namespace {
const Alphabet AB("ab");
const Alphabet ABC("abc");

Word W(const Alphabet& a, std::string_view s) {
    return parse_word(a, s);
}

}  // namespace

TEST_CASE("formula parsing") {
    auto f = parse_formula("exists x (\"ab\" <= x & \"bc\" <= x & !(\"abc\" <= x))", ABC,
                           SolverMode::basic);
    CHECK(f->kind == Node::Kind::exists);
    CHECK(free_variables(f).empty());

    CHECK_THROWS_AS(parse_formula("exists x exists y exists z (x <= y)", AB, SolverMode::basic),
                    parse_error);
    CHECK_THROWS_AS(parse_formula("x in /(ab)*/", AB, SolverMode::basic), parse_error);
    CHECK_THROWS_AS(parse_formula("\"abc\" <= x", AB, SolverMode::basic), parse_error);
    CHECK_THROWS_AS(parse_formula("x <", AB, SolverMode::basic), parse_error);
    CHECK_THROWS_AS(parse_formula("x <= y y", AB, SolverMode::basic), parse_error);

    auto ext = parse_formula("forall x (x in /(a+b)*/ <-> exists y (y in /(ab)*/ & x <= y))",
                             AB, SolverMode::extended);
    CHECK(free_variables(ext).empty());

    auto open = parse_formula("\"ab\" <= x", AB, SolverMode::basic);
    CHECK(free_variables(open) == std::vector<std::string>{"x"});
}

TEST_CASE("elimination of basic atoms") {
    Dfa lang = eliminate(parse_formula("\"ab\" <= x", AB, SolverMode::basic), AB,
                         SolverMode::basic);
    CHECK(same_language(lang, up_word_dfa(W(AB, "ab"))));

    // Every word has a strict superword.
    Dfa all = eliminate(parse_formula("exists y (x < y)", AB, SolverMode::basic), AB,
                        SolverMode::basic);
    CHECK(is_universal(all));

    // Only the empty word has no strict subword.
    Dfa nonempty = eliminate(parse_formula("exists y (y < x)", AB, SolverMode::basic), AB,
                             SolverMode::basic);
    CHECK(same_language(nonempty, complement(word_dfa(Word(AB)))));
}

TEST_CASE("deciding sentences") {
    CHECK(decide(parse_formula("exists x (\"ab\" <= x & \"bc\" <= x & !(\"abc\" <= x))", ABC,
                               SolverMode::basic),
                 ABC, SolverMode::basic));
    CHECK(decide(parse_formula("exists x forall y (x <= y)", AB, SolverMode::basic), AB,
                 SolverMode::basic));
    CHECK_FALSE(decide(parse_formula("forall x forall y (x <= y | y <= x)", AB,
                                     SolverMode::basic),
                       AB, SolverMode::basic));
    CHECK(decide(parse_formula("forall x (x in /(a+b)*/ <-> exists y (y in /(ab)*/ & x <= y))",
                               AB, SolverMode::extended),
                 AB, SolverMode::extended));
    CHECK_THROWS_AS(decide(parse_formula("\"ab\" <= x", AB, SolverMode::basic), AB,
                           SolverMode::basic),
                    precondition_error);
}

TEST_CASE("normalization preserves the language") {
    const char* formulas[] = {
        "exists y (!(y <= \"ab\") & y # x)",
        "forall y (y <= \"ba\" -> !(x # y))",
        "exists y (y < x & !(y = \"a\"))",
        "!(exists y (x < y & y <= \"abab\"))",
    };
    for (const char* text : formulas) {
        auto f = parse_formula(text, AB, SolverMode::basic);
        ElimOptions plain, normalized;
        normalized.pre_normalize = true;
        Dfa l1 = eliminate(f, AB, SolverMode::basic, plain);
        Dfa l2 = eliminate(f, AB, SolverMode::basic, normalized);
        CHECK(same_language(l1, l2));
    }
}

TEST_CASE("extended mode needs testable operands for incomparability") {
    auto f = parse_formula("exists y (y in /a(a+b)*/ & x # y)", AB, SolverMode::extended);
    CHECK_THROWS_AS(eliminate(f, AB, SolverMode::extended), precondition_error);

    // With a testable operand the pre-image goes through.
    auto ok = parse_formula("exists y (y in /(a+b)*a(a+b)*/ & x # y)", AB,
                            SolverMode::extended);
    Dfa img = eliminate(ok, AB, SolverMode::extended);
    CHECK_FALSE(is_empty(img));
}

TEST_CASE("height ledger tracks bounds") {
    auto f = parse_formula("exists y (y <= \"ab\" & x # y) | !(\"ab\" <= x)", AB,
                           SolverMode::basic);
    ElimOptions opts;
    opts.measure_heights = true;
    auto ledger = height_ledger(f, AB, opts);
    REQUIRE(!ledger.entries.empty());
    bool saw_filter = false;
    for (const auto& e : ledger.entries) {
        if (e.rule == "constant-filter" && e.description.find("\"ab\" <= x") == 0) {
            saw_filter = true;
            CHECK(e.bound == 2);  // filter height equals the word length
        }
        if (e.measured)
            CHECK(*e.measured <= e.bound);
    }
    CHECK(saw_filter);

    // Negation keeps the bound of its operand.
    auto neg = parse_formula("!(\"ab\" <= x)", AB, SolverMode::basic);
    auto led2 = height_ledger(neg, AB, opts);
    REQUIRE(led2.entries.size() >= 2);
    CHECK(led2.entries.back().rule == "complement");
    CHECK(led2.entries.back().bound == 2);
    CHECK(led2.entries.back().measured == 2u);
}

TEST_CASE("ledger bound for the subword pre-image") {
    // Pre-image through < of a 2-bounded operand over two letters.
    auto f = parse_formula("exists y (y <= \"ab\" & x < y)", AB, SolverMode::basic);
    auto ledger = height_ledger(f, AB);
    bool seen = false;
    for (const auto& e : ledger.entries)
        if (e.rule == "preimage-below") {
            seen = true;
            // (k+1) * (f_k(bound of operand) + 1) with operand bound 3.
            std::uint64_t m = small_subword_bound(2, 3);
            CHECK(e.bound == 3 * (m + 1));
        }
    CHECK(seen);
}

TEST_CASE("random certified sentences agree with brute force") {
    auto universe = oracle::all_words(AB, 6);
    fo2_brute::SentenceGen gen(20240815);
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
        std::string text = gen.sentence();
        CAPTURE(text);
        Formula f = parse_formula(text, AB, SolverMode::basic);
        std::map<std::string, Word> env;
        bool brute = fo2_brute::eval_bounded(f, env, universe);
        ElimOptions opts;
        opts.measure_heights = true;
        HeightLedger ledger;
        bool exact = decide(f, AB, SolverMode::basic, opts, &ledger);
        CHECK(exact == brute);
        for (const auto& e : ledger.entries)
            if (e.measured)
                CHECK(*e.measured <= e.bound);
        ++checked;
    }
    CHECK(checked == 60);
}

TEST_CASE("open formulas agree with pointwise brute force") {
    auto universe = oracle::all_words(AB, 6);
    fo2_brute::SentenceGen gen(424242);
    for (int i = 0; i < 40; ++i) {
        // One free variable x, one bounded quantifier over y.
        std::string text = gen.bounded_quant("y", gen.constant(), gen.matrix("x", "y"));
        CAPTURE(text);
        Formula f = parse_formula(text, AB, SolverMode::basic);
        Dfa lang = eliminate(f, AB, SolverMode::basic);
        for (const auto& w : universe) {
            std::map<std::string, Word> env{{"x", w}};
            CHECK(lang.accepts(w) == fo2_brute::eval_bounded(f, env, universe));
        }
    }
}

TEST_CASE("intermediate languages in basic mode are piecewise-testable") {
    auto f = parse_formula(
        "exists y (y <= \"abab\" & x # y) & !(exists y (x < y & y <= \"bb\"))", AB,
        SolverMode::basic);
    ElimOptions opts;
    opts.measure_heights = true;
    auto ledger = height_ledger(f, AB, opts);
    for (const auto& e : ledger.entries) {
        if (e.measure_capped)
            continue;
        REQUIRE(e.measured.has_value());  // a measured value exists iff the language is testable
        CHECK(*e.measured <= e.bound);
        CHECK(is_n_pt(e.language, *e.measured));
        if (e.bound <= 8)
            CHECK(is_n_pt(e.language, static_cast<unsigned>(e.bound)));
    }
}
