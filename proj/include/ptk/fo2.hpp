#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ptk/automata.hpp"
#include "ptk/caps.hpp"
#include "ptk/words.hpp"

namespace ptk::fo2 {

/// Binary relations of the subword signature. `below_eq` is rewritten
/// into (below or equal) before elimination; the strict four partition
/// every pair of words.
enum class Rel { below_eq, below, above, equal, incomparable };

const char* rel_name(Rel r);

/// Whether regular-expression predicates are admitted. Without them
/// every definable language is piecewise-testable and height bounds
/// can be tracked; with them the procedure still runs but incomparable
/// pre-images require the operand to happen to be piecewise-testable.
enum class SolverMode { basic, extended };

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Term {
    bool is_var = false;
    std::string var;
    std::optional<Word> constant;
};

struct Node {
    enum class Kind {
        truth,     // constant true/false (value)
        atom_rel,  // lhs rel rhs
        member,    // term in language
        negation,
        conjunction,
        disjunction,
        exists,
        forall,
    };

    Kind kind;
    bool value = false;  // truth
    Term lhs, rhs;       // atom_rel / member (lhs only)
    Rel rel = Rel::below_eq;
    std::shared_ptr<const Dfa> language;  // member
    std::string language_text;            // member, for diagnostics
    std::optional<std::uint64_t> height_bound;  // member: tracked ledger bound
    Formula a, b;                         // connectives
    std::string qvar;                     // quantifiers

    /// Compact source-like rendering, used in ledgers and errors.
    std::string str() const;
};

Formula make_truth(bool value);
Formula make_rel(Term lhs, Rel rel, Term rhs);
Formula make_member(Term t, std::shared_ptr<const Dfa> lang, std::string text,
                    std::optional<std::uint64_t> height_bound = std::nullopt);
Formula make_not(Formula f);
Formula make_and(Formula a, Formula b);
Formula make_or(Formula a, Formula b);
Formula make_exists(std::string var, Formula f);
Formula make_forall(std::string var, Formula f);

/// Parses the surface syntax: `exists x (...)`, `forall y (...)`,
/// connectives `!`, `&`, `|`, `->`, `<->`, relations `<=` `<` `>` `=`
/// `#`, double-quoted constants, and (extended mode only) membership
/// `x in /regex/`. At most two distinct variable names may occur.
Formula parse_formula(std::string_view text, const Alphabet& a, SolverMode mode);

/// Free variables, sorted.
std::vector<std::string> free_variables(const Formula& f);

/// Negation normal form: negations are pushed onto atoms and then
/// eliminated (complementing member languages, expanding a negated
/// relation into the other three of the partition).
Formula nnf(const Formula& f);

/// One record per elimination step, carrying the symbolic height bound
/// and, when requested and affordable, the measured height of the
/// produced language.
struct LedgerEntry {
    int id = 0;
    std::string description;
    std::string rule;
    std::vector<std::uint64_t> input_bounds;
    std::uint64_t bound = 0;
    Dfa language;
    std::optional<unsigned> measured;
    bool measure_capped = false;
};

struct HeightLedger {
    std::vector<LedgerEntry> entries;
};

struct ElimOptions {
    bool record_ledger = false;
    bool measure_heights = false;  // fill LedgerEntry::measured via exact heights
    bool pre_normalize = false;    // run nnf() on the whole formula first
    Caps caps{};
};

/// The language of the formula's single free variable (all of A* or
/// empty for closed formulas), as a canonical DFA.
Dfa eliminate(const Formula& f, const Alphabet& a, SolverMode mode, const ElimOptions& opts = {},
              HeightLedger* ledger = nullptr);

/// Truth of a closed formula.
bool decide(const Formula& f, const Alphabet& a, SolverMode mode, const ElimOptions& opts = {},
            HeightLedger* ledger = nullptr);

/// Runs the elimination in basic mode purely for its bound bookkeeping.
HeightLedger height_ledger(const Formula& f, const Alphabet& a, const ElimOptions& opts = {});

}  // namespace ptk::fo2
