#include "ptk/fo2.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "ptk/automata_io.hpp"
#include "ptk/closures.hpp"
#include "ptk/incomparability.hpp"
#include "ptk/simon.hpp"

namespace ptk::fo2 {

const char* rel_name(Rel r) {
    switch (r) {
        case Rel::below_eq: return "<=";
        case Rel::below: return "<";
        case Rel::above: return ">";
        case Rel::equal: return "=";
        case Rel::incomparable: return "#";
    }
    return "?";
}

namespace {

std::string term_str(const Term& t) {
    if (t.is_var)
        return t.var;
    return "\"" + t.constant->str() + "\"";
}

}  // namespace

std::string Node::str() const {
    switch (kind) {
        case Kind::truth:
            return value ? "true" : "false";
        case Kind::atom_rel:
            return term_str(lhs) + " " + rel_name(rel) + " " + term_str(rhs);
        case Kind::member:
            return term_str(lhs) + " in /" + language_text + "/";
        case Kind::negation:
            return "!(" + a->str() + ")";
        case Kind::conjunction:
            return "(" + a->str() + " & " + b->str() + ")";
        case Kind::disjunction:
            return "(" + a->str() + " | " + b->str() + ")";
        case Kind::exists:
            return "exists " + qvar + " (" + a->str() + ")";
        case Kind::forall:
            return "forall " + qvar + " (" + a->str() + ")";
    }
    return "?";
}

Formula make_truth(bool value) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::truth;
    n->value = value;
    return n;
}

Formula make_rel(Term lhs, Rel rel, Term rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::atom_rel;
    n->lhs = std::move(lhs);
    n->rel = rel;
    n->rhs = std::move(rhs);
    return n;
}

Formula make_member(Term t, std::shared_ptr<const Dfa> lang, std::string text,
                    std::optional<std::uint64_t> height_bound) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::member;
    n->lhs = std::move(t);
    n->language = std::move(lang);
    n->language_text = std::move(text);
    n->height_bound = height_bound;
    return n;
}

Formula make_not(Formula f) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::negation;
    n->a = std::move(f);
    return n;
}

Formula make_and(Formula a, Formula b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::conjunction;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

Formula make_or(Formula a, Formula b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::disjunction;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

Formula make_exists(std::string var, Formula f) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::exists;
    n->qvar = std::move(var);
    n->a = std::move(f);
    return n;
}

Formula make_forall(std::string var, Formula f) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::forall;
    n->qvar = std::move(var);
    n->a = std::move(f);
    return n;
}

// -- parsing ---------------------------------------------------------------

namespace {

struct Lexer {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    bool eat(std::string_view tok) {
        skip_ws();
        if (text.substr(pos, tok.size()) == tok) {
            // Keywords must not run into identifier characters.
            if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
                std::size_t end = pos + tok.size();
                if (end < text.size() &&
                    (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
                    return false;
            }
            pos += tok.size();
            return true;
        }
        return false;
    }

    std::optional<std::string> ident() {
        skip_ws();
        if (pos >= text.size())
            return std::nullopt;
        char c = text[pos];
        if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_')
            return std::nullopt;
        std::size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                     text[pos] == '_'))
            ++pos;
        std::string name(text.substr(start, pos - start));
        if (name == "exists" || name == "forall" || name == "in") {
            pos = start;
            return std::nullopt;
        }
        return name;
    }

    std::string quoted() {
        skip_ws();
        if (pos >= text.size() || text[pos] != '"')
            throw parse_error("formula: expected a quoted constant");
        std::size_t end = text.find('"', pos + 1);
        if (end == std::string_view::npos)
            throw parse_error("formula: unterminated constant");
        std::string body(text.substr(pos + 1, end - pos - 1));
        pos = end + 1;
        return body;
    }

    std::string regex_literal() {
        skip_ws();
        if (pos >= text.size() || text[pos] != '/')
            throw parse_error("formula: expected /regex/ after 'in'");
        std::size_t end = text.find('/', pos + 1);
        if (end == std::string_view::npos)
            throw parse_error("formula: unterminated regex literal");
        std::string body(text.substr(pos + 1, end - pos - 1));
        pos = end + 1;
        return body;
    }
};

struct FormulaParser {
    Lexer lex;
    const Alphabet& alphabet;
    SolverMode mode;
    std::set<std::string> vars_seen;

    FormulaParser(std::string_view text, const Alphabet& a, SolverMode m)
        : lex{text}, alphabet(a), mode(m) {}

    Formula parse() {
        Formula f = parse_iff();
        lex.skip_ws();
        if (lex.pos != lex.text.size())
            throw parse_error("formula: trailing input at position " + std::to_string(lex.pos));
        return f;
    }

    Formula parse_iff() {
        Formula f = parse_implies();
        while (lex.eat("<->")) {
            Formula g = parse_implies();
            f = make_and(make_or(make_not(f), g), make_or(make_not(g), f));
        }
        return f;
    }

    Formula parse_implies() {
        Formula f = parse_or();
        if (lex.eat("->")) {
            Formula g = parse_implies();  // right-associative
            return make_or(make_not(f), g);
        }
        return f;
    }

    Formula parse_or() {
        Formula f = parse_and();
        while (lex.eat("|"))
            f = make_or(f, parse_and());
        return f;
    }

    Formula parse_and() {
        Formula f = parse_unary();
        while (lex.eat("&"))
            f = make_and(f, parse_unary());
        return f;
    }

    std::string quantified_var() {
        auto v = lex.ident();
        if (!v)
            throw parse_error("formula: expected a variable after quantifier");
        note_var(*v);
        return *v;
    }

    void note_var(const std::string& v) {
        vars_seen.insert(v);
        if (vars_seen.size() > 2) {
            std::string names;
            for (const auto& n : vars_seen)
                names += (names.empty() ? "" : ", ") + n;
            throw parse_error("formula: more than two variables occur (" + names + ")");
        }
    }

    Formula parse_unary() {
        if (lex.eat("!"))
            return make_not(parse_unary());
        if (lex.eat("exists")) {
            std::string v = quantified_var();
            return make_exists(v, parse_unary());
        }
        if (lex.eat("forall")) {
            std::string v = quantified_var();
            return make_forall(v, parse_unary());
        }
        lex.skip_ws();
        if (lex.pos < lex.text.size() && lex.text[lex.pos] == '(') {
            ++lex.pos;
            Formula f = parse_iff();
            if (!lex.eat(")"))
                throw parse_error("formula: missing ')'");
            return f;
        }
        return parse_atom();
    }

    Term parse_term() {
        lex.skip_ws();
        if (lex.pos < lex.text.size() && lex.text[lex.pos] == '"') {
            Term t;
            t.is_var = false;
            t.constant = parse_word(alphabet, lex.quoted());
            return t;
        }
        auto v = lex.ident();
        if (!v)
            throw parse_error("formula: expected a variable or a quoted constant");
        note_var(*v);
        Term t;
        t.is_var = true;
        t.var = *v;
        return t;
    }

    Formula parse_atom() {
        Term lhs = parse_term();
        if (lex.eat("in")) {
            if (mode == SolverMode::basic)
                throw parse_error("formula: regular predicates are not allowed in basic mode");
            if (!lhs.is_var)
                throw parse_error("formula: membership needs a variable on the left");
            std::string re = lex.regex_literal();
            auto lang = std::make_shared<const Dfa>(canonical_dfa(regex_to_nfa(alphabet, re)));
            return make_member(std::move(lhs), std::move(lang), re);
        }
        Rel rel;
        if (lex.eat("<->"))
            throw parse_error("formula: unexpected '<->' in atom");
        if (lex.eat("<="))
            rel = Rel::below_eq;
        else if (lex.eat("<"))
            rel = Rel::below;
        else if (lex.eat(">"))
            rel = Rel::above;
        else if (lex.eat("="))
            rel = Rel::equal;
        else if (lex.eat("#"))
            rel = Rel::incomparable;
        else
            throw parse_error("formula: expected a relation (<=, <, >, =, #)");
        Term rhs = parse_term();
        return make_rel(std::move(lhs), rel, std::move(rhs));
    }
};

}  // namespace

Formula parse_formula(std::string_view text, const Alphabet& a, SolverMode mode) {
    FormulaParser p(text, a, mode);
    return p.parse();
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& free) {
    switch (f->kind) {
        case Node::Kind::truth:
            return;
        case Node::Kind::atom_rel:
            if (f->lhs.is_var && !bound.count(f->lhs.var))
                free.insert(f->lhs.var);
            if (f->rhs.is_var && !bound.count(f->rhs.var))
                free.insert(f->rhs.var);
            return;
        case Node::Kind::member:
            if (f->lhs.is_var && !bound.count(f->lhs.var))
                free.insert(f->lhs.var);
            return;
        case Node::Kind::negation:
            collect_free(f->a, bound, free);
            return;
        case Node::Kind::conjunction:
        case Node::Kind::disjunction:
            collect_free(f->a, bound, free);
            collect_free(f->b, bound, free);
            return;
        case Node::Kind::exists:
        case Node::Kind::forall: {
            bool was_bound = bound.count(f->qvar) > 0;
            bound.insert(f->qvar);
            collect_free(f->a, bound, free);
            if (!was_bound)
                bound.erase(f->qvar);
            return;
        }
    }
}

}  // namespace

std::vector<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound, free;
    collect_free(f, bound, free);
    return {free.begin(), free.end()};
}

namespace {

const Rel kStrictRels[4] = {Rel::below, Rel::above, Rel::equal, Rel::incomparable};

Formula negated_rel_expansion(const Term& lhs, Rel rel, const Term& rhs) {
    // The four strict relations partition all pairs; a negation is the
    // disjunction of the other three. A negated non-strict relation
    // first splits into (strict or equal).
    std::set<Rel> others;
    if (rel == Rel::below_eq) {
        others = {Rel::above, Rel::incomparable};
    } else {
        for (Rel r : kStrictRels)
            if (r != rel)
                others.insert(r);
    }
    Formula out;
    for (Rel r : others) {
        Formula atom = make_rel(lhs, r, rhs);
        out = out ? make_or(out, atom) : atom;
    }
    return out;
}

Formula nnf_rec(const Formula& f, bool neg) {
    switch (f->kind) {
        case Node::Kind::truth:
            return make_truth(f->value != neg);
        case Node::Kind::atom_rel:
            if (!neg)
                return f;
            return negated_rel_expansion(f->lhs, f->rel, f->rhs);
        case Node::Kind::member:
            if (!neg)
                return f;
            // Complementation preserves height, so the tracked bound
            // carries over.
            return make_member(f->lhs,
                               std::make_shared<const Dfa>(complement(*f->language)),
                               "!(" + f->language_text + ")", f->height_bound);
        case Node::Kind::negation:
            return nnf_rec(f->a, !neg);
        case Node::Kind::conjunction: {
            Formula a = nnf_rec(f->a, neg), b = nnf_rec(f->b, neg);
            return neg ? make_or(a, b) : make_and(a, b);
        }
        case Node::Kind::disjunction: {
            Formula a = nnf_rec(f->a, neg), b = nnf_rec(f->b, neg);
            return neg ? make_and(a, b) : make_or(a, b);
        }
        case Node::Kind::exists: {
            Formula body = nnf_rec(f->a, neg);
            return neg ? make_forall(f->qvar, body) : make_exists(f->qvar, body);
        }
        case Node::Kind::forall: {
            Formula body = nnf_rec(f->a, neg);
            return neg ? make_exists(f->qvar, body) : make_forall(f->qvar, body);
        }
    }
    throw error("nnf: unreachable");
}

}  // namespace

Formula nnf(const Formula& f) {
    return nnf_rec(f, false);
}

// -- elimination -------------------------------------------------------------

namespace {

constexpr std::uint64_t kSaturated = ~std::uint64_t(0);

std::uint64_t bound_f(unsigned k, std::uint64_t n) {
    if (n > 1'000'000)
        return kSaturated;
    return small_subword_bound(k, static_cast<unsigned>(n));
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return (a == kSaturated || b == kSaturated || a + b < a) ? kSaturated : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == kSaturated || b == kSaturated)
        return kSaturated;
    if (a != 0 && b > kSaturated / a)
        return kSaturated;
    return a * b;
}

Rel flip(Rel r) {
    switch (r) {
        case Rel::below: return Rel::above;
        case Rel::above: return Rel::below;
        default: return r;  // equal / incomparable are symmetric
    }
}

std::mutex g_height_cache_mutex;
std::map<std::string, std::optional<unsigned>> g_height_cache;

std::optional<unsigned> cached_height(const Dfa& canonical, const Caps& caps) {
    std::string key = to_text(canonical);
    {
        std::lock_guard lock(g_height_cache_mutex);
        auto it = g_height_cache.find(key);
        if (it != g_height_cache.end())
            return it->second;
    }
    auto h = pt_height_dfa(canonical, caps);
    std::lock_guard lock(g_height_cache_mutex);
    return g_height_cache.try_emplace(std::move(key), h).first->second;
}

struct Elim {
    const Alphabet& alphabet;
    SolverMode mode;
    const ElimOptions& opts;
    HeightLedger* ledger;
    int next_id = 0;

    struct Result {
        Dfa lang;
        std::uint64_t bound;
    };

    void record(const std::string& desc, const std::string& rule,
                std::vector<std::uint64_t> inputs, std::uint64_t bound, const Dfa& lang) {
        if (!ledger)
            return;
        LedgerEntry e{.id = next_id++,
                      .description = desc.size() > 96 ? desc.substr(0, 93) + "..." : desc,
                      .rule = rule,
                      .input_bounds = std::move(inputs),
                      .bound = bound,
                      .language = lang,
                      .measured = std::nullopt,
                      .measure_capped = false};
        if (opts.measure_heights) {
            try {
                e.measured = cached_height(e.language, opts.caps);
            } catch (const cap_exceeded&) {
                e.measure_capped = true;
            }
        }
        ledger->entries.push_back(std::move(e));
    }

    // Language and height bound of { x : x REL w } (or { x : w REL x }
    // when var_on_left is false).
    Result constant_atom(Rel rel, const Word& w, bool var_on_left) {
        const std::uint64_t len = w.size();
        const bool multi = alphabet.size() >= 2;
        if (!var_on_left) {
            switch (rel) {
                case Rel::below_eq: return {up_word_dfa(w), len};
                case Rel::below: return {strict_up(dfa_to_nfa(word_dfa(w))), sat_add(len, 1)};
                case Rel::above: return {strict_down(dfa_to_nfa(word_dfa(w))), len};
                case Rel::equal: return {word_dfa(w), sat_add(len, 1)};
                case Rel::incomparable:
                    return {incomparability_singleton(w), multi ? len : 0};
            }
        }
        switch (rel) {
            case Rel::below_eq: return {down_word_dfa(w), sat_add(len, 1)};
            case Rel::below: return {strict_down(dfa_to_nfa(word_dfa(w))), len};
            case Rel::above: return {strict_up(dfa_to_nfa(word_dfa(w))), sat_add(len, 1)};
            case Rel::equal: return {word_dfa(w), sat_add(len, 1)};
            case Rel::incomparable:
                return {incomparability_singleton(w), multi ? len : 0};
        }
        throw error("constant_atom: unreachable");
    }

    Result process(const Formula& f) {
        switch (f->kind) {
            case Node::Kind::truth: {
                Result r{f->value ? universal_dfa(alphabet) : empty_dfa(alphabet), 0};
                record(f->str(), "constant", {}, 0, r.lang);
                return r;
            }
            case Node::Kind::atom_rel: {
                if (!f->lhs.is_var && !f->rhs.is_var) {
                    WordRelation rel = compare(*f->lhs.constant, *f->rhs.constant);
                    bool truth = false;
                    switch (f->rel) {
                        case Rel::below_eq:
                            truth = rel == WordRelation::equal ||
                                    rel == WordRelation::strictly_below;
                            break;
                        case Rel::below: truth = rel == WordRelation::strictly_below; break;
                        case Rel::above: truth = rel == WordRelation::strictly_above; break;
                        case Rel::equal: truth = rel == WordRelation::equal; break;
                        case Rel::incomparable: truth = rel == WordRelation::incomparable; break;
                    }
                    Result r{truth ? universal_dfa(alphabet) : empty_dfa(alphabet), 0};
                    record(f->str(), "constant-pair", {}, 0, r.lang);
                    return r;
                }
                if (f->lhs.is_var && f->rhs.is_var) {
                    if (f->lhs.var != f->rhs.var)
                        throw precondition_error(
                            "eliminate: two free variables in " + f->str());
                    bool truth = f->rel == Rel::below_eq || f->rel == Rel::equal;
                    Result r{truth ? universal_dfa(alphabet) : empty_dfa(alphabet), 0};
                    record(f->str(), "same-variable", {}, 0, r.lang);
                    return r;
                }
                bool var_on_left = f->lhs.is_var;
                const Word& w = var_on_left ? *f->rhs.constant : *f->lhs.constant;
                Result r = constant_atom(f->rel, w, var_on_left);
                record(f->str(), "constant-filter", {}, r.bound, r.lang);
                return r;
            }
            case Node::Kind::member: {
                if (!f->lhs.is_var) {
                    bool truth = f->language->accepts(*f->lhs.constant);
                    return {truth ? universal_dfa(alphabet) : empty_dfa(alphabet), 0};
                }
                return {*f->language, f->height_bound.value_or(kSaturated)};
            }
            case Node::Kind::negation: {
                Result r = process(f->a);
                Result out{complement(r.lang), r.bound};
                record(f->str(), "complement", {r.bound}, out.bound, out.lang);
                return out;
            }
            case Node::Kind::conjunction:
            case Node::Kind::disjunction: {
                Result ra = process(f->a);
                Result rb = process(f->b);
                bool conj = f->kind == Node::Kind::conjunction;
                Result out{conj ? intersect(ra.lang, rb.lang) : union_dfa(ra.lang, rb.lang),
                           std::max(ra.bound, rb.bound)};
                record(f->str(), conj ? "intersection" : "union", {ra.bound, rb.bound}, out.bound,
                       out.lang);
                return out;
            }
            case Node::Kind::forall:
                // Classical dual; the elimination itself only handles
                // the existential quantifier.
                return process(make_not(make_exists(f->qvar, make_not(f->a))));
            case Node::Kind::exists:
                return process_exists(f);
        }
        throw error("eliminate: unreachable");
    }

    // Replace nested quantified subformulas by membership atoms over
    // their one free variable (or truth constants when closed).
    Formula fold_inner_quantifiers(const Formula& f) {
        switch (f->kind) {
            case Node::Kind::truth:
            case Node::Kind::atom_rel:
            case Node::Kind::member:
                return f;
            case Node::Kind::negation:
                return make_not(fold_inner_quantifiers(f->a));
            case Node::Kind::conjunction:
                return make_and(fold_inner_quantifiers(f->a), fold_inner_quantifiers(f->b));
            case Node::Kind::disjunction:
                return make_or(fold_inner_quantifiers(f->a), fold_inner_quantifiers(f->b));
            case Node::Kind::exists:
            case Node::Kind::forall: {
                auto fv = free_variables(f);
                Result sub = process(f);
                if (fv.empty())
                    return make_truth(is_universal(sub.lang));
                Term t;
                t.is_var = true;
                t.var = fv[0];
                return make_member(t, std::make_shared<const Dfa>(std::move(sub.lang)),
                                   f->str(), sub.bound);
            }
        }
        throw error("fold_inner_quantifiers: unreachable");
    }

    // Rewrites after inner folding, working towards a positive matrix:
    //  - non-strict var/var atoms split into (strict or equal),
    //  - constant atoms compile into membership atoms,
    //  - same-variable and constant-only atoms become truth constants,
    //  - var/var atoms are normalized to (outer REL inner).
    Formula normalize_matrix(const Formula& f, const std::string& inner) {
        switch (f->kind) {
            case Node::Kind::truth:
            case Node::Kind::member:
                return f;
            case Node::Kind::negation:
                return make_not(normalize_matrix(f->a, inner));
            case Node::Kind::conjunction:
                return make_and(normalize_matrix(f->a, inner), normalize_matrix(f->b, inner));
            case Node::Kind::disjunction:
                return make_or(normalize_matrix(f->a, inner), normalize_matrix(f->b, inner));
            case Node::Kind::exists:
            case Node::Kind::forall:
                throw error("normalize_matrix: quantifier should have been folded (bug)");
            case Node::Kind::atom_rel: {
                if (!f->lhs.is_var && !f->rhs.is_var) {
                    Result r = process(f);  // constant pair: evaluates
                    return make_truth(is_universal(r.lang));
                }
                if (f->lhs.is_var && f->rhs.is_var) {
                    if (f->lhs.var == f->rhs.var)
                        return make_truth(f->rel == Rel::below_eq || f->rel == Rel::equal);
                    if (f->rel == Rel::below_eq) {
                        Formula strict = make_rel(f->lhs, Rel::below, f->rhs);
                        Formula eq = make_rel(f->lhs, Rel::equal, f->rhs);
                        return make_or(normalize_matrix(strict, inner),
                                       normalize_matrix(eq, inner));
                    }
                    if (f->lhs.var == inner)  // put the quantified variable on the right
                        return make_rel(f->rhs, flip(f->rel), f->lhs);
                    return f;
                }
                // Variable against constant: compile the constant away.
                bool var_on_left = f->lhs.is_var;
                const Term& vt = var_on_left ? f->lhs : f->rhs;
                const Word& w = var_on_left ? *f->rhs.constant : *f->lhs.constant;
                Result r = constant_atom(f->rel, w, var_on_left);
                record(f->str(), "constant-filter", {}, r.bound, r.lang);
                return make_member(vt, std::make_shared<const Dfa>(std::move(r.lang)),
                                   f->str(), r.bound);
            }
        }
        throw error("normalize_matrix: unreachable");
    }

    Result process_exists(const Formula& f) {
        const std::string& v = f->qvar;
        Formula body = fold_inner_quantifiers(f->a);
        body = normalize_matrix(body, v);
        body = nnf(body);
        // nnf may reintroduce non-strict relations when expanding a
        // negated strict one; normalize once more (no-op otherwise).
        body = normalize_matrix(body, v);
        body = nnf(body);

        std::vector<std::vector<Formula>> disjuncts = to_dnf(body);

        Result out{empty_dfa(alphabet), 0};
        bool first = true;
        for (const auto& conj : disjuncts) {
            auto r = eval_disjunct(conj, v, f->str());
            if (!r)
                continue;  // unsatisfiable conjunct
            if (first) {
                out = std::move(*r);
                first = false;
            } else {
                out.lang = union_dfa(out.lang, r->lang);
                out.bound = std::max(out.bound, r->bound);
            }
        }
        record(f->str(), "exists", {}, out.bound, out.lang);
        return out;
    }

    std::vector<std::vector<Formula>> to_dnf(const Formula& f) {
        switch (f->kind) {
            case Node::Kind::disjunction: {
                auto a = to_dnf(f->a);
                auto b = to_dnf(f->b);
                a.insert(a.end(), b.begin(), b.end());
                return a;
            }
            case Node::Kind::conjunction: {
                auto a = to_dnf(f->a);
                auto b = to_dnf(f->b);
                std::vector<std::vector<Formula>> out;
                for (const auto& x : a)
                    for (const auto& y : b) {
                        std::vector<Formula> conj = x;
                        conj.insert(conj.end(), y.begin(), y.end());
                        out.push_back(std::move(conj));
                    }
                return out;
            }
            default:
                return {{f}};
        }
    }

    // Evaluates one conjunction of literals under exists(v); nullopt
    // marks an unsatisfiable combination of relations.
    std::optional<Result> eval_disjunct(const std::vector<Formula>& conj, const std::string& v,
                                        const std::string& context) {
        std::optional<Result> outer;     // conjunction of x-constraints
        std::optional<Result> inner;     // conjunction of v-constraints
        std::set<Rel> rels;
        auto meet = [&](std::optional<Result>& acc, Result r) {
            if (!acc)
                acc = std::move(r);
            else
                acc = Result{intersect(acc->lang, r.lang), std::max(acc->bound, r.bound)};
        };
        for (const auto& lit : conj) {
            switch (lit->kind) {
                case Node::Kind::truth:
                    if (!lit->value)
                        return std::nullopt;
                    break;
                case Node::Kind::member: {
                    Result r = process(lit);
                    if (lit->lhs.var == v)
                        meet(inner, std::move(r));
                    else
                        meet(outer, std::move(r));
                    break;
                }
                case Node::Kind::atom_rel:
                    rels.insert(lit->rel);  // normalized to (x REL v)
                    break;
                default:
                    throw error("eval_disjunct: non-literal survived normalization (bug)");
            }
        }
        if (rels.size() >= 2)
            return std::nullopt;  // distinct relations on one pair exclude each other

        Result y = inner ? std::move(*inner) : Result{universal_dfa(alphabet), 0};
        Result pre{empty_dfa(alphabet), 0};
        if (rels.empty()) {
            pre = Result{is_empty(y.lang) ? empty_dfa(alphabet) : universal_dfa(alphabet), 0};
            record(context, "exists-nonempty", {y.bound}, 0, pre.lang);
        } else {
            const unsigned k = alphabet.size();
            switch (*rels.begin()) {
                case Rel::equal:
                    pre = std::move(y);
                    break;
                case Rel::below: {
                    std::uint64_t b =
                        sat_mul(k + 1, sat_add(bound_f(k, y.bound), 1));
                    pre = Result{strict_down(dfa_to_nfa(y.lang)), b};
                    record(context, "preimage-below", {y.bound}, b, pre.lang);
                    break;
                }
                case Rel::above: {
                    std::uint64_t b = sat_add(bound_f(k, y.bound), 1);
                    pre = Result{strict_up(dfa_to_nfa(y.lang)), b};
                    record(context, "preimage-above", {y.bound}, b, pre.lang);
                    break;
                }
                case Rel::incomparable: {
                    auto n = cached_height(y.lang.canonical ? y.lang : minimize(y.lang),
                                           opts.caps);
                    if (!n)
                        throw precondition_error(
                            "eliminate: incomparability pre-image needs a piecewise-testable "
                            "operand; the language of the inner variable in " + context +
                            " is not");
                    std::uint64_t b = sat_add(bound_f(k, y.bound), 1);
                    pre = Result{I_of_pt(y.lang, *n, opts.caps), b};
                    record(context, "preimage-incomparable", {y.bound}, b, pre.lang);
                    break;
                }
                case Rel::below_eq:
                    throw error("eval_disjunct: non-strict relation survived (bug)");
            }
        }
        if (outer)
            return Result{intersect(outer->lang, pre.lang), std::max(outer->bound, pre.bound)};
        return pre;
    }
};

}  // namespace

Dfa eliminate(const Formula& f, const Alphabet& a, SolverMode mode, const ElimOptions& opts,
              HeightLedger* ledger) {
    auto fv = free_variables(f);
    if (fv.size() > 1)
        throw precondition_error("eliminate: formula has more than one free variable");
    Formula g = opts.pre_normalize ? nnf(f) : f;
    Elim e{a, mode, opts, ledger, 0};
    return e.process(g).lang;
}

bool decide(const Formula& f, const Alphabet& a, SolverMode mode, const ElimOptions& opts,
            HeightLedger* ledger) {
    if (!free_variables(f).empty())
        throw precondition_error("decide: formula has free variables");
    return is_universal(eliminate(f, a, mode, opts, ledger));
}

HeightLedger height_ledger(const Formula& f, const Alphabet& a, const ElimOptions& opts) {
    HeightLedger ledger;
    ElimOptions o = opts;
    o.record_ledger = true;
    eliminate(f, a, SolverMode::basic, o, &ledger);
    return ledger;
}

}  // namespace ptk::fo2
