// ptk -- command-line front end for the subword toolkit.
//
// Every subcommand is a thin adapter over the library; reports are
// deterministic (timings are opt-in and kept out of the canonical
// section).

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptk/automata_io.hpp"
#include "ptk/closures.hpp"
#include "ptk/fo2.hpp"
#include "ptk/incomparability.hpp"
#include "ptk/simon.hpp"

namespace {

using namespace ptk;

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kParse = 3,
    kCap = 4,
    kPrecondition = 5,
};

struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> fields;

    void add(std::string key, std::string value) {
        fields.emplace_back(std::move(key), std::move(value));
    }
    void add(std::string key, std::uint64_t value) { add(std::move(key), std::to_string(value)); }
    void add_bool(std::string key, bool value) { add(std::move(key), value ? "true" : "false"); }

    std::string text() const {
        std::ostringstream out;
        out << "command: " << command << "\n";
        for (const auto& [k, v] : fields) {
            if (v.find('\n') == std::string::npos) {
                out << k << ": " << v << "\n";
            } else {
                out << k << ":\n";
                std::istringstream lines(v);
                std::string line;
                while (std::getline(lines, line))
                    out << "  " << line << "\n";
            }
        }
        return out.str();
    }

    std::string json() const {
        nlohmann::ordered_json j;
        j["command"] = command;
        for (const auto& [k, v] : fields)
            j[k] = v;
        return j.dump(2) + "\n";
    }
};

struct Common {
    std::string alphabet_letters;
    std::string format = "text";
    std::string out_path;
    std::string dot_path;
    bool timing = false;
    Caps caps;

    Alphabet alphabet() const {
        if (alphabet_letters.empty())
            throw parse_error("an alphabet is required (--alphabet or PTK_ALPHABET)");
        return Alphabet(alphabet_letters);
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out)
        throw parse_error("cannot write file: " + path);
    out << content;
}

std::string word_text(const Word& w) {
    return w.empty() ? "_" : w.str();
}

// Input selector used by closure/dproduct/incomp subcommands: a file
// holding an automaton or a grammar, or an inline regex.
struct LangInput {
    std::string in_path;
    std::string regex;

    bool is_cfg(const std::string& content) const {
        return content.find("->") != std::string::npos &&
               content.find("alphabet:") == std::string::npos;
    }
};

Nfa load_nfa(const LangInput& in, const Alphabet& a) {
    if (!in.regex.empty())
        return regex_to_nfa(a, in.regex);
    std::string content = read_file(in.in_path);
    if (in.is_cfg(content))
        throw parse_error("this operation takes an automaton or --regex, not a grammar");
    Nfa n = nfa_from_text(content);
    detail::require_same_alphabet(n.alphabet, a, "input automaton");
    return n;
}

void emit_automaton(Report& rep, const Common& common, const Dfa& d, const char* key = "automaton") {
    rep.add("states", d.num_states);
    if (!common.out_path.empty()) {
        write_file(common.out_path, to_text(d));
        rep.add("out", common.out_path);
    } else {
        rep.add(key, to_text(d));
    }
    if (!common.dot_path.empty()) {
        write_file(common.dot_path, to_dot(d));
        rep.add("dot", common.dot_path);
    }
}

void add_measured_height(Report& rep, const Dfa& d, const Caps& caps) {
    try {
        auto h = pt_height_dfa(d, caps);
        rep.add("height_measured", h ? std::to_string(*h) : "not-piecewise-testable");
    } catch (const cap_exceeded&) {
        rep.add("height_measured", "capped");
    }
}

int run(const std::vector<std::string>& args, std::ostream& out);

int run_batch(const std::string& path, const Common& common, std::ostream& out) {
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open batch file: " + path);
    std::string line;
    int worst = kOk;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        // Shell-- style split honoring double quotes.
        std::vector<std::string> argv;
        std::string cur;
        bool quoted = false, any = false;
        for (char c : line) {
            if (c == '"') {
                quoted = !quoted;
                any = true;
            } else if (!quoted && std::isspace(static_cast<unsigned char>(c))) {
                if (any)
                    argv.push_back(cur);
                cur.clear();
                any = false;
            } else {
                cur.push_back(c);
                any = true;
            }
        }
        if (any)
            argv.push_back(cur);
        if (!common.alphabet_letters.empty()) {
            argv.push_back("--alphabet");
            argv.push_back(common.alphabet_letters);
        }
        if (common.format == "json") {
            argv.push_back("--format");
            argv.push_back("json");
        }
        out << "# batch line " << lineno << "\n";
        worst = std::max(worst, run(argv, out));
    }
    return worst;
}

int run(const std::vector<std::string>& args, std::ostream& out) {
    CLI::App app{"toolkit for piecewise-testable languages over the subword order"};
    app.require_subcommand(0, 1);

    Common common;
    if (const char* env = std::getenv("PTK_ALPHABET"))
        common.alphabet_letters = env;
    app.add_option("--alphabet", common.alphabet_letters, "alphabet letters, e.g. ab");
    app.add_option("--format", common.format, "report format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--out", common.out_path, "write the produced automaton to this file");
    app.add_option("--dot", common.dot_path, "also write a DOT rendering to this file");
    app.add_flag("--timing", common.timing, "append wall-clock timing to the report");
    app.add_option("--max-class-states", common.caps.max_class_states,
                   "cap on class-automaton states");
    app.add_option("--max-enum-len", common.caps.max_subword_enum_len,
                   "cap on subword-enumeration input length");
    app.add_option("--max-depth-states", common.caps.max_depth_states,
                   "cap on states for the exhaustive depth search");
    std::string batch_path;
    app.add_option("--batch", batch_path, "run one command per line from this file");

    // height
    auto* height = app.add_subcommand("height", "exact piecewise-testable heights");
    std::string arg_word, arg_file, arg_u, arg_v, arg_formula, arg_regex;
    unsigned arg_n = 0, arg_k = 0, arg_eta = 0, arg_maxlen = 0;
    auto* height_word = height->add_subcommand("word", "height of a single word");
    height_word->add_option("word", arg_word)->required();
    auto* height_set = height->add_subcommand("set", "height of a finite set, one word per line");
    height_set->add_option("file", arg_file)->required();
    auto* height_dfa = height->add_subcommand("dfa", "height of an automaton's language");
    height_dfa->add_option("file", arg_file)->required();

    // word-level queries
    auto* delta_cmd = app.add_subcommand("delta", "distinguishing order of two words");
    delta_cmd->add_option("u", arg_u)->required();
    delta_cmd->add_option("v", arg_v)->required();
    auto* simeq = app.add_subcommand("simeq", "congruence of two words at an order");
    simeq->add_option("u", arg_u)->required();
    simeq->add_option("v", arg_v)->required();
    simeq->add_option("n", arg_n)->required();
    auto* smallsub = app.add_subcommand("small-subword", "congruent subword within the bound");
    smallsub->add_option("u", arg_u)->required();
    smallsub->add_option("n", arg_n)->required();
    auto* profile_cmd = app.add_subcommand("profile", "maximal short subwords of a word");
    profile_cmd->add_option("u", arg_u)->required();
    profile_cmd->add_option("n", arg_n)->required();

    // classes
    auto* classes = app.add_subcommand("classes", "congruence-class automaton census");
    unsigned arg_level = 0;
    classes->add_option("--level", arg_level, "congruence order")->required();

    // closure
    auto* closure = app.add_subcommand("closure", "closures under the subword order");
    std::string closure_kind;
    LangInput lang_in;
    closure->add_option("kind", closure_kind, "up | down | strict-up | strict-down | min")
        ->required()
        ->check(CLI::IsMember({"up", "down", "strict-up", "strict-down", "min"}));
    closure->add_option("--in", lang_in.in_path, "automaton or grammar file");
    closure->add_option("--regex", lang_in.regex, "inline regular expression");

    // dproduct
    auto* dproduct = app.add_subcommand("dproduct", "star/letter product decompositions");
    auto* dp_cover = dproduct->add_subcommand("cover", "covering products of an automaton");
    dp_cover->add_option("--in", lang_in.in_path, "automaton file");
    dp_cover->add_option("--regex", lang_in.regex, "inline regular expression");
    auto* dp_word = dproduct->add_subcommand("for-word", "product around one member word");
    dp_word->add_option("u", arg_u)->required();
    dp_word->add_option("--in", lang_in.in_path, "automaton file");
    dp_word->add_option("--regex", lang_in.regex, "inline regular expression");
    dp_word->add_option("--level", arg_level, "order at which the language is closed")
        ->required();

    // incomp
    auto* incomp = app.add_subcommand("incomp", "incomparability images");
    auto* inc_single = incomp->add_subcommand("singleton", "words incomparable with one word");
    inc_single->add_option("u", arg_u)->required();
    auto* inc_pt = incomp->add_subcommand("pt", "image of a piecewise-testable language");
    inc_pt->add_option("--in", lang_in.in_path, "automaton file");
    inc_pt->add_option("--regex", lang_in.regex, "inline regular expression");
    inc_pt->add_option("--level", arg_level, "order at which the language is closed")->required();
    auto* inc_member = incomp->add_subcommand("member", "membership in the image");
    inc_member->add_option("u", arg_u)->required();
    inc_member->add_option("--in", lang_in.in_path, "automaton file");
    inc_member->add_option("--regex", lang_in.regex, "inline regular expression");

    // fo2
    auto* fo2cmd = app.add_subcommand("fo2", "two-variable logic of subwords");
    bool extended = false;
    auto* fo2_decide = fo2cmd->add_subcommand("decide", "truth of a sentence");
    fo2_decide->add_option("formula", arg_formula)->required();
    fo2_decide->add_flag("--extended", extended, "allow regular predicates");
    auto* fo2_lang = fo2cmd->add_subcommand("language", "language of the free variable");
    fo2_lang->add_option("formula", arg_formula)->required();
    fo2_lang->add_flag("--extended", extended, "allow regular predicates");
    auto* fo2_ledger = fo2cmd->add_subcommand("ledger", "height-bound ledger (basic mode)");
    fo2_ledger->add_option("formula", arg_formula)->required();

    // uk
    auto* uk = app.add_subcommand("uk", "the low-height word family");
    auto* uk_gen = uk->add_subcommand("gen", "generate the family word");
    uk_gen->add_option("k", arg_k)->required();
    uk_gen->add_option("eta", arg_eta)->required();
    auto* uk_verify = uk->add_subcommand("verify", "exhaustive characterization check");
    uk_verify->add_option("k", arg_k)->required();
    uk_verify->add_option("eta", arg_eta)->required();
    uk_verify->add_option("--maxlen", arg_maxlen, "exhaustive sweep length")->required();

    // bounds
    auto* bounds = app.add_subcommand("bounds", "bound functions");
    auto* bounds_f = bounds->add_subcommand("f", "small-subword length bound");
    bounds_f->add_option("k", arg_k)->required();
    bounds_f->add_option("n", arg_n)->required();

    {
        // Let global options appear after any (nested) subcommand.
        auto enable_fallthrough = [](auto&& self, CLI::App* a) -> void {
            for (CLI::App* sub : a->get_subcommands([](CLI::App*) { return true; })) {
                sub->fallthrough();
                self(self, sub);
            }
        };
        enable_fallthrough(enable_fallthrough, &app);
        for (CLI::App* grouped : {height, dproduct, incomp, fo2cmd, uk, bounds})
            grouped->require_subcommand(1);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            std::ostringstream help;
            int rc = app.exit(e, help, help);
            out << help.str();
            return rc;
        }
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    if (!batch_path.empty())
        return run_batch(batch_path, common, out);
    if (app.get_subcommands().empty()) {
        std::cerr << "usage error: a subcommand is required (see --help)\n";
        return kUsage;
    }

    auto started = std::chrono::steady_clock::now();
    Report rep;
    {
        std::ostringstream echo;
        for (std::size_t i = 0; i < args.size(); ++i)
            echo << (i ? " " : "") << args[i];
        rep.command = echo.str();
    }
    const Caps& caps = common.caps;

    if (height_word->parsed()) {
        Alphabet a = common.alphabet();
        Word w = parse_word(a, arg_word == "_" ? "" : arg_word);
        rep.add("alphabet", a.letters());
        rep.add("word", word_text(w));
        rep.add("height", pt_height_word(w));
    } else if (height_set->parsed()) {
        Alphabet a = common.alphabet();
        std::istringstream in(read_file(arg_file));
        std::vector<Word> words;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#')
                continue;
            words.push_back(parse_word(a, line == "_" ? "" : line));
        }
        rep.add("alphabet", a.letters());
        rep.add("words", words.size());
        rep.add("height", pt_height_finite(words));
    } else if (height_dfa->parsed()) {
        Nfa n = nfa_from_text(read_file(arg_file));
        Dfa d = canonical_dfa(n);
        rep.add("alphabet", d.alphabet.letters());
        rep.add("states", d.num_states);
        auto h = pt_height_dfa(d, caps);
        rep.add("height", h ? std::to_string(*h) : "not-piecewise-testable");
    } else if (delta_cmd->parsed()) {
        Alphabet a = common.alphabet();
        Word u = parse_word(a, arg_u == "_" ? "" : arg_u);
        Word v = parse_word(a, arg_v == "_" ? "" : arg_v);
        auto d = delta(u, v);
        rep.add("alphabet", a.letters());
        rep.add("u", word_text(u));
        rep.add("v", word_text(v));
        rep.add("delta", d ? std::to_string(*d) : "infinity");
    } else if (simeq->parsed()) {
        Alphabet a = common.alphabet();
        Word u = parse_word(a, arg_u == "_" ? "" : arg_u);
        Word v = parse_word(a, arg_v == "_" ? "" : arg_v);
        rep.add("alphabet", a.letters());
        rep.add("u", word_text(u));
        rep.add("v", word_text(v));
        rep.add("n", arg_n);
        rep.add_bool("equivalent", sim_equiv(u, v, arg_n));
    } else if (smallsub->parsed()) {
        Alphabet a = common.alphabet();
        Word u = parse_word(a, arg_u == "_" ? "" : arg_u);
        Word v = small_subword(u, arg_n);
        unsigned occurring = 0;
        for (unsigned c = 0; c < a.size(); ++c)
            occurring += u.count(c) > 0;
        rep.add("alphabet", a.letters());
        rep.add("u", word_text(u));
        rep.add("n", arg_n);
        rep.add("result", word_text(v));
        rep.add("length", v.size());
        rep.add("bound", occurring == 0 ? 0 : small_subword_bound(occurring, arg_n));
    } else if (profile_cmd->parsed()) {
        Alphabet a = common.alphabet();
        Word u = parse_word(a, arg_u == "_" ? "" : arg_u);
        auto p = profile(u, arg_n);
        rep.add("alphabet", a.letters());
        rep.add("u", word_text(u));
        rep.add("n", arg_n);
        std::string words;
        for (const auto& w : p.maximal)
            words += (words.empty() ? "" : " ") + word_text(w);
        rep.add("maximal", words);
    } else if (classes->parsed()) {
        Alphabet a = common.alphabet();
        auto ca = class_automaton(a, arg_level, caps);
        rep.add("alphabet", a.letters());
        rep.add("level", arg_level);
        rep.add("classes", ca->num_states());
        if (a.size() >= 2 && arg_level >= 2) {
            double log2_bound = class_count_bound_log2(a.size(), arg_level);
            std::ostringstream b;
            b << "2^" << log2_bound;
            rep.add("class_count_bound", b.str());
            rep.add_bool("within_bound",
                         std::log2(static_cast<double>(ca->num_states())) <= log2_bound);
        } else {
            rep.add("class_count_bound", "n/a (needs k >= 2 and level >= 2)");
        }
        if (!common.out_path.empty()) {
            std::ostringstream artifact;
            artifact << to_text(ca->as_dfa(std::vector<bool>(ca->num_states(), true)));
            for (State s = 0; s < ca->num_states(); ++s)
                artifact << "# rep " << s << ' ' << word_text(ca->representative(s)) << "\n";
            write_file(common.out_path, artifact.str());
            rep.add("out", common.out_path);
        }
    } else if (closure->parsed()) {
        Alphabet a = common.alphabet();
        std::string content = lang_in.in_path.empty() ? "" : read_file(lang_in.in_path);
        bool is_cfg = !content.empty() && lang_in.is_cfg(content);
        Dfa result(a);
        if (is_cfg) {
            Cfg g = cfg_from_text(a, content);
            auto words = cfg_nonrepeating_words(g, caps);
            std::vector<Word> minimal;
            for (const auto& w : words) {
                bool keep = true;
                for (const auto& v : words)
                    if (compare(v, w) == WordRelation::strictly_below)
                        keep = false;
                if (keep)
                    minimal.push_back(w);
            }
            Dfa min_set = word_set_dfa(a, minimal);
            std::size_t m = 0;
            for (const auto& w : minimal)
                m = std::max(m, w.size());
            if (closure_kind == "up") {
                result = up_closure(dfa_to_nfa(min_set));
                rep.add("height_bound", m);
            } else if (closure_kind == "strict-up") {
                result = difference(up_closure(dfa_to_nfa(min_set)), min_set);
                rep.add("height_bound", m + 1);
            } else if (closure_kind == "min") {
                result = min_set;
                rep.add("height_bound", m + 1);
            } else {
                throw precondition_error(
                    "downward closures of grammars are not supported; give an automaton");
            }
            rep.add("min_word_max_len", m);
            std::uint64_t bound = 1;
            for (std::size_t i = 0; i < g.nonterminals.size(); ++i)
                bound = std::min<std::uint64_t>(bound * std::max<std::uint64_t>(
                                                            g.max_rhs_len(), 1),
                                                std::uint64_t(1) << 62);
            rep.add("min_word_len_bound", bound);
        } else {
            Nfa n = load_nfa(lang_in, a);
            if (closure_kind == "up")
                result = up_closure(n);
            else if (closure_kind == "down")
                result = down_closure(n);
            else if (closure_kind == "strict-up")
                result = strict_up(n);
            else if (closure_kind == "strict-down")
                result = strict_down(n);
            else
                result = min_lang(n);
            if (closure_kind == "up" || closure_kind == "strict-up" || closure_kind == "min") {
                try {
                    auto mins = min_words(n, caps);
                    std::size_t m = 0;
                    for (const auto& w : mins)
                        m = std::max(m, w.size());
                    rep.add("min_word_max_len", m);
                    rep.add("height_bound", closure_kind == "up" ? m : m + 1);
                } catch (const cap_exceeded&) {
                    rep.add("height_bound", "capped");
                }
            } else {
                try {
                    auto cover = dproduct_cover_nfa(n, caps);
                    std::size_t len = 0;
                    for (const auto& p : cover)
                        len = std::max(len, p.length());
                    rep.add("cover_max_len", len);
                    rep.add("height_bound", len + 1);
                } catch (const cap_exceeded&) {
                    rep.add("height_bound", "capped");
                }
            }
        }
        rep.add("kind", closure_kind);
        emit_automaton(rep, common, result);
        add_measured_height(rep, result, caps);
    } else if (dp_cover->parsed()) {
        Alphabet a = common.alphabet();
        Nfa n = load_nfa(lang_in, a);
        auto cover = dproduct_cover_nfa(n, caps);
        rep.add("products", cover.size());
        std::size_t len = 0;
        std::string lines;
        for (const auto& p : cover) {
            len = std::max(len, p.length());
            lines += p.str() + "\n";
        }
        rep.add("max_length", len);
        rep.add("cover", lines.empty() ? "(none)" : lines.substr(0, lines.size() - 1));
    } else if (dp_word->parsed()) {
        Alphabet a = common.alphabet();
        Word u = parse_word(a, arg_u == "_" ? "" : arg_u);
        Dfa d = canonical_dfa(load_nfa(lang_in, a));
        DProduct p = dproduct_for_word(u, d, arg_level, caps);
        std::uint64_t m = small_subword_bound(a.size(), arg_level);
        rep.add("u", word_text(u));
        rep.add("level", arg_level);
        rep.add("product", p.str());
        rep.add("length", p.length());
        rep.add("length_bound", m * a.size() + m + a.size());
    } else if (inc_single->parsed()) {
        Alphabet a = common.alphabet();
        Word u = parse_word(a, arg_u == "_" ? "" : arg_u);
        Dfa d = incomparability_singleton(u);
        rep.add("u", word_text(u));
        emit_automaton(rep, common, d);
        add_measured_height(rep, d, caps);
    } else if (inc_pt->parsed()) {
        Alphabet a = common.alphabet();
        Dfa d = canonical_dfa(load_nfa(lang_in, a));
        Dfa image = I_of_pt(d, arg_level, caps);
        rep.add("level", arg_level);
        emit_automaton(rep, common, image);
        add_measured_height(rep, image, caps);
    } else if (inc_member->parsed()) {
        Alphabet a = common.alphabet();
        Word u = parse_word(a, arg_u == "_" ? "" : arg_u);
        Dfa d = canonical_dfa(load_nfa(lang_in, a));
        rep.add("u", word_text(u));
        rep.add_bool("in_I", in_I(u, d));
        rep.add_bool("in_C", in_C(u, d));
    } else if (fo2_decide->parsed() || fo2_lang->parsed() || fo2_ledger->parsed()) {
        Alphabet a = common.alphabet();
        auto mode = extended ? fo2::SolverMode::extended : fo2::SolverMode::basic;
        rep.add("alphabet", a.letters());
        rep.add("formula", arg_formula);
        rep.add("mode", extended ? "extended" : "basic");
        fo2::Formula f = fo2::parse_formula(arg_formula, a, mode);
        fo2::ElimOptions opts;
        opts.caps = caps;
        if (fo2_decide->parsed()) {
            rep.add_bool("result", fo2::decide(f, a, mode, opts));
        } else if (fo2_lang->parsed()) {
            Dfa lang = fo2::eliminate(f, a, mode, opts);
            emit_automaton(rep, common, lang);
            add_measured_height(rep, lang, caps);
        } else {
            opts.measure_heights = true;
            auto ledger = fo2::height_ledger(f, a, opts);
            std::ostringstream table;
            for (const auto& e : ledger.entries) {
                table << e.id << " | " << e.rule << " | bound " << e.bound << " | measured ";
                if (e.measure_capped)
                    table << "capped";
                else if (e.measured)
                    table << *e.measured;
                else
                    table << "-";
                table << " | " << e.description << "\n";
            }
            rep.add("entries", ledger.entries.size());
            rep.add("ledger", table.str().empty() ? "(empty)"
                                                  : table.str().substr(0, table.str().size() - 1));
        }
    } else if (uk_gen->parsed()) {
        Alphabet a = common.alphabet();
        Word w = generate_uk(arg_k, arg_eta, a);
        rep.add("k", arg_k);
        rep.add("eta", arg_eta);
        rep.add("word", word_text(w));
        rep.add("length", w.size());
    } else if (uk_verify->parsed()) {
        Alphabet a = common.alphabet();
        Word target = generate_uk(arg_k, arg_eta, a);
        auto [pos, neg] = generate_pk_nk(arg_k, arg_eta, a);
        // Exhaustive sweep over the first k letters only: the
        // characterization speaks about words over that subalphabet.
        Alphabet sub(a.letters().substr(0, arg_k));
        std::vector<Word> matches;
        std::vector<std::uint8_t> cur;
        std::uint64_t visited = 0;
        auto sweep = [&](auto&& self) -> void {
            if (++visited > caps.max_enum_words)
                throw cap_exceeded("uk verify: enumeration exceeded " +
                                   std::to_string(caps.max_enum_words) + " words");
            Word w(a, cur);
            bool ok = true;
            for (const auto& p : pos)
                if (!is_subword(p, w)) {
                    ok = false;
                    break;
                }
            if (ok)
                for (const auto& nw : neg)
                    if (is_subword(nw, w)) {
                        ok = false;
                        break;
                    }
            if (ok)
                matches.push_back(w);
            if (cur.size() >= arg_maxlen)
                return;
            for (unsigned c = 0; c < arg_k; ++c) {
                cur.push_back(static_cast<std::uint8_t>(c));
                self(self);
                cur.pop_back();
            }
        };
        sweep(sweep);
        bool confirmed = matches.size() == 1 && matches[0] == target;
        rep.add("k", arg_k);
        rep.add("eta", arg_eta);
        rep.add("maxlen", arg_maxlen);
        rep.add("expected", word_text(target));
        rep.add("matches", matches.size());
        rep.add_bool("confirmed", confirmed);
    } else if (bounds_f->parsed()) {
        std::uint64_t exact = small_subword_bound(arg_k, arg_n);
        rep.add("k", arg_k);
        rep.add("n", arg_n);
        rep.add("exact", exact);
        double closed = std::pow((arg_n + 2.0 * arg_k - 1.0) / arg_k, arg_k) - 1.0;
        std::ostringstream b;
        b << closed;
        rep.add("closed_form_bound", b.str());
        rep.add_bool("within_bound", static_cast<double>(exact) <= closed + 1e-9);
    } else {
        std::cerr << "usage error: unknown subcommand\n";
        return kUsage;
    }

    if (common.timing) {
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();
        rep.add("timing_ms", static_cast<std::uint64_t>(elapsed));
    }
    out << (common.format == "json" ? rep.json() : rep.text());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run(args, std::cout);
    } catch (const ptk::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const ptk::cap_exceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return kCap;
    } catch (const ptk::alphabet_mismatch& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return kPrecondition;
    } catch (const ptk::precondition_error& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return kPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}
