#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "ptk/automata.hpp"

namespace ptk {

/// Line-oriented text format:
///
///     alphabet: ab
///     states: 3
///     initial: 0
///     final: 1 2
///     trans: 0 a 1
///     trans: 1 eps 2
///
/// `eps` marks an epsilon transition (NFA only). Emission uses a fixed
/// ordering so output is byte-for-byte reproducible.
std::string to_text(const Nfa& n);
std::string to_text(const Dfa& d);
Nfa nfa_from_text(std::string_view text);

/// GraphViz export, deterministic node/edge ordering.
std::string to_dot(const Nfa& n, std::string_view name = "nfa");
std::string to_dot(const Dfa& d, std::string_view name = "dfa");

/// Grammar format, one nonterminal per line, `_` for the empty word:
///
///     S -> a S b | ab | _
///
/// Single-letter tokens over the alphabet are terminals; every other
/// token is a nonterminal. The first line's left-hand side is the
/// start symbol.
Cfg cfg_from_text(const Alphabet& a, std::string_view text);
std::string to_text(const Cfg& g);

}  // namespace ptk
