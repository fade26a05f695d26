#pragma once

#include <cstddef>

namespace ptk {

// Resource limits for the operations whose exact algorithms are
// worst-case exponential. Breaching a cap raises cap_exceeded with a
// cost report; results are never silently truncated.
struct Caps {
    // Frontier limit when expanding congruence-class automata.
    std::size_t max_class_states = 2'000'000;
    // Limit on any explicit word enumeration (subword sets, class
    // enumeration, brute-force sweeps).
    std::size_t max_enum_words = 4'000'000;
    // Input length limit for explicit subword-set enumeration.
    unsigned max_subword_enum_len = 24;
    // State-count limit for the exhaustive simple-path depth search.
    unsigned max_depth_states = 14;
    // Limit on enumerated simple paths / derivation trees.
    std::size_t max_path_enum = 1'000'000;
};

}  // namespace ptk
