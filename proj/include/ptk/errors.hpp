#pragma once

#include <stdexcept>
#include <string>

namespace ptk {

// Base class for all toolkit errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two values from different alphabets were combined.
struct alphabet_mismatch : error {
    using error::error;
};

// Bad textual input: words, regexes, automata files, formulas, ...
struct parse_error : error {
    using error::error;
};

// A configured resource cap was hit. The message carries a cost report
// (what was being built and how far it got); partial results are never
// returned.
struct cap_exceeded : error {
    using error::error;
};

// An operation was invoked outside its contract.
struct precondition_error : error {
    using error::error;
};

}  // namespace ptk
