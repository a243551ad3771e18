#pragma once

#include <stdexcept>

namespace uavpp {

// Malformed input document: missing key, wrong type, unparsable JSON.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally valid input that violates a model invariant.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem-level failure (missing file, unwritable directory).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace uavpp
