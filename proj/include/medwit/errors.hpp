#pragma once

#include <stdexcept>
#include <string>

namespace medwit {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad experiment config (CLI exit code 2).
struct config_error : error {
    using error::error;
};

// Numerical-validation failure: non-Hermitian input, layout mismatch,
// violated invariant (CLI exit code 3).
struct validation_error : error {
    using error::error;
};

// Filesystem failure while writing results (CLI exit code 4).
struct io_error : error {
    using error::error;
};

}  // namespace medwit
