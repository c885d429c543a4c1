#pragma once

#include <stdexcept>
#include <string>

namespace nll {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid parameter domain (s outside (0,1), lambda > Lambda, ...).
struct parameter_error : error {
    using error::error;
};

// A constructed object fails its own invariants on a sample grid.
struct validation_error : error {
    using error::error;
};

// Caller violated an operation precondition (missing metadata, negative u, ...).
struct precondition_error : error {
    using error::error;
};

// Declared decay makes a tail integral divergent (u outside the tail space).
struct tail_space_error : error {
    using error::error;
};

// Operation is meaningless in the requested regime.
struct regime_error : error {
    using error::error;
};

// Two independent computations of the same quantity disagree.
struct consistency_error : error {
    using error::error;
};

// Config file / flag validation; carries the offending field path.
struct config_error : error {
    std::string field_path;
    config_error(std::string path, const std::string& what)
        : error(what), field_path(std::move(path)) {}
};

}  // namespace nll
