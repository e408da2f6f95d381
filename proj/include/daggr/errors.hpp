#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace daggr {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mismatched or invalid dimensions (non-square adjacency, length mismatches).
struct DimensionError : Error {
    using Error::Error;
};

// An operation required a DAG but the input contains a directed cycle.
// `cycle` holds one offending cycle as a node sequence v0 -> v1 -> ... -> v0
// (the closing edge back to front() is implied, not repeated).
struct CycleError : Error {
    std::vector<int> cycle;

    CycleError(const std::string& msg, std::vector<int> cyc)
        : Error(msg), cycle(std::move(cyc)) {}
};

// Invalid argument values (non-positive sigma, out-of-range threshold, ...).
struct DomainError : Error {
    using Error::Error;
};

// Numerical failure (singular system with no recovery, non-finite result).
struct NumericError : Error {
    using Error::Error;
};

// Malformed input file. Carries 1-based line/column when known (0 = unknown).
struct ParseError : Error {
    int line = 0;
    int column = 0;

    explicit ParseError(const std::string& msg, int line_no = 0, int col_no = 0)
        : Error(msg), line(line_no), column(col_no) {}
};

// Formats a cycle as "v0 -> v1 -> ... -> v0" for error messages.
std::string format_cycle(const std::vector<int>& cycle);

}  // namespace daggr
