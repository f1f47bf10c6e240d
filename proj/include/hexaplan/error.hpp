#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace hexaplan {

enum class ErrorKind {
    input,          // malformed file, degenerate polygon, bad model
    unreachable,    // two points (or a start/goal pair) in different components
    infeasible,     // no plan exists under the current roadmap
    empty_lattice,  // C-space admits no lattice edge
    snap_failure,   // a start/goal could not be attached to a free node
    split_failure,  // k-way split could not place a waypoint
    timeout,        // T grew past max_T
    budget,         // solver node/time budget exhausted
    internal,       // construction bug or validator failure
};

const char* to_string(ErrorKind kind);

/// Process exit code used by the CLI: 0 ok, 2 infeasible, 3 budget, 4 input, 1 internal.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::optional<int> robot = std::nullopt)
        : std::runtime_error(what), kind_(kind), robot_(robot) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<int> robot() const noexcept { return robot_; }

private:
    ErrorKind kind_;
    std::optional<int> robot_;
};

}  // namespace hexaplan
