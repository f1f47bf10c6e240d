#include "hexaplan/error.hpp"

namespace hexaplan {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::input: return "input";
        case ErrorKind::unreachable: return "unreachable";
        case ErrorKind::infeasible: return "infeasible";
        case ErrorKind::empty_lattice: return "empty_lattice";
        case ErrorKind::snap_failure: return "snap_failure";
        case ErrorKind::split_failure: return "split_failure";
        case ErrorKind::timeout: return "timeout";
        case ErrorKind::budget: return "budget";
        case ErrorKind::internal: return "internal";
    }
    return "unknown";
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::input: return 4;
        case ErrorKind::unreachable:
        case ErrorKind::infeasible:
        case ErrorKind::empty_lattice:
        case ErrorKind::snap_failure:
        case ErrorKind::split_failure: return 2;
        case ErrorKind::timeout:
        case ErrorKind::budget: return 3;
        case ErrorKind::internal: return 1;
    }
    return 1;
}

}  // namespace hexaplan
