#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ekwave {

// Base class for everything thrown by this library.
struct ek_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A value of v left the admissible model domain, or kappa failed to stay positive.
struct domain_error : ek_error {
    using ek_error::ek_error;
};

// No homoclinic connection exists for the requested (model, v_star, c).
struct no_solitary_wave : ek_error {
    using ek_error::ek_error;
};

// Degenerate zero structure of F: F_vv(v_star, c) ~ 0 (edge of the subsonic
// window) or F_v(v_m) ~ 0 (turning point is not a simple zero).
struct sonic_degenerate : ek_error {
    using ek_error::ek_error;
};

// Expression text could not be parsed; offset is 0-based into the source.
struct parse_error : ek_error {
    std::size_t offset;
    parse_error(const std::string& msg, std::size_t off)
        : ek_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

// Bad run configuration: unreadable model file, invalid parameter values,
// unknown identifiers, grid/domain mismatches.  Maps to CLI exit code 64.
struct config_error : ek_error {
    using ek_error::ek_error;
};

// A time-evolution run had to stop (non-finite fields or domain escape).
struct run_aborted : ek_error {
    double last_good_t;
    run_aborted(const std::string& reason, double t)
        : ek_error(reason), last_good_t(t) {}
};

}  // namespace ekwave
