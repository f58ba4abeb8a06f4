#pragma once

#include <stdexcept>
#include <string>

namespace proxmc {

/* Error taxonomy. Every throw in the library uses one of these so callers
 * (and the CLI exit-code mapping) can tell user mistakes apart from
 * numerical breakdowns.
 *
 *   config_error              bad configuration (ranges, missing keys, step
 *                             size outside the admissible interval, ...)
 *   input_error               malformed data handed to an operation
 *                             (size mismatch, unreadable file, ...)
 *   numerical_error           a computation produced non-finite values or an
 *                             iteration failed to converge
 *   estimator_undefined_error a well-formed request whose estimator has no
 *                             value (e.g. no samples fell in the HME region)
 */

struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct estimator_undefined_error : std::runtime_error {
    explicit estimator_undefined_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace proxmc
