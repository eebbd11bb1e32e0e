// Exception hierarchy shared by every module. All errors derive from
// depthscan::error so callers can catch the library as a whole; the CLI
// additionally distinguishes input/validation errors from numeric failures.
#pragma once

#include <stdexcept>

namespace depthscan {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input and validation errors (bad data, bad arguments).
struct non_finite_value : error { using error::error; };
struct grid_not_increasing : error { using error::error; };
struct grid_too_short : error { using error::error; };
struct too_few_curves : error { using error::error; };
struct too_short : error { using error::error; };
struct shape_mismatch : error { using error::error; };
struct length_mismatch : error { using error::error; };
struct out_of_range : error { using error::error; };
struct domain_error : error { using error::error; };
struct empty_after_cleaning : error { using error::error; };
struct io_error : error { using error::error; };

// Numeric failures (the computation itself broke down).
struct fit_failure : error { using error::error; };
struct not_positive_definite : error { using error::error; };

// True for errors that indicate malformed input rather than a numeric
// breakdown; the CLI maps the former to exit code 2 and the latter to 3.
inline bool is_input_error(const error& e) {
  return dynamic_cast<const fit_failure*>(&e) == nullptr &&
         dynamic_cast<const not_positive_definite*>(&e) == nullptr;
}

}  // namespace depthscan
