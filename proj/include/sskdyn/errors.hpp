#pragma once

#include <stdexcept>
#include <string>

namespace sskdyn {

// Error taxonomy; the CLI maps each family to a distinct exit code.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct degenerate_input_error : domain_error {
  using domain_error::domain_error;
};

struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct horizon_error : numerical_error {
  using numerical_error::numerical_error;
};

struct blowup_error : numerical_error {
  using numerical_error::numerical_error;
};

struct not_hit_error : std::runtime_error {
  double last_overlap;
  long long cap;
  not_hit_error(const std::string& msg, double overlap, long long k_max)
      : std::runtime_error(msg), last_overlap(overlap), cap(k_max) {}
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sskdyn
