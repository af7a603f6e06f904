#pragma once

#include <charconv>
#include <stdexcept>
#include <string>

namespace sbg {

// Invalid arguments, violated preconditions, degenerate game instances.
// The CLI maps this to exit code 2.
class parameter_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Factorization failures, bounds that cannot be evaluated, overflow.
// The CLI maps this to exit code 3.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A strategy profile (x, y) with both coordinates in [0, 1].
struct Profile {
  double x = 0.0;
  double y = 0.0;
};

// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace sbg
