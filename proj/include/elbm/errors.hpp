#ifndef ELBM_ERRORS_HPP_
#define ELBM_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace elbm {

/// Invalid run configuration. Carries every violation found, not only the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Non-finite population detected by the solver watchdog.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int x, int y, long step);
  int x() const noexcept { return x_; }
  int y() const noexcept { return y_; }
  long step() const noexcept { return step_; }

 private:
  int x_;
  int y_;
  long step_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace elbm

#endif  // ELBM_ERRORS_HPP_
