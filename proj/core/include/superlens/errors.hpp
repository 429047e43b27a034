#ifndef SUPERLENS_ERRORS_HPP
#define SUPERLENS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace superlens {

/// A Wood-anomaly-adjacent mode: beta_n or gamma_n is numerically zero, so
/// the scaling factor has no usable value and the mode must be skipped.
class DegenerateModeError : public std::runtime_error {
 public:
  DegenerateModeError(int mode, const std::string& what)
      : std::runtime_error(what), mode_(mode) {}
  int mode() const { return mode_; }

 private:
  int mode_;
};

/// The interface determinant vanished: the slab configuration is resonant
/// for this mode and the interface system cannot be solved.
class ResonanceError : public std::runtime_error {
 public:
  ResonanceError(int mode, const std::string& what)
      : std::runtime_error(what), mode_(mode) {}
  int mode() const { return mode_; }

 private:
  int mode_;
};

/// The discrete forward system lost too much precision during block
/// elimination (near-singular pivot block). Carries the offending y-level.
class ConditioningError : public std::runtime_error {
 public:
  ConditioningError(int level, double growth, const std::string& what)
      : std::runtime_error(what), level_(level), growth_(growth) {}
  int level() const { return level_; }
  double growth() const { return growth_; }

 private:
  int level_;
  double growth_;
};

/// Malformed scenario configuration or CLI arguments.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace superlens

#endif  // SUPERLENS_ERRORS_HPP
