#pragma once

#include <cmath>
#include <string>

#include "cosmofinsler/errors.hpp"
#include "cosmofinsler/jet.hpp"

namespace cosmofinsler {

/// Time-dependent coefficient with an exact derivative: a constant,
/// c * t^p, or c * exp(lambda * t).
class ScaleFunction {
 public:
  enum class Kind { constant, power_law, exponential };

  ScaleFunction() = default;

  static ScaleFunction constant(double c) { return ScaleFunction(Kind::constant, c, 0.0); }
  static ScaleFunction power_law(double c, double p) { return ScaleFunction(Kind::power_law, c, p); }
  static ScaleFunction exponential(double c, double lambda) {
    return ScaleFunction(Kind::exponential, c, lambda);
  }

  Kind kind() const { return kind_; }
  double c() const { return c_; }
  /// Exponent p (power law) or rate lambda (exponential).
  double rate() const { return rate_; }

  bool is_constant() const {
    return kind_ == Kind::constant || c_ == 0.0 || rate_ == 0.0;
  }

  /// True when t^p needs t > 0.
  bool needs_positive_time() const {
    return kind_ == Kind::power_law && std::floor(rate_) != rate_;
  }

  /// Sign of the function, which never changes on its domain.
  int sign() const { return (c_ > 0) - (c_ < 0); }

  template <class S>
  S operator()(const S& t) const {
    using std::exp;
    using std::pow;
    switch (kind_) {
      case Kind::constant:
        return S(c_);
      case Kind::power_law:
        return c_ * pow(t, rate_);
      case Kind::exponential:
        return c_ * exp(rate_ * t);
    }
    return S(c_);
  }

  double derivative(double t) const {
    switch (kind_) {
      case Kind::constant:
        return 0.0;
      case Kind::power_law:
        return c_ * rate_ * std::pow(t, rate_ - 1.0);
      case Kind::exponential:
        return c_ * rate_ * std::exp(rate_ * t);
    }
    return 0.0;
  }

  void check_time(double t, const std::string& name) const {
    if (needs_positive_time() && !(t > 0.0)) {
      throw DomainError("scale function '" + name + "' = c t^p with non-integer p requires t > 0");
    }
  }

 private:
  ScaleFunction(Kind k, double c, double rate) : kind_(k), c_(c), rate_(rate) {}

  Kind kind_ = Kind::constant;
  double c_ = 1.0;
  double rate_ = 0.0;
};

}  // namespace cosmofinsler
