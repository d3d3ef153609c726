#pragma once

#include <array>
#include <span>

#include "threadsplit/multi_index.hpp"

namespace threadsplit {

// Truncated multivariate Taylor expansion of a scalar field at a point.
// Coefficients are RAW partial derivatives d^|a| f / dx^a at the base point
// (no factorial normalization), stored densely in graded order. Slots beyond
// the jet's order are kept at zero.
class Jet {
 public:
  Jet() = default;  // the zero field at full order

  static Jet constant(double value, int order = kMaxOrder);
  // Coordinate function x^coord at a base point with the given value.
  static Jet coordinate(int coord, double value, int order = kMaxOrder);

  int order() const { return order_; }
  int size() const { return kSizeForOrder[order_]; }
  double value() const { return c_[0]; }
  // Raw coefficient by storage slot.
  double operator[](int slot) const { return c_[slot]; }
  std::span<const double> coefficients() const { return {c_.data(), static_cast<std::size_t>(size())}; }

  // Stored partial derivative; throws OrderExhausted when |alpha| > order().
  double partial(const MultiIndex& alpha) const;
  // d/dx^coord as a jet of one lower order; throws OrderExhausted at order 0.
  Jet derivative(int coord) const;
  // Same field viewed at a lower order.
  Jet truncated(int order) const;
  bool is_constant() const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator*=(double s);
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a += -s; }
  friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
  friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }
  friend Jet operator-(const Jet& a);

 private:
  friend Jet compose(const Jet& inner, std::span<const double> outer_derivatives);
  std::array<double, kJetSize> c_{};
  int order_ = kMaxOrder;
};

// f(inner) given f, f', f'', f''' at inner.value() (as many as the order needs).
Jet compose(const Jet& inner, std::span<const double> outer_derivatives);

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);   // DomainErrorAtPoint unless value > 0
Jet sqrt(const Jet& a);  // DomainErrorAtPoint unless value > 0
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet tanh(const Jet& a);
// Integer exponents multiply repeatedly (any base; negative ones divide);
// other exponents need a positive base.
Jet pow(const Jet& base, double exponent);
// General power base^exponent = exp(exponent * ln base); base must be positive.
Jet pow(const Jet& base, const Jet& exponent);
Jet reciprocal(const Jet& a);  // DivisionByZeroAtPoint on zero value

// Four coordinate jets seeded at a point.
using JetEnv = std::array<Jet, kDim>;
JetEnv seed_point(const std::array<double, kDim>& point, int order = kMaxOrder);

}  // namespace threadsplit
