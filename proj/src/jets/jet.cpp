#include "threadsplit/jet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "threadsplit/error.hpp"
#include "threadsplit/jet_kernels.hpp"

namespace threadsplit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax:
      return "SyntaxError";
    case ErrorKind::UnboundIdentifier:
      return "UnboundIdentifier";
    case ErrorKind::MissingKey:
      return "MissingKey";
    case ErrorKind::DuplicateKey:
      return "DuplicateKey";
    case ErrorKind::DivisionByZeroAtPoint:
      return "DivisionByZeroAtPoint";
    case ErrorKind::DomainErrorAtPoint:
      return "DomainErrorAtPoint";
    case ErrorKind::OrderExhausted:
      return "OrderExhausted";
    case ErrorKind::NotLorentzian:
      return "NotLorentzian";
    case ErrorKind::SingularSpatialMetric:
      return "SingularSpatialMetric";
    case ErrorKind::SingularMetric:
      return "SingularMetric";
    case ErrorKind::InvalidMatter:
      return "InvalidMatter";
    case ErrorKind::Input:
      return "InputError";
  }
  return "Error";
}

namespace {

void check_order(int order) {
  if (order < 0 || order > kMaxOrder) {
    throw Error(ErrorKind::OrderExhausted, "jet order out of range: " + std::to_string(order));
  }
}

}  // namespace

Jet Jet::constant(double value, int order) {
  check_order(order);
  Jet j;
  j.order_ = order;
  j.c_[0] = value;
  return j;
}

Jet Jet::coordinate(int coord, double value, int order) {
  Jet j = constant(value, order);
  if (order >= 1) j.c_[1 + coord] = 1.0;
  return j;
}

double Jet::partial(const MultiIndex& alpha) const {
  if (alpha.order() > order_) {
    std::ostringstream msg;
    msg << "requested derivative of order " << alpha.order() << " from a jet of order " << order_;
    throw Error(ErrorKind::OrderExhausted, msg.str());
  }
  return c_[MultiIndexTable::instance().slot(alpha)];
}

Jet Jet::derivative(int coord) const {
  if (order_ == 0) {
    throw Error(ErrorKind::OrderExhausted, "cannot differentiate an order-0 jet");
  }
  const auto& table = MultiIndexTable::instance();
  Jet d;
  d.order_ = order_ - 1;
  const int n = d.size();
  for (int s = 0; s < n; ++s) d.c_[s] = c_[table.raise(s, coord)];
  return d;
}

Jet Jet::truncated(int order) const {
  check_order(order);
  if (order >= order_) return *this;
  Jet t = *this;
  t.order_ = order;
  std::fill(t.c_.begin() + t.size(), t.c_.end(), 0.0);
  return t;
}

bool Jet::is_constant() const {
  return std::all_of(c_.begin() + 1, c_.end(), [](double v) { return v == 0.0; });
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.order_ < order_) *this = truncated(o.order_);
  kernels::active().add(c_.data(), o.c_.data(), c_.data(), size());
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (o.order_ < order_) *this = truncated(o.order_);
  kernels::active().sub(c_.data(), o.c_.data(), c_.data(), size());
  return *this;
}

Jet& Jet::operator*=(double s) {
  kernels::active().scale(c_.data(), s, c_.data(), size());
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  r.order_ = std::min(a.order_, b.order_);
  kernels::active().mul(a.c_.data(), b.c_.data(), r.c_.data(), r.order_);
  return r;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

Jet operator-(const Jet& a) { return a * -1.0; }

// f(a) = sum_k f^(k)(a0)/k! (a - a0)^k, truncated at the jet order.
Jet compose(const Jet& inner, std::span<const double> outer_derivatives) {
  const int order = inner.order();
  Jet result = Jet::constant(outer_derivatives[0], order);
  Jet delta = inner;
  delta.c_[0] = 0.0;
  Jet power = delta;
  double factorial = 1.0;
  for (int k = 1; k <= order; ++k) {
    factorial *= k;
    result += power * (outer_derivatives[static_cast<std::size_t>(k)] / factorial);
    if (k < order) power = power * delta;
  }
  return result;
}

namespace {

Jet apply(const Jet& a, std::array<double, kMaxOrder + 1> d) { return compose(a, d); }

[[noreturn]] void domain_error(const char* fn, double value) {
  std::ostringstream msg;
  msg << fn << " undefined at base value " << value;
  throw Error(ErrorKind::DomainErrorAtPoint, msg.str());
}

}  // namespace

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return apply(a, {s, c, -s, -c});
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return apply(a, {c, -s, -c, s});
}

Jet tan(const Jet& a) {
  const double c = std::cos(a.value());
  if (c == 0.0) domain_error("tan", a.value());
  const double t = std::tan(a.value());
  const double sec2 = 1.0 + t * t;
  return apply(a, {t, sec2, 2.0 * t * sec2, sec2 * (2.0 * sec2 + 4.0 * t * t)});
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return apply(a, {e, e, e, e});
}

Jet log(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) domain_error("ln", x);
  return apply(a, {std::log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x)});
}

Jet sqrt(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) domain_error("sqrt", x);
  const double r = std::sqrt(x);
  return apply(a, {r, 0.5 / r, -0.25 / (r * x), 0.375 / (r * x * x)});
}

Jet sinh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return apply(a, {s, c, s, c});
}

Jet cosh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return apply(a, {c, s, c, s});
}

Jet tanh(const Jet& a) {
  const double t = std::tanh(a.value());
  const double sech2 = 1.0 - t * t;
  return apply(a, {t, sech2, -2.0 * t * sech2, sech2 * (4.0 * t * t - 2.0 * sech2)});
}

Jet reciprocal(const Jet& a) {
  const double x = a.value();
  if (x == 0.0) {
    throw Error(ErrorKind::DivisionByZeroAtPoint, "division by a jet whose value is zero");
  }
  const double r = 1.0 / x;
  return apply(a, {r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r});
}

Jet pow(const Jet& base, double exponent) {
  if (std::nearbyint(exponent) == exponent && std::fabs(exponent) <= 64.0) {
    const int n = static_cast<int>(std::fabs(exponent));
    Jet result = Jet::constant(1.0, base.order());
    Jet square = base;
    for (int k = n; k > 0; k >>= 1) {
      if (k & 1) result = result * square;
      if (k > 1) square = square * square;
    }
    return exponent < 0 ? reciprocal(result) : result;
  }
  const double x = base.value();
  if (!(x > 0.0)) domain_error("pow with non-integer exponent", x);
  const double e = exponent;
  const double f0 = std::pow(x, e);
  return apply(base, {f0, e * f0 / x, e * (e - 1.0) * f0 / (x * x), e * (e - 1.0) * (e - 2.0) * f0 / (x * x * x)});
}

Jet pow(const Jet& base, const Jet& exponent) {
  if (exponent.is_constant()) return pow(base.truncated(std::min(base.order(), exponent.order())), exponent.value());
  return exp(exponent * log(base));
}

JetEnv seed_point(const std::array<double, kDim>& point, int order) {
  JetEnv env;
  for (int k = 0; k < kDim; ++k) env[k] = Jet::coordinate(k, point[k], order);
  return env;
}

}  // namespace threadsplit
