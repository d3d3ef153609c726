#pragma once

#include <map>
#include <string>
#include <vector>

namespace threadsplit {

// Check entries are identities that must hold; Probe entries evaluate a
// reference formula that is known or suspected to differ from the derived
// one. A large Probe raises a PAPER-DISCREPANCY flag, not a violation.
enum class ResidualKind { Check, Probe };

struct Residual {
  double value = 0.0;
  ResidualKind kind = ResidualKind::Check;
  std::string detail;  // optional, e.g. both sides of a disagreeing comparison
};

class ResidualBlock {
 public:
  // Max-merge under `name`. NaN is kept (it always wins) so it cannot hide.
  void record(const std::string& name, double value, ResidualKind kind = ResidualKind::Check,
              std::string detail = {});
  void merge(const ResidualBlock& other);
  void flag(std::string text);

  const std::map<std::string, Residual>& entries() const { return entries_; }
  const std::vector<std::string>& flags() const { return flags_; }
  bool contains(const std::string& name) const { return entries_.contains(name); }
  double value(const std::string& name) const;

 private:
  std::map<std::string, Residual> entries_;
  std::vector<std::string> flags_;
};

// Running max of |x| over the free indices of an identity.
class MaxAbs {
 public:
  void add(double x);
  // |x - y| / max(1, |y|)
  void add_relative(double x, double reference);
  double value() const { return value_; }

 private:
  double value_ = 0.0;
};

}  // namespace threadsplit
