#include "threadsplit/residual.hpp"

#include <algorithm>
#include <cmath>

namespace threadsplit {

void ResidualBlock::record(const std::string& name, double value, ResidualKind kind, std::string detail) {
  value = std::fabs(value);
  auto [it, inserted] = entries_.try_emplace(name, Residual{value, kind, std::move(detail)});
  if (inserted) return;
  Residual& r = it->second;
  if (std::isnan(value) || (!std::isnan(r.value) && value > r.value)) {
    r.value = value;
    if (!detail.empty()) r.detail = std::move(detail);
  }
}

void ResidualBlock::merge(const ResidualBlock& other) {
  for (const auto& [name, r] : other.entries_) record(name, r.value, r.kind, r.detail);
  for (const auto& f : other.flags_) flag(f);
}

void ResidualBlock::flag(std::string text) {
  if (std::find(flags_.begin(), flags_.end(), text) == flags_.end()) flags_.push_back(std::move(text));
}

double ResidualBlock::value(const std::string& name) const {
  const auto it = entries_.find(name);
  return it == entries_.end() ? std::nan("") : it->second.value;
}

void MaxAbs::add(double x) {
  x = std::fabs(x);
  if (std::isnan(x) || x > value_) value_ = std::isnan(value_) ? value_ : x;
}

void MaxAbs::add_relative(double x, double reference) {
  add((x - reference) / std::fmax(1.0, std::fabs(reference)));
}

}  // namespace threadsplit
