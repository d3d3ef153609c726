#pragma once

#include <string>
#include <vector>

#include "threadsplit/metric.hpp"
#include "threadsplit/residual.hpp"

namespace threadsplit {

struct RunOptions {
  int order = kMaxOrder;
  double tol = 1e-9;
  std::vector<std::string> checks;  // name prefixes; empty selects everything
};

enum class PointStatus { Ok, Violation, InputError };

const char* to_string(PointStatus s);

struct PointResult {
  Point x{};
  PointStatus status = PointStatus::Ok;
  ResidualBlock residuals;
  std::string error;  // set for InputError
};

// Runs every residual group at one point. A group that runs out of jet
// order is skipped with an "order-exhausted:<group>" flag; errors that
// make the point itself unusable turn the status into InputError.
PointResult evaluate_point(const MetricSpec& spec, const Point& x, const RunOptions& options);

// Evaluates all points with `threads` workers. Output order follows input.
std::vector<PointResult> evaluate_points(const MetricSpec& spec, const std::vector<Point>& points,
                                         const RunOptions& options, int threads);

bool check_selected(const std::vector<std::string>& checks, const std::string& name);

}  // namespace threadsplit
