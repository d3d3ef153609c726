#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "threadsplit/pipeline.hpp"

namespace threadsplit {

inline constexpr const char* kReportVersion = "1";

// Points file: one point per line, four reals separated by spaces or commas.
std::vector<Point> parse_points(std::string_view text);
std::vector<Point> load_points_file(const std::string& path);

// "x0=1:3:5,x1=0,x2=-1:1:3" (start:stop:count, inclusive; absent coordinates are 0).
std::vector<Point> parse_grid(std::string_view text);

// Box "x0=1:3,x1=-1:1" (absent coordinates are 0) sampled with splitmix64.
std::vector<Point> random_points(std::size_t n, std::uint64_t seed, std::string_view box);

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();  // [0, 1), 53 bits

 private:
  std::uint64_t state_;
};

std::string sha256_hex(std::string_view bytes);

struct Report {
  std::string spec_sha256;
  std::vector<PointResult> points;
};

std::string report_json(const Report& r);
std::string report_csv(const Report& r);

// 0 when every point is ok, 2 if any point had an input error, else 1.
int exit_code(const Report& r);

}  // namespace threadsplit
