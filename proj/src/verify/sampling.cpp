#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "threadsplit/error.hpp"
#include "threadsplit/report.hpp"

namespace threadsplit {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(std::string_view s, const std::string& context) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::Input, "bad number '" + std::string(s) + "' in " + context);
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// "x0=..,x2=.." into per-coordinate value strings; absent ones stay empty.
std::array<std::string, kDim> coordinate_fields(std::string_view text, const char* what) {
  std::array<std::string, kDim> fields;
  std::array<bool, kDim> seen{};
  for (auto item : split(text, ',')) {
    item = trim(item);
    if (item.empty()) throw Error(ErrorKind::Input, std::string("empty entry in ") + what);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::Input, std::string("expected x<k>=... in ") + what + ", got '" + std::string(item) + "'");
    }
    const auto key = trim(item.substr(0, eq));
    if (!is_coordinate_name(key)) {
      throw Error(ErrorKind::Input, std::string("unknown coordinate '") + std::string(key) + "' in " + what);
    }
    const int k = key[1] - '0';
    if (seen[k]) throw Error(ErrorKind::Input, std::string("coordinate ") + std::string(key) + " repeated in " + what);
    seen[k] = true;
    fields[k] = std::string(trim(item.substr(eq + 1)));
  }
  return fields;
}

}  // namespace

std::vector<Point> parse_points(std::string_view text) {
  std::vector<Point> out;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::string buf(line);
    for (char& c : buf) {
      if (c == ',') c = ' ';
    }
    std::istringstream in(buf);
    std::vector<std::string> tokens;
    for (std::string t; in >> t;) tokens.push_back(t);
    if (!tokens.empty()) {
      if (tokens.size() != kDim) {
        throw Error(ErrorKind::Input, "points line " + std::to_string(line_no) + ": expected 4 coordinates, got " +
                                          std::to_string(tokens.size()));
      }
      Point p;
      for (int k = 0; k < kDim; ++k) p[k] = parse_real(tokens[k], "points line " + std::to_string(line_no));
      out.push_back(p);
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::vector<Point> load_points_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Input, "cannot open points file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_points(ss.str());
}

std::vector<Point> parse_grid(std::string_view text) {
  const auto fields = coordinate_fields(text, "grid");
  std::array<std::vector<double>, kDim> axes;
  for (int k = 0; k < kDim; ++k) {
    if (fields[k].empty()) {
      axes[k] = {0.0};
      continue;
    }
    const auto parts = split(fields[k], ':');
    const std::string ctx = "grid x" + std::to_string(k);
    if (parts.size() == 1) {
      axes[k] = {parse_real(parts[0], ctx)};
    } else if (parts.size() == 3) {
      const double a = parse_real(parts[0], ctx);
      const double b = parse_real(parts[1], ctx);
      const double c = parse_real(parts[2], ctx);
      if (c < 1 || c != std::floor(c) || c > 1e6) {
        throw Error(ErrorKind::Input, ctx + ": count must be a positive integer");
      }
      const int n = static_cast<int>(c);
      if (n == 1 && a != b) throw Error(ErrorKind::Input, ctx + ": count 1 needs start == stop");
      for (int i = 0; i < n; ++i) axes[k].push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    } else {
      throw Error(ErrorKind::Input, ctx + ": expected value or start:stop:count");
    }
  }
  std::vector<Point> out;
  for (double x0 : axes[0]) {
    for (double x1 : axes[1]) {
      for (double x2 : axes[2]) {
        for (double x3 : axes[3]) out.push_back({x0, x1, x2, x3});
      }
    }
  }
  return out;
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<Point> random_points(std::size_t n, std::uint64_t seed, std::string_view box) {
  const auto fields = coordinate_fields(box, "box");
  std::array<std::pair<double, double>, kDim> range{};
  for (int k = 0; k < kDim; ++k) {
    if (fields[k].empty()) continue;
    const auto parts = split(fields[k], ':');
    const std::string ctx = "box x" + std::to_string(k);
    if (parts.size() == 1) {
      const double v = parse_real(parts[0], ctx);
      range[k] = {v, v};
    } else if (parts.size() == 2) {
      range[k] = {parse_real(parts[0], ctx), parse_real(parts[1], ctx)};
      if (range[k].second < range[k].first) throw Error(ErrorKind::Input, ctx + ": lower bound above upper bound");
    } else {
      throw Error(ErrorKind::Input, ctx + ": expected lo:hi");
    }
  }
  SplitMix64 rng(seed);
  std::vector<Point> out(n);
  for (auto& p : out) {
    for (int k = 0; k < kDim; ++k) p[k] = range[k].first + (range[k].second - range[k].first) * rng.uniform();
  }
  return out;
}

}  // namespace threadsplit
