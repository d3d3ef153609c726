#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "json.hpp"

#include "threadsplit/error.hpp"
#include "threadsplit/report.hpp"

namespace threadsplit {

namespace {

using json = nlohmann::ordered_json;

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::map<std::string, double> summary(const Report& r) {
  std::map<std::string, double> s;
  for (const auto& p : r.points) {
    for (const auto& [name, res] : p.residuals.entries()) {
      auto [it, inserted] = s.try_emplace(name, res.value);
      if (!inserted && (std::isnan(res.value) || (!std::isnan(it->second) && res.value > it->second))) {
        it->second = res.value;
      }
    }
  }
  return s;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::Input, "sha256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string report_json(const Report& r) {
  json j;
  j["version"] = kReportVersion;
  j["spec_sha256"] = r.spec_sha256;
  json s = json::object();
  for (const auto& [name, v] : summary(r)) s[name] = number(v);
  j["summary"] = s;
  std::set<std::string> flags;
  json pts = json::array();
  for (const auto& p : r.points) {
    json e;
    e["x"] = json::array({p.x[0], p.x[1], p.x[2], p.x[3]});
    e["status"] = to_string(p.status);
    json res = json::object();
    for (const auto& [name, v] : p.residuals.entries()) res[name] = number(v.value);
    e["residuals"] = res;
    e["flags"] = p.residuals.flags();
    if (!p.error.empty()) e["error"] = p.error;
    flags.insert(p.residuals.flags().begin(), p.residuals.flags().end());
    pts.push_back(std::move(e));
  }
  j["flags"] = flags;
  j["points"] = std::move(pts);
  return j.dump(2) + "\n";
}

std::string report_csv(const Report& r) {
  std::string out = "check,max_residual\n";
  char buf[64];
  for (const auto& [name, v] : summary(r)) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += name + "," + buf + "\n";
  }
  return out;
}

int exit_code(const Report& r) {
  bool violation = false;
  for (const auto& p : r.points) {
    if (p.status == PointStatus::InputError) return 2;
    if (p.status == PointStatus::Violation) violation = true;
  }
  return violation ? 1 : 0;
}

}  // namespace threadsplit
