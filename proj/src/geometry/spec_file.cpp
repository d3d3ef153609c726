#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "threadsplit/error.hpp"
#include "threadsplit/metric.hpp"

namespace threadsplit {

namespace {

bool uses_spatial_coordinate(const ExprNode& n) {
  if (n.kind == ExprKind::Identifier) return is_coordinate_name(n.name) && n.name != "x0";
  for (const auto& c : n.children) {
    if (uses_spatial_coordinate(*c)) return true;
  }
  return false;
}


std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry, std::less<>>;

std::string where(std::string_view section, std::string_view key, int line) {
  std::ostringstream out;
  out << "[" << section << "] " << key << " (line " << line << ")";
  return out.str();
}

double parse_real(std::string_view section, std::string_view key, const Entry& e) {
  std::string_view v = trim(e.value);
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw Error(ErrorKind::Syntax,
                "SyntaxError: expected a real number for " + where(section, key, e.line) + ", found '" +
                    std::string(v) + "'");
  }
  return out;
}

class SpecReader {
 public:
  explicit SpecReader(std::string_view text) { split(text); }

  MetricSpec build() {
    MetricSpec spec;
    read_params(spec);
    read_metric(spec);
    read_matter(spec);
    read_constants(spec);
    read_cosmology(spec);
    validate(spec);
    return spec;
  }

 private:
  std::map<std::string, Section, std::less<>> sections_;
  std::vector<std::pair<std::string, Expr>> exprs_;

  static constexpr std::string_view kSections[] = {"params", "metric", "matter", "constants", "cosmology"};

  void split(std::string_view text) {
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          throw Error(ErrorKind::Syntax, "SyntaxError: unterminated section header at line " + std::to_string(line_no));
        }
        current = std::string(trim(line.substr(1, line.size() - 2)));
        bool known = false;
        for (auto s : kSections) known = known || s == current;
        if (!known) {
          throw Error(ErrorKind::Input, "unknown section [" + current + "] at line " + std::to_string(line_no));
        }
        sections_[current];
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw Error(ErrorKind::Syntax, "SyntaxError: expected 'key = value' at line " + std::to_string(line_no));
      }
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (current.empty()) {
        throw Error(ErrorKind::Input, "key '" + key + "' at line " + std::to_string(line_no) + " is outside any section");
      }
      if (!is_identifier(key)) {
        throw Error(ErrorKind::Syntax, "SyntaxError: invalid key '" + key + "' at line " + std::to_string(line_no));
      }
      auto& section = sections_[current];
      if (section.contains(key)) {
        throw Error(ErrorKind::DuplicateKey, "DuplicateKey " + key + " in [" + current + "] at line " +
                                                 std::to_string(line_no) + " (first at line " +
                                                 std::to_string(section.at(key).line) + ")");
      }
      section.emplace(key, Entry{value, line_no});
    }
  }

  const Section* section(std::string_view name) const {
    const auto it = sections_.find(name);
    return it == sections_.end() ? nullptr : &it->second;
  }

  void reject_unknown(std::string_view name, std::initializer_list<std::string_view> allowed) const {
    const Section* s = section(name);
    if (s == nullptr) return;
    for (const auto& [key, entry] : *s) {
      bool ok = false;
      for (auto a : allowed) ok = ok || a == key;
      if (ok) continue;
      std::string hint;
      if (key.size() == 3 && (key[0] == 'g') && key[1] > key[2]) hint = " (use g" + std::string{key[2], key[1]} + ")";
      if (key.size() == 4 && key.starts_with("pi") && key[2] > key[3]) {
        hint = " (use pi" + std::string{key[3], key[2]} + ")";
      }
      throw Error(ErrorKind::Input, "unknown key " + where(name, key, entry.line) + hint);
    }
  }

  Expr expr(std::string_view sec, std::string_view key, const Entry& e) {
    Expr out;
    try {
      out = parse_expr(e.value);
    } catch (const Error& err) {
      throw Error(err.kind(), std::string(err.what()) + " in " + where(sec, key, e.line));
    }
    exprs_.emplace_back(where(sec, key, e.line), out);
    return out;
  }

  Expr required(std::string_view sec, std::string_view key) {
    const Section* s = section(sec);
    const auto it = s == nullptr ? Section::const_iterator{} : s->find(key);
    if (s == nullptr || it == s->end()) {
      throw Error(ErrorKind::MissingKey, "MissingKey " + std::string(key) + " in [" + std::string(sec) + "]");
    }
    return expr(sec, key, it->second);
  }

  Expr optional(std::string_view sec, std::string_view key, double fallback) {
    const Section* s = section(sec);
    if (s != nullptr) {
      if (const auto it = s->find(key); it != s->end()) return expr(sec, key, it->second);
    }
    return Expr::number(fallback);
  }

  void read_params(MetricSpec& spec) {
    const Section* s = section("params");
    if (s == nullptr) return;
    for (const auto& [name, entry] : *s) {
      if (is_coordinate_name(name)) {
        throw Error(ErrorKind::Input, "parameter " + where("params", name, entry.line) + " shadows a coordinate");
      }
      spec.params.emplace(name, parse_real("params", name, entry));
    }
  }

  void read_metric(MetricSpec& spec) {
    if (section("metric") == nullptr) throw Error(ErrorKind::MissingKey, "MissingKey Phi in [metric]");
    reject_unknown("metric", {"Phi", "xi1", "xi2", "xi3", "g11", "g12", "g13", "g22", "g23", "g33"});
    spec.phi = required("metric", "Phi");
    for (int i = 0; i < 3; ++i) spec.xi[i] = optional("metric", "xi" + std::to_string(i + 1), 0.0);
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        const std::string key = "g" + std::to_string(i + 1) + std::to_string(j + 1);
        spec.g[i][j] = i == j ? required("metric", key) : optional("metric", key, 0.0);
        spec.g[j][i] = spec.g[i][j];
      }
    }
  }

  void read_matter(MetricSpec& spec) {
    reject_unknown("matter", {"mode", "rho", "p", "q1", "q2", "q3", "pi11", "pi12", "pi13", "pi22", "pi23", "pi33"});
    const Section* s = section("matter");
    std::string mode = "from_efe";
    if (s != nullptr) {
      if (const auto it = s->find("mode"); it != s->end()) mode = it->second.value;
    }
    if (mode == "from_efe") {
      spec.mode = MatterMode::FromEfe;
      if (s != nullptr && s->size() > (s->contains("mode") ? 1u : 0u)) {
        throw Error(ErrorKind::Input, "[matter] fields are only allowed with mode = explicit");
      }
      return;
    }
    if (mode != "explicit") {
      throw Error(ErrorKind::Input, "[matter] mode must be from_efe or explicit, found '" + mode + "'");
    }
    spec.mode = MatterMode::Explicit;
    spec.matter.rho = required("matter", "rho");
    spec.matter.p = required("matter", "p");
    for (int i = 0; i < 3; ++i) spec.matter.q[i] = optional("matter", "q" + std::to_string(i + 1), 0.0);
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        spec.matter.pi[i][j] = optional("matter", "pi" + std::to_string(i + 1) + std::to_string(j + 1), 0.0);
        spec.matter.pi[j][i] = spec.matter.pi[i][j];
      }
    }
  }

  void read_constants(MetricSpec& spec) {
    reject_unknown("constants", {"lambda", "newton_g"});
    const Section* s = section("constants");
    if (s == nullptr) return;
    if (const auto it = s->find("lambda"); it != s->end()) spec.lambda = parse_real("constants", "lambda", it->second);
    if (const auto it = s->find("newton_g"); it != s->end()) {
      spec.newton_g = parse_real("constants", "newton_g", it->second);
      if (spec.newton_g == 0.0) throw Error(ErrorKind::Input, "newton_g must be non-zero");
    }
  }

  void read_cosmology(MetricSpec& spec) {
    reject_unknown("cosmology", {"a", "A", "B", "perfect_fluid"});
    const Section* s = section("cosmology");
    if (s == nullptr) return;
    CosmologyHint hint;
    hint.a = required("cosmology", "a");
    if (uses_spatial_coordinate(hint.a.root())) {
      throw Error(ErrorKind::Input, "cosmology: a must depend on x0 only in " +
                                        where("cosmology", "a", s->at("a").line));
    }
    hint.A = optional("cosmology", "A", 0.0);
    hint.B = optional("cosmology", "B", 0.0);
    if (const auto it = s->find("perfect_fluid"); it != s->end()) {
      if (it->second.value == "true") {
        hint.perfect_fluid = true;
      } else if (it->second.value != "false") {
        throw Error(ErrorKind::Input, "perfect_fluid must be true or false in " +
                                          where("cosmology", "perfect_fluid", it->second.line));
      }
    }
    if (hint.perfect_fluid) hint.B = hint.A;
    spec.cosmology = hint;
  }

  void validate(const MetricSpec& spec) const {
    std::set<std::string, std::less<>> names;
    for (const auto& [name, value] : spec.params) names.insert(name);
    for (const auto& [label, e] : exprs_) {
      const auto unbound = validate_bindings(e, names);
      if (unbound.empty()) continue;
      std::string list;
      for (const auto& u : unbound) list += (list.empty() ? "" : ", ") + u;
      throw Error(ErrorKind::UnboundIdentifier, "UnboundIdentifier " + list + " in " + label);
    }
  }
};

}  // namespace

MetricSpec load_spec(std::string_view text) { return SpecReader(text).build(); }

MetricSpec load_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Input, "cannot open spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_spec(buf.str());
}

}  // namespace threadsplit
