#include <cstdio>
#include <sstream>

#include "threadsplit/error.hpp"
#include "threadsplit/expr.hpp"

namespace threadsplit {

namespace {

// Binding strength used by the printer: higher binds tighter.
int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Add:
    case ExprKind::Sub:
      return 1;
    case ExprKind::Mul:
    case ExprKind::Div:
      return 2;
    case ExprKind::Neg:
      return 3;
    case ExprKind::Pow:
      return 4;
    default:
      return 5;
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print(const ExprNode& n, std::string& out);

void print_child(const ExprNode& child, int min_prec, std::string& out) {
  if (precedence(child.kind) < min_prec) {
    out += '(';
    print(child, out);
    out += ')';
  } else {
    print(child, out);
  }
}

void print(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case ExprKind::Number:
      out += format_number(n.number);
      return;
    case ExprKind::Identifier:
      out += n.name;
      return;
    case ExprKind::Call:
      out += function_name(n.function);
      out += '(';
      print(*n.children[0], out);
      out += ')';
      return;
    case ExprKind::Neg:
      out += '-';
      print_child(*n.children[0], 3, out);
      return;
    case ExprKind::Pow:
      print_child(*n.children[0], 5, out);
      out += '^';
      print_child(*n.children[1], 3, out);
      return;
    case ExprKind::Mul:
    case ExprKind::Div:
      print_child(*n.children[0], 2, out);
      out += n.kind == ExprKind::Mul ? " * " : " / ";
      print_child(*n.children[1], 3, out);
      return;
    case ExprKind::Add:
    case ExprKind::Sub:
      print_child(*n.children[0], 1, out);
      out += n.kind == ExprKind::Add ? " + " : " - ";
      print_child(*n.children[1], 2, out);
      return;
  }
}

void sexpr(const ExprNode& n, std::ostringstream& out) {
  switch (n.kind) {
    case ExprKind::Number:
      out << format_number(n.number);
      return;
    case ExprKind::Identifier:
      out << n.name;
      return;
    case ExprKind::Call:
      out << '(' << function_name(n.function) << ' ';
      sexpr(*n.children[0], out);
      out << ')';
      return;
    default:
      break;
  }
  static constexpr const char* names[] = {"", "", "neg", "+", "-", "*", "/", "^", ""};
  out << '(' << names[static_cast<int>(n.kind)];
  for (const auto& c : n.children) {
    out << ' ';
    sexpr(*c, out);
  }
  out << ')';
}

bool equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case ExprKind::Number:
      if (a.number != b.number) return false;
      break;
    case ExprKind::Identifier:
      if (a.name != b.name) return false;
      break;
    case ExprKind::Call:
      if (a.function != b.function) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

bool any_coordinate(const ExprNode& n) {
  if (n.kind == ExprKind::Identifier) return is_coordinate_name(n.name);
  for (const auto& c : n.children) {
    if (any_coordinate(*c)) return true;
  }
  return false;
}

void collect_unbound(const ExprNode& n, const std::set<std::string, std::less<>>& params,
                     std::vector<std::string>& out) {
  if (n.kind == ExprKind::Identifier && !is_coordinate_name(n.name) && !params.contains(n.name)) {
    bool seen = false;
    for (const auto& s : out) seen = seen || s == n.name;
    if (!seen) out.push_back(n.name);
  }
  for (const auto& c : n.children) collect_unbound(*c, params, out);
}

class Evaluator {
 public:
  Evaluator(const Expr& e, const JetEnv& env, const ParamTable& params)
      : expr_(e), env_(env), params_(params), order_(env[0].order()) {}

  Jet eval(const ExprNode& n) const {
    switch (n.kind) {
      case ExprKind::Number:
        return Jet::constant(n.number, order_);
      case ExprKind::Identifier: {
        if (is_coordinate_name(n.name)) return env_[n.name[1] - '0'];
        const auto it = params_.find(n.name);
        if (it == params_.end()) {
          throw Error(ErrorKind::UnboundIdentifier, "unbound identifier '" + n.name + "'");
        }
        return Jet::constant(it->second, order_);
      }
      case ExprKind::Neg:
        return -eval(*n.children[0]);
      case ExprKind::Add:
        return eval(*n.children[0]) + eval(*n.children[1]);
      case ExprKind::Sub:
        return eval(*n.children[0]) - eval(*n.children[1]);
      case ExprKind::Mul:
        return eval(*n.children[0]) * eval(*n.children[1]);
      case ExprKind::Div:
        return guarded(n, [&] { return eval(*n.children[0]) / eval(*n.children[1]); });
      case ExprKind::Pow:
        return guarded(n, [&] {
          const Jet base = eval(*n.children[0]);
          const Jet exponent = eval(*n.children[1]);
          return pow(base, exponent);
        });
      case ExprKind::Call:
        return guarded(n, [&] { return call(n.function, eval(*n.children[0])); });
    }
    return {};
  }

 private:
  const Expr& expr_;
  const JetEnv& env_;
  const ParamTable& params_;
  int order_;

  static Jet call(Function f, const Jet& a) {
    switch (f) {
      case Function::Sin:
        return sin(a);
      case Function::Cos:
        return cos(a);
      case Function::Tan:
        return tan(a);
      case Function::Exp:
        return exp(a);
      case Function::Ln:
        return log(a);
      case Function::Sqrt:
        return sqrt(a);
      case Function::Sinh:
        return sinh(a);
      case Function::Cosh:
        return cosh(a);
      case Function::Tanh:
        return tanh(a);
    }
    return a;
  }

  template <class F>
  Jet guarded(const ExprNode& n, F&& f) const {
    try {
      return f();
    } catch (const Error& e) {
      if ((e.kind() != ErrorKind::DomainErrorAtPoint && e.kind() != ErrorKind::DivisionByZeroAtPoint) ||
          std::string_view(e.what()).find(" in '") != std::string_view::npos) {
        throw;
      }
      std::ostringstream msg;
      msg << e.what() << " in '" << expr_.text(n.span) << "' at bytes [" << n.span.begin << ", "
          << n.span.end << ")";
      throw Error(e.kind(), msg.str());
    }
  }
};

}  // namespace

std::string Expr::to_string() const {
  std::string out;
  if (root_) print(*root_, out);
  return out;
}

std::string Expr::to_sexpr() const {
  std::ostringstream out;
  if (root_) sexpr(*root_, out);
  return out.str();
}

bool Expr::structurally_equal(const Expr& other) const {
  if (!root_ || !other.root_) return root_ == other.root_;
  return equal(*root_, *other.root_);
}

bool Expr::uses_coordinates() const { return root_ && any_coordinate(*root_); }

std::vector<std::string> validate_bindings(const Expr& e, const std::set<std::string, std::less<>>& params) {
  std::vector<std::string> out;
  if (!e.empty()) collect_unbound(e.root(), params, out);
  return out;
}

Jet eval_expr(const Expr& e, const JetEnv& env, const ParamTable& params) {
  return Evaluator(e, env, params).eval(e.root());
}

}  // namespace threadsplit
