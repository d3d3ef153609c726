#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "threadsplit/jet.hpp"

namespace threadsplit {

using ParamTable = std::map<std::string, double, std::less<>>;

// Byte range [begin, end) into the parsed source.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

enum class ExprKind { Number, Identifier, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Function { Sin, Cos, Tan, Exp, Ln, Sqrt, Sinh, Cosh, Tanh };

const char* function_name(Function f);

struct ExprNode {
  ExprKind kind;
  double number = 0.0;  // Number
  std::string name;     // Identifier
  Function function = Function::Sin;  // Call
  std::vector<std::shared_ptr<const ExprNode>> children;
  SourceSpan span;
};

// Immutable scalar-field expression. Copies share the tree.
class Expr {
 public:
  Expr() = default;
  Expr(std::shared_ptr<const ExprNode> root, std::shared_ptr<const std::string> source)
      : root_(std::move(root)), source_(std::move(source)) {}

  static Expr number(double v);

  const ExprNode& root() const { return *root_; }
  bool empty() const { return root_ == nullptr; }
  std::string_view source() const { return source_ ? std::string_view(*source_) : std::string_view{}; }
  std::string_view text(const SourceSpan& span) const;

  // Minimal-parenthesis rendering that reparses to the same tree.
  std::string to_string() const;
  // S-expression dump used by `threadsplit parse`.
  std::string to_sexpr() const;
  bool structurally_equal(const Expr& other) const;
  bool uses_coordinates() const;

 private:
  std::shared_ptr<const ExprNode> root_;
  std::shared_ptr<const std::string> source_;
};

// Grammar (see docs/exprlang.md):
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?
//   atom  := number | ident | ident '(' expr ')' | '(' expr ')'
// Throws Error{Syntax} whose message carries the byte offset and the
// expected-token set.
Expr parse_expr(std::string_view text);

inline bool is_coordinate_name(std::string_view name) {
  return name.size() == 2 && name[0] == 'x' && name[1] >= '0' && name[1] <= '3';
}

// Identifiers that are neither x0..x3 nor in `params`, in first-use order.
std::vector<std::string> validate_bindings(const Expr& e, const std::set<std::string, std::less<>>& params);

// Jet of the field at the env's base point. Parameters enter as constants.
// Jet domain errors are rethrown with the offending subexpression's span.
Jet eval_expr(const Expr& e, const JetEnv& env, const ParamTable& params);

}  // namespace threadsplit
