#include <cctype>
#include <charconv>
#include <sstream>

#include "threadsplit/error.hpp"
#include "threadsplit/expr.hpp"

namespace threadsplit {

namespace {

struct FunctionEntry {
  std::string_view name;
  Function fn;
};

constexpr FunctionEntry kFunctions[] = {
    {"sin", Function::Sin},   {"cos", Function::Cos},   {"tan", Function::Tan},
    {"exp", Function::Exp},   {"ln", Function::Ln},     {"sqrt", Function::Sqrt},
    {"sinh", Function::Sinh}, {"cosh", Function::Cosh}, {"tanh", Function::Tanh},
};

using NodePtr = std::shared_ptr<const ExprNode>;

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail({"operator", "end of input"});
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(std::initializer_list<std::string_view> expected) const {
    std::ostringstream msg;
    msg << "SyntaxError at offset " << pos_ << ": expected ";
    bool first = true;
    msg << '{';
    for (auto e : expected) {
      if (!first) msg << ", ";
      msg << e;
      first = false;
    }
    msg << '}';
    if (pos_ < text_.size()) {
      msg << ", found '" << text_[pos_] << "'";
    } else {
      msg << ", found end of input";
    }
    throw Error(ErrorKind::Syntax, msg.str());
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr make(ExprKind kind, std::vector<NodePtr> children, SourceSpan span) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->children = std::move(children);
    n->span = span;
    return n;
  }

  // The right operand is parsed before the span end is read.
  NodePtr make_binary(ExprKind kind, NodePtr lhs, NodePtr (Parser::*operand)(), std::size_t start) {
    NodePtr rhs = (this->*operand)();
    return make(kind, {std::move(lhs), std::move(rhs)}, {start, pos_});
  }

  NodePtr expr() {
    skip_ws();
    const std::size_t start = pos_;
    NodePtr lhs = term();
    for (;;) {
      skip_ws();
      if (accept('+')) {
        lhs = make_binary(ExprKind::Add, lhs, &Parser::term, start);
      } else if (accept('-')) {
        lhs = make_binary(ExprKind::Sub, lhs, &Parser::term, start);
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    skip_ws();
    const std::size_t start = pos_;
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(ExprKind::Mul, lhs, &Parser::unary, start);
      } else if (accept('/')) {
        lhs = make_binary(ExprKind::Div, lhs, &Parser::unary, start);
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    skip_ws();
    const std::size_t start = pos_;
    if (accept('-')) {
      NodePtr operand = unary();
      return make(ExprKind::Neg, {operand}, {start, pos_});
    }
    return power();
  }

  NodePtr power() {
    skip_ws();
    const std::size_t start = pos_;
    NodePtr base = atom();
    if (accept('^')) return make_binary(ExprKind::Pow, base, &Parser::unary, start);
    return base;
  }

  NodePtr atom() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) fail({"number", "identifier", "'('", "'-'"});
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) fail({"')'", "operator"});
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
        ++end;
      }
      std::string name(text_.substr(pos_, end - pos_));
      pos_ = end;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        const FunctionEntry* entry = nullptr;
        for (const auto& f : kFunctions) {
          if (f.name == name) entry = &f;
        }
        if (entry == nullptr) {
          pos_ = start;
          fail({"built-in function (sin, cos, tan, exp, ln, sqrt, sinh, cosh, tanh)"});
        }
        ++pos_;
        NodePtr arg = expr();
        if (!accept(')')) fail({"')'", "operator"});
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::Call;
        n->function = entry->fn;
        n->children = {arg};
        n->span = {start, pos_};
        return n;
      }
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprKind::Identifier;
      n->name = std::move(name);
      n->span = {start, pos_};
      return n;
    }
    fail({"number", "identifier", "'('", "'-'"});
  }

  NodePtr number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      const std::size_t from = end;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      return end - from;
    };
    std::size_t mantissa = digits();
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      mantissa += digits();
    }
    if (mantissa == 0) fail({"digit"});
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      ++end;
      if (end < text_.size() && (text_[end] == '+' || text_[end] == '-')) ++end;
      if (digits() == 0) {
        pos_ = end;
        fail({"exponent digits"});
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + end, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + end) fail({"number"});
    pos_ = end;
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Number;
    n->number = value;
    n->span = {start, end};
    return n;
  }
};

}  // namespace

const char* function_name(Function f) {
  for (const auto& e : kFunctions) {
    if (e.fn == f) return e.name.data();
  }
  return "?";
}

Expr parse_expr(std::string_view text) {
  auto source = std::make_shared<const std::string>(text);
  Parser parser(*source);
  return Expr(parser.parse(), source);
}

Expr Expr::number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Number;
  n->number = v;
  return Expr(n, nullptr);
}

std::string_view Expr::text(const SourceSpan& span) const {
  const auto src = source();
  if (span.end > src.size() || span.begin > span.end) return {};
  return src.substr(span.begin, span.end - span.begin);
}

}  // namespace threadsplit
