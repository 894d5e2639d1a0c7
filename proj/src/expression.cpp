#include "tfc/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "tfc/error.hpp"

namespace tfc {

struct Expression::Node {
  enum class Kind { constant, variable, negate, add, sub, mul, div, pow, call };
  enum class Func { sin, cos, tan, exp, log, sqrt, abs, pow };

  Kind kind = Kind::constant;
  Func func = Func::sin;
  double value = 0.0;
  std::vector<std::unique_ptr<Node>> args;

  double eval(double t) const {
    switch (kind) {
      case Kind::constant: return value;
      case Kind::variable: return t;
      case Kind::negate: return -args[0]->eval(t);
      case Kind::add: return args[0]->eval(t) + args[1]->eval(t);
      case Kind::sub: return args[0]->eval(t) - args[1]->eval(t);
      case Kind::mul: return args[0]->eval(t) * args[1]->eval(t);
      case Kind::div: return args[0]->eval(t) / args[1]->eval(t);
      case Kind::pow: return std::pow(args[0]->eval(t), args[1]->eval(t));
      case Kind::call: return call(t);
    }
    return 0.0;
  }

  double call(double t) const {
    const double a = args[0]->eval(t);
    switch (func) {
      case Func::sin: return std::sin(a);
      case Func::cos: return std::cos(a);
      case Func::tan: return std::tan(a);
      case Func::exp: return std::exp(a);
      case Func::log: return std::log(a);
      case Func::sqrt: return std::sqrt(a);
      case Func::abs: return std::abs(a);
      case Func::pow: return std::pow(a, args[1]->eval(t));
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::unique_ptr<Node>;

NodePtr make_constant(double v) {
  auto n = std::make_unique<Node>();
  n->kind = Node::Kind::constant;
  n->value = v;
  return n;
}

NodePtr make_binary(Node::Kind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_unique<Node>();
  n->kind = kind;
  n->args.push_back(std::move(lhs));
  n->args.push_back(std::move(rhs));
  return n;
}

struct FunctionInfo {
  std::string_view name;
  Node::Func func;
  int arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"sin", Node::Func::sin, 1}, {"cos", Node::Func::cos, 1}, {"tan", Node::Func::tan, 1},
    {"exp", Node::Func::exp, 1}, {"log", Node::Func::log, 1}, {"sqrt", Node::Func::sqrt, 1},
    {"abs", Node::Func::abs, 1}, {"pow", Node::Func::pow, 2},
};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    skip_space();
    if (pos_ >= src_.size()) fail({"expression"}, "empty expression");
    auto root = expr();
    skip_space();
    if (pos_ < src_.size()) fail({"operator", "end of input"}, "unexpected trailing input");
    return root;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& msg) const {
    std::string list;
    for (const auto& e : expected) list += (list.empty() ? "" : ", ") + e;
    throw ParseError(
        pos_, std::move(expected),
        "parse error at offset " + std::to_string(pos_) + ": " + msg + " (expected " + list + ")");
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Node::Kind::add, std::move(lhs), term());
      } else if (accept('-')) {
        lhs = make_binary(Node::Kind::sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Node::Kind::mul, std::move(lhs), unary());
      } else if (accept('/')) {
        lhs = make_binary(Node::Kind::div, std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_unique<Node>();
      n->kind = Node::Kind::negate;
      n->args.push_back(unary());
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return make_binary(Node::Kind::pow, std::move(base), unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= src_.size()) fail({"number", "t", "function", "("}, "unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      auto inner = expr();
      if (!accept(')')) fail({")"}, "unbalanced parenthesis");
      return inner;
    }
    fail({"number", "t", "function", "("}, std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t count = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) fail({"digit"}, "malformed number");
    // Exponent only when digits follow, so "2e" is not swallowed.
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }
    double v = 0.0;
    const auto text = src_.substr(start, pos_ - start);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      pos_ = start;
      fail({"number"}, "malformed number");
    }
    return make_constant(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const auto name = src_.substr(start, pos_ - start);
    if (name == "t") {
      auto n = std::make_unique<Node>();
      n->kind = Node::Kind::variable;
      return n;
    }
    if (name == "pi") return make_constant(std::numbers::pi);
    if (name == "e") return make_constant(std::numbers::e);
    for (const auto& f : kFunctions) {
      if (f.name != name) continue;
      if (!accept('(')) fail({"("}, "function '" + std::string(name) + "' needs arguments");
      auto n = std::make_unique<Node>();
      n->kind = Node::Kind::call;
      n->func = f.func;
      n->args.push_back(expr());
      for (int a = 1; a < f.arity; ++a) {
        if (!accept(','))
          fail({","}, "function '" + std::string(name) + "' takes " + std::to_string(f.arity) +
                          " arguments");
        n->args.push_back(expr());
      }
      if (!accept(')')) fail({")"}, "missing ')' after function arguments");
      return n;
    }
    pos_ = start;
    fail({"t", "pi", "e", "function"}, "unknown identifier '" + std::string(name) + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view source) {
  Parser parser(source);
  NodePtr root = parser.parse();
  return Expression(std::shared_ptr<const Node>(std::move(root)), std::string(source));
}

double Expression::operator()(double t) const { return root_->eval(t); }

}  // namespace tfc
