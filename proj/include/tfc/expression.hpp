#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace tfc {

/// Parsed real-valued expression of the single variable t.
///
/// Grammar (precedence low to high, '^' right-associative):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?
///   primary := number | 't' | 'pi' | 'e' | func '(' expr (',' expr)? ')' | '(' expr ')'
/// Functions: sin cos tan exp log sqrt abs, and pow with two arguments.
///
/// Evaluation is pure; a parsed Expression may be shared between threads.
class Expression {
 public:
  /// Throws ParseError carrying the byte offset and the expected tokens.
  static Expression parse(std::string_view source);

  double operator()(double t) const;
  const std::string& source() const { return source_; }

  struct Node;

 private:
  Expression(std::shared_ptr<const Node> root, std::string source)
      : root_(std::move(root)), source_(std::move(source)) {}

  std::shared_ptr<const Node> root_;
  std::string source_;
};

inline Expression parse_expression(std::string_view source) { return Expression::parse(source); }

}  // namespace tfc
