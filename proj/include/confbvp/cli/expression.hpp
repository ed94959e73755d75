#pragma once

// Function specs accepted on the command line and in config files:
//   const:<v>            constant
//   poly:<c0,c1,...>     c0 + c1 z + c2 z^2 + ...
//   sin | cos | exp      the named function of z
//   anything else        arithmetic in t (and x for f): numbers, t, x, pi,
//                        + - * / ^, parentheses, sin(.), cos(.), exp(.)
// z is t for functions of t alone and x for a right-hand side f(t, x).

#include <memory>
#include <string>
#include <vector>

#include "confbvp/core.hpp"

namespace confbvp::cli {

class ParseError : public DomainError {
 public:
  ParseError(const std::string& message, std::string token, int column);
  const std::string& token() const noexcept { return token_; }
  /// 1-based column of the offending token in the spec string.
  int column() const noexcept { return column_; }

 private:
  std::string token_;
  int column_;
};

enum class Arity { t_only, t_and_x };

class Expression {
 public:
  double operator()(double t, double x = 0.0) const;
  const std::string& source() const noexcept { return source_; }
  bool uses_x() const noexcept { return uses_x_; }

  ScalarFn scalar() const;
  BivariateFn bivariate() const;

  struct Program;

 private:
  friend Expression parse_expression(const std::string&, Arity);
  std::string source_;
  bool uses_x_ = false;
  std::shared_ptr<const Program> program_;
};

Expression parse_expression(const std::string& spec, Arity arity = Arity::t_only);

}  // namespace confbvp::cli
