#include "confbvp/cli/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace confbvp::cli {

ParseError::ParseError(const std::string& message, std::string token, int column)
    : DomainError(message + " at column " + std::to_string(column)),
      token_(std::move(token)),
      column_(column) {}

// Postfix program evaluated on a small stack.
struct Expression::Program {
  enum class Op { number, t, x, add, sub, mul, div, pow, neg, sin, cos, exp };
  struct Instr {
    Op op;
    double value = 0.0;
  };
  static constexpr int kStack = 64;
  std::vector<Instr> code;

  double run(double t, double x) const {
    double stack[kStack];
    int top = 0;
    for (const auto& in : code) {
      switch (in.op) {
        case Op::number: stack[top++] = in.value; break;
        case Op::t: stack[top++] = t; break;
        case Op::x: stack[top++] = x; break;
        case Op::neg: stack[top - 1] = -stack[top - 1]; break;
        case Op::sin: stack[top - 1] = std::sin(stack[top - 1]); break;
        case Op::cos: stack[top - 1] = std::cos(stack[top - 1]); break;
        case Op::exp: stack[top - 1] = std::exp(stack[top - 1]); break;
        default: {
          const double r = stack[--top];
          double& l = stack[top - 1];
          if (in.op == Op::add) l += r;
          else if (in.op == Op::sub) l -= r;
          else if (in.op == Op::mul) l *= r;
          else if (in.op == Op::div) l /= r;
          else l = std::pow(l, r);
        }
      }
    }
    return stack[0];
  }
};

namespace {

using Op = Expression::Program::Op;
using Instr = Expression::Program::Instr;

constexpr int kMaxDepth = 60;

bool parse_number(std::string_view text, double& out) {
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

class Parser {
 public:
  Parser(std::string_view src, Arity arity) : src_(src), arity_(arity) {}

  std::vector<Instr> parse() {
    next();
    sum();
    if (kind_ != Kind::end) fail("unexpected token '" + token_ + "'");
    return std::move(code_);
  }

  bool uses_x() const { return uses_x_; }

 private:
  enum class Kind { number, name, op, lparen, rparen, end };

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, token_, start_ + 1);
  }

  void next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    start_ = static_cast<int>(pos_);
    if (pos_ >= src_.size()) {
      kind_ = Kind::end;
      token_ = "end of input";
      return;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end = pos_;
      while (end < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[end])) || src_[end] == '.')) ++end;
      if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
        std::size_t exp = end + 1;
        if (exp < src_.size() && (src_[exp] == '+' || src_[exp] == '-')) ++exp;
        if (exp < src_.size() && std::isdigit(static_cast<unsigned char>(src_[exp]))) {
          end = exp;
          while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
        }
      }
      token_ = std::string(src_.substr(pos_, end - pos_));
      pos_ = end;
      if (!parse_number(token_, number_)) fail("malformed number '" + token_ + "'");
      kind_ = Kind::number;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) ++end;
      token_ = std::string(src_.substr(pos_, end - pos_));
      pos_ = end;
      kind_ = Kind::name;
      return;
    }
    token_ = std::string(1, c);
    ++pos_;
    if (c == '(') kind_ = Kind::lparen;
    else if (c == ')') kind_ = Kind::rparen;
    else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') kind_ = Kind::op;
    else fail("unexpected character '" + token_ + "'");
  }

  bool at_op(char c) const { return kind_ == Kind::op && token_[0] == c; }

  void emit(Op op, double v = 0.0) { code_.push_back({op, v}); }

  void enter() {
    if (++depth_ > kMaxDepth) fail("expression nested too deeply");
  }

  // sum := product (('+' | '-') product)*
  void sum() {
    enter();
    product();
    while (at_op('+') || at_op('-')) {
      const Op op = token_[0] == '+' ? Op::add : Op::sub;
      next();
      product();
      emit(op);
    }
    --depth_;
  }

  // product := unary (('*' | '/') unary)*
  void product() {
    unary();
    while (at_op('*') || at_op('/')) {
      const Op op = token_[0] == '*' ? Op::mul : Op::div;
      next();
      unary();
      emit(op);
    }
  }

  // unary := '-' unary | '+' unary | power
  void unary() {
    if (at_op('-') || at_op('+')) {
      const bool negate = token_[0] == '-';
      enter();
      next();
      unary();
      --depth_;
      if (negate) emit(Op::neg);
      return;
    }
    power();
  }

  // power := atom ('^' unary)?   (right associative, binds tighter than unary minus on its left)
  void power() {
    atom();
    if (at_op('^')) {
      enter();
      next();
      unary();
      --depth_;
      emit(Op::pow);
    }
  }

  void atom() {
    switch (kind_) {
      case Kind::number:
        emit(Op::number, number_);
        next();
        return;
      case Kind::lparen:
        next();
        sum();
        if (kind_ != Kind::rparen) fail("expected ')' but found '" + token_ + "'");
        next();
        return;
      case Kind::name: name(); return;
      default: fail("unexpected token '" + token_ + "'");
    }
  }

  void name() {
    const std::string id = token_;
    if (id == "t") {
      emit(Op::t);
      next();
      return;
    }
    if (id == "x") {
      if (arity_ == Arity::t_only) fail("'x' is not available in a function of t alone");
      uses_x_ = true;
      emit(Op::x);
      next();
      return;
    }
    if (id == "pi") {
      emit(Op::number, std::numbers::pi);
      next();
      return;
    }
    Op fn;
    if (id == "sin") fn = Op::sin;
    else if (id == "cos") fn = Op::cos;
    else if (id == "exp") fn = Op::exp;
    else fail("unknown identifier '" + id + "'");
    next();
    if (kind_ != Kind::lparen) fail("expected '(' after '" + id + "' but found '" + token_ + "'");
    next();
    sum();
    if (kind_ != Kind::rparen) fail("expected ')' but found '" + token_ + "'");
    next();
    emit(fn);
  }

  std::string_view src_;
  Arity arity_;
  std::size_t pos_ = 0;
  int start_ = 0;
  int depth_ = 0;
  Kind kind_ = Kind::end;
  std::string token_;
  double number_ = 0.0;
  std::vector<Instr> code_;
  bool uses_x_ = false;
};

std::vector<double> parse_list(const std::string& spec, std::size_t offset) {
  std::vector<double> out;
  std::size_t start = offset;
  while (true) {
    const std::size_t comma = spec.find(',', start);
    const std::size_t end = comma == std::string::npos ? spec.size() : comma;
    std::string item = spec.substr(start, end - start);
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    item = first == std::string::npos ? "" : item.substr(first, last - first + 1);
    double v = 0.0;
    if (item.empty() || !parse_number(item, v)) {
      throw ParseError("malformed number '" + item + "'", item, static_cast<int>(start) + 1);
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

double Expression::operator()(double t, double x) const { return program_->run(t, x); }

ScalarFn Expression::scalar() const {
  auto program = program_;
  return [program](double t) { return program->run(t, 0.0); };
}

BivariateFn Expression::bivariate() const {
  auto program = program_;
  return [program](double t, double x) { return program->run(t, x); };
}

Expression parse_expression(const std::string& spec, Arity arity) {
  auto program = std::make_shared<Expression::Program>();
  Expression e;
  e.source_ = spec;
  const Op z = arity == Arity::t_only ? Op::t : Op::x;
  e.uses_x_ = z == Op::x;

  if (spec.rfind("const:", 0) == 0) {
    const auto v = parse_list(spec, 6);
    if (v.size() != 1) throw ParseError("const: takes exactly one value", spec.substr(6), 7);
    program->code = {{Op::number, v[0]}};
    e.uses_x_ = false;
  } else if (spec.rfind("poly:", 0) == 0) {
    // Horner: (((c_n) z + c_{n-1}) z + ...) z + c_0.
    const auto c = parse_list(spec, 5);
    program->code.push_back({Op::number, c.back()});
    for (std::size_t k = c.size() - 1; k-- > 0;) {
      program->code.push_back({z});
      program->code.push_back({Op::mul});
      program->code.push_back({Op::number, c[k]});
      program->code.push_back({Op::add});
    }
    if (c.size() == 1) e.uses_x_ = false;
  } else if (spec == "sin" || spec == "cos" || spec == "exp") {
    const Op fn = spec == "sin" ? Op::sin : spec == "cos" ? Op::cos : Op::exp;
    program->code = {{z}, {fn}};
  } else {
    Parser parser(spec, arity);
    program->code = parser.parse();
    e.uses_x_ = parser.uses_x();
  }
  int depth = 0;
  for (const auto& in : program->code) {
    if (in.op == Op::number || in.op == Op::t || in.op == Op::x) ++depth;
    else if (in.op != Op::neg && in.op != Op::sin && in.op != Op::cos && in.op != Op::exp) --depth;
    if (depth > Expression::Program::kStack) throw ParseError("expression nested too deeply", spec, 1);
  }
  e.program_ = std::move(program);
  return e;
}

}  // namespace confbvp::cli
