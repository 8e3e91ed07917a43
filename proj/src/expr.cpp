#include "finsler/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "finsler/jet.hpp"

namespace finsler {

namespace {

const char* kind_name(ParseError::Kind k) {
  switch (k) {
    case ParseError::Kind::lexical: return "lexical error";
    case ParseError::Kind::syntax: return "parse error";
    case ParseError::Kind::unknown_identifier: return "unknown identifier";
    case ParseError::Kind::arity: return "arity error";
  }
  return "error";
}

std::shared_ptr<const ExprNode> make(ExprOp op, std::vector<std::shared_ptr<const ExprNode>> args) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

std::shared_ptr<const ExprNode> make_leaf(ExprOp op, double value, int index) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->value = value;
  n->index = index;
  return n;
}

struct Token {
  enum class Type { number, ident, op, lparen, rparen, comma, end } type;
  std::string_view text;
  double number = 0.0;
  std::size_t offset = 0;
};

class Parser {
 public:
  Parser(std::string_view src, int dimension) : src_(src), dimension_(dimension) { advance(); }

  std::shared_ptr<const ExprNode> parse() {
    auto e = parse_sum();
    if (tok_.type != Token::Type::end) fail(ParseError::Kind::syntax, "unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(ParseError::Kind kind, const std::string& what) const {
    throw ParseError(kind, tok_.offset + 1, what);
  }

  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    tok_ = {};
    tok_.offset = pos_;
    if (pos_ >= src_.size()) {
      tok_.type = Token::Type::end;
      return;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[end])) || src_[end] == '.')) {
        ++end;
      }
      if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
        std::size_t exp_end = end + 1;
        if (exp_end < src_.size() && (src_[exp_end] == '+' || src_[exp_end] == '-')) ++exp_end;
        if (exp_end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[exp_end]))) {
          while (exp_end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[exp_end]))) {
            ++exp_end;
          }
          end = exp_end;
        }
      }
      const auto text = src_.substr(pos_, end - pos_);
      double v = 0.0;
      const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
      if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw ParseError(ParseError::Kind::lexical, pos_ + 1,
                         "malformed number '" + std::string(text) + "'");
      }
      tok_.type = Token::Type::number;
      tok_.text = text;
      tok_.number = v;
      pos_ = end;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) {
        ++end;
      }
      tok_.type = Token::Type::ident;
      tok_.text = src_.substr(pos_, end - pos_);
      pos_ = end;
      return;
    }
    tok_.text = src_.substr(pos_, 1);
    switch (c) {
      case '+': case '-': case '*': case '/': case '^': tok_.type = Token::Type::op; break;
      case '(': tok_.type = Token::Type::lparen; break;
      case ')': tok_.type = Token::Type::rparen; break;
      case ',': tok_.type = Token::Type::comma; break;
      default:
        throw ParseError(ParseError::Kind::lexical, pos_ + 1,
                         std::string("unexpected character '") + c + "'");
    }
    ++pos_;
  }

  bool at_op(char c) const { return tok_.type == Token::Type::op && tok_.text[0] == c; }

  std::shared_ptr<const ExprNode> parse_sum() {
    auto lhs = parse_product();
    while (at_op('+') || at_op('-')) {
      const ExprOp op = at_op('+') ? ExprOp::add : ExprOp::sub;
      advance();
      lhs = make(op, {lhs, parse_product()});
    }
    return lhs;
  }

  std::shared_ptr<const ExprNode> parse_product() {
    auto lhs = parse_unary();
    while (at_op('*') || at_op('/')) {
      const ExprOp op = at_op('*') ? ExprOp::mul : ExprOp::div;
      advance();
      lhs = make(op, {lhs, parse_unary()});
    }
    return lhs;
  }

  std::shared_ptr<const ExprNode> parse_unary() {
    if (at_op('-')) {
      advance();
      return make(ExprOp::sub, {make_leaf(ExprOp::constant, 0.0, 0), parse_unary()});
    }
    if (at_op('+')) {
      advance();
      return parse_unary();
    }
    return parse_power();
  }

  std::shared_ptr<const ExprNode> parse_power() {
    auto base = parse_primary();
    if (at_op('^')) {
      advance();
      // right associative; the exponent may carry its own sign
      return make(ExprOp::pow, {base, parse_unary()});
    }
    return base;
  }

  std::shared_ptr<const ExprNode> parse_primary() {
    switch (tok_.type) {
      case Token::Type::number: {
        auto n = make_leaf(ExprOp::constant, tok_.number, 0);
        advance();
        return n;
      }
      case Token::Type::lparen: {
        advance();
        auto e = parse_sum();
        if (tok_.type != Token::Type::rparen) fail(ParseError::Kind::syntax, "expected ')'");
        advance();
        return e;
      }
      case Token::Type::ident: return parse_identifier();
      case Token::Type::end: fail(ParseError::Kind::syntax, "unexpected end of input");
      default: fail(ParseError::Kind::syntax, "unexpected '" + std::string(tok_.text) + "'");
    }
  }

  std::shared_ptr<const ExprNode> parse_identifier() {
    const Token id = tok_;
    const std::string name(id.text);
    static constexpr std::pair<const char*, ExprOp> functions[] = {
        {"sqrt", ExprOp::sqrt}, {"exp", ExprOp::exp}, {"log", ExprOp::log},
        {"sin", ExprOp::sin},   {"cos", ExprOp::cos}};
    for (const auto& [fname, op] : functions) {
      if (name != fname) continue;
      advance();
      if (tok_.type != Token::Type::lparen) fail(ParseError::Kind::syntax, "expected '(' after " + name);
      advance();
      std::vector<std::shared_ptr<const ExprNode>> args;
      if (tok_.type != Token::Type::rparen) {
        args.push_back(parse_sum());
        while (tok_.type == Token::Type::comma) {
          advance();
          args.push_back(parse_sum());
        }
      }
      if (tok_.type != Token::Type::rparen) fail(ParseError::Kind::syntax, "expected ')'");
      if (args.size() != 1) {
        throw ParseError(ParseError::Kind::arity, id.offset + 1,
                         name + " takes 1 argument, got " + std::to_string(args.size()));
      }
      advance();
      return make(op, std::move(args));
    }
    if ((name[0] == 'x' || name[0] == 'y') && name.size() > 1 &&
        std::all_of(name.begin() + 1, name.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      const int idx = std::stoi(name.substr(1));
      if (idx < 1 || (dimension_ > 0 && idx > dimension_)) {
        throw ParseError(ParseError::Kind::unknown_identifier, id.offset + 1,
                         "variable '" + name + "' out of range");
      }
      advance();
      return make_leaf(name[0] == 'x' ? ExprOp::var_x : ExprOp::var_y, 0.0, idx - 1);
    }
    throw ParseError(ParseError::Kind::unknown_identifier, id.offset + 1,
                     "unknown identifier '" + name + "'");
  }

  std::string_view src_;
  int dimension_;
  std::size_t pos_ = 0;
  Token tok_;
};

int extent(const ExprNode& n, ExprOp which) {
  int e = (n.op == which) ? n.index + 1 : 0;
  for (const auto& a : n.args) e = std::max(e, extent(*a, which));
  return e;
}

void print(const ExprNode& n, std::string& out) {
  switch (n.op) {
    case ExprOp::constant: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case ExprOp::var_x: out += "x" + std::to_string(n.index + 1); return;
    case ExprOp::var_y: out += "y" + std::to_string(n.index + 1); return;
    default: break;
  }
  static const char* names[] = {"", "", "", "add", "sub", "mul", "div", "pow",
                                "sqrt", "exp", "log", "sin", "cos"};
  out += names[static_cast<int>(n.op)];
  out += '(';
  for (std::size_t i = 0; i < n.args.size(); ++i) {
    if (i) out += ',';
    print(*n.args[i], out);
  }
  out += ')';
}

inline double make_like(double, double v) { return v; }
inline long double make_like(long double, double v) { return v; }
inline Jet make_like(const Jet& like, double v) {
  return Jet::constant(like.space_ptr(), v, like.order());
}

using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;

inline double real_pow(double a, double r) { return std::pow(a, r); }
inline long double real_pow(long double a, double r) { return std::pow(a, static_cast<long double>(r)); }
inline Jet real_pow(const Jet& a, double r) { return pow(a, r); }

template <class T>
T eval_node(const ExprNode& n, std::span<const T> x, std::span<const T> y, const T& like) {
  auto arg = [&](std::size_t i) { return eval_node<T>(*n.args[i], x, y, like); };
  switch (n.op) {
    case ExprOp::constant: return make_like(like, n.value);
    case ExprOp::var_x:
      if (static_cast<std::size_t>(n.index) >= x.size()) throw std::out_of_range("x index out of range");
      return x[n.index];
    case ExprOp::var_y:
      if (static_cast<std::size_t>(n.index) >= y.size()) throw std::out_of_range("y index out of range");
      return y[n.index];
    case ExprOp::add: return arg(0) + arg(1);
    case ExprOp::sub:
      if (n.args[0]->op == ExprOp::constant && n.args[0]->value == 0.0) return -arg(1);
      return arg(0) - arg(1);
    case ExprOp::mul: return arg(0) * arg(1);
    case ExprOp::div: return arg(0) / arg(1);
    case ExprOp::pow: {
      if (n.args[1]->op == ExprOp::constant) return real_pow(arg(0), n.args[1]->value);
      return exp(arg(1) * log(arg(0)));
    }
    case ExprOp::sqrt: return sqrt(arg(0));
    case ExprOp::exp: return exp(arg(0));
    case ExprOp::log: return log(arg(0));
    case ExprOp::sin: return sin(arg(0));
    case ExprOp::cos: return cos(arg(0));
  }
  throw std::logic_error("unreachable");
}

}  // namespace

ParseError::ParseError(Kind kind, std::size_t position, const std::string& message)
    : std::runtime_error(std::string(kind_name(kind)) + " at offset " + std::to_string(position) +
                         ": " + message),
      kind_(kind),
      position_(position) {}

ExprAst::ExprAst(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

ExprAst ExprAst::constant(double v) { return ExprAst(make_leaf(ExprOp::constant, v, 0)); }
ExprAst ExprAst::x(int index) { return ExprAst(make_leaf(ExprOp::var_x, 0.0, index)); }
ExprAst ExprAst::y(int index) { return ExprAst(make_leaf(ExprOp::var_y, 0.0, index)); }

int ExprAst::x_extent() const { return root_ ? extent(*root_, ExprOp::var_x) : 0; }
int ExprAst::y_extent() const { return root_ ? extent(*root_, ExprOp::var_y) : 0; }

std::string ExprAst::to_string() const {
  std::string out;
  if (root_) print(*root_, out);
  return out;
}

template <class T>
T ExprAst::eval(std::span<const T> x, std::span<const T> y, const T& like) const {
  if (!root_) throw std::logic_error("ExprAst: empty expression");
  return eval_node<T>(*root_, x, y, like);
}

template double ExprAst::eval<double>(std::span<const double>, std::span<const double>,
                                      const double&) const;
template long double ExprAst::eval<long double>(std::span<const long double>,
                                                std::span<const long double>,
                                                const long double&) const;
template Jet ExprAst::eval<Jet>(std::span<const Jet>, std::span<const Jet>, const Jet&) const;

ExprAst operator+(const ExprAst& a, const ExprAst& b) {
  return ExprAst(make(ExprOp::add, {a.root_ptr(), b.root_ptr()}));
}
ExprAst operator-(const ExprAst& a, const ExprAst& b) {
  return ExprAst(make(ExprOp::sub, {a.root_ptr(), b.root_ptr()}));
}
ExprAst operator*(const ExprAst& a, const ExprAst& b) {
  return ExprAst(make(ExprOp::mul, {a.root_ptr(), b.root_ptr()}));
}
ExprAst operator/(const ExprAst& a, const ExprAst& b) {
  return ExprAst(make(ExprOp::div, {a.root_ptr(), b.root_ptr()}));
}

ExprAst parse_metric(std::string_view source, int dimension) {
  return ExprAst(Parser(source, dimension).parse());
}

}  // namespace finsler
