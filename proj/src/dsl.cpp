#include "finsler/dsl.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

const std::map<std::string, ExprOp>& functions() {
  static const std::map<std::string, ExprOp> f = {
      {"conj", ExprOp::conj}, {"re", ExprOp::re},     {"im", ExprOp::im},   {"abs2", ExprOp::abs2},
      {"sqrt", ExprOp::sqrt}, {"log", ExprOp::log},   {"exp", ExprOp::exp},
  };
  return f;
}

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t k) {
    for (size_t t = 0; t < k; ++t) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() &&
                                                        std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && s[j] == '.') {
        ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      }
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
          while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
          j = k;
        } else {
          throw ParseError("malformed number exponent", line, col + static_cast<int>(j - i));
        }
      }
      t.kind = Tok::number;
      t.text = s.substr(i, j - i);
      t.number = std::strtod(t.text.c_str(), nullptr);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.kind = Tok::ident;
      t.text = s.substr(i, j - i);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    switch (c) {
      case '+': t.kind = Tok::plus; break;
      case '-': t.kind = Tok::minus; break;
      case '*': t.kind = Tok::star; break;
      case '/': t.kind = Tok::slash; break;
      case '^': t.kind = Tok::caret; break;
      case '(': t.kind = Tok::lparen; break;
      case ')': t.kind = Tok::rparen; break;
      case ',': t.kind = Tok::comma; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    t.text = std::string(1, c);
    advance(1);
    out.push_back(t);
  }
  Token end;
  end.kind = Tok::end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

Expr make(ExprOp op, const Token& at, std::vector<Expr> args = {}, double value = 0.0, int index = 0) {
  auto node = std::make_shared<ExprNode>();
  node->op = op;
  node->value = value;
  node->index = index;
  node->args = std::move(args);
  node->line = at.line;
  node->column = at.column;
  return node;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, int n) : toks_(std::move(toks)), n_(n) {}

  Expr parse() {
    if (peek().kind == Tok::end) throw ParseError("empty expression", peek().line, peek().column);
    Expr e = expr();
    if (peek().kind != Tok::end) {
      throw ParseError("unexpected '" + peek().text + "' after expression", peek().line, peek().column);
    }
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      const std::string got = peek().kind == Tok::end ? "end of input" : "'" + peek().text + "'";
      throw ParseError(std::string("expected ") + what + ", found " + got, peek().line, peek().column);
    }
    ++pos_;
  }

  Expr expr() {
    Expr lhs = term();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      const Token op = next();
      Expr rhs = term();
      lhs = make(op.kind == Tok::plus ? ExprOp::add : ExprOp::sub, op, {lhs, rhs});
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (peek().kind == Tok::star || peek().kind == Tok::slash) {
      const Token op = next();
      Expr rhs = unary();
      lhs = make(op.kind == Tok::star ? ExprOp::mul : ExprOp::div, op, {lhs, rhs});
    }
    return lhs;
  }

  Expr unary() {
    if (peek().kind == Tok::minus) {
      const Token op = next();
      return make(ExprOp::neg, op, {unary()});
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    while (peek().kind == Tok::caret) {
      const Token op = next();
      base = make(ExprOp::pow, op, {base}, exponent_literal());
    }
    return base;
  }

  double exponent_literal() {
    const Token start = peek();
    bool paren = false;
    if (peek().kind == Tok::lparen) {
      paren = true;
      ++pos_;
    }
    double sign = 1.0;
    if (peek().kind == Tok::minus || peek().kind == Tok::plus) {
      if (peek().kind == Tok::minus) sign = -1.0;
      ++pos_;
    }
    if (peek().kind != Tok::number) {
      throw ParseError("exponent must be a real literal", start.line, start.column);
    }
    const double value = sign * next().number;
    if (paren) {
      if (peek().kind != Tok::rparen) {
        throw ParseError("exponent must be a real literal", start.line, start.column);
      }
      ++pos_;
    }
    return value;
  }

  Expr primary() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::number:
        ++pos_;
        return make(ExprOp::literal, t, {}, t.number);
      case Tok::lparen: {
        ++pos_;
        Expr e = expr();
        expect(Tok::rparen, "')'");
        return e;
      }
      case Tok::ident:
        ++pos_;
        return identifier(t);
      case Tok::end:
        throw ParseError("unexpected end of input", t.line, t.column);
      default:
        throw ParseError("unexpected '" + t.text + "'", t.line, t.column);
    }
  }

  Expr identifier(const Token& t) {
    const std::string& s = t.text;
    if (s.size() >= 2 && (s[0] == 'z' || s[0] == 'v') && s[1] >= '1' && s[1] <= '9' &&
        s.find_first_not_of("0123456789", 1) == std::string::npos) {
      const long k = std::strtol(s.c_str() + 1, nullptr, 10);
      if (k > n_) {
        throw ParseError("variable " + s + " exceeds dimension n=" + std::to_string(n_), t.line, t.column);
      }
      if (peek().kind == Tok::lparen) {
        throw ParseError("variable " + s + " cannot be called as a function", t.line, t.column);
      }
      return make(s[0] == 'z' ? ExprOp::var_z : ExprOp::var_v, t, {}, 0.0, static_cast<int>(k - 1));
    }
    auto it = functions().find(s);
    if (it == functions().end()) throw ParseError("unknown identifier '" + s + "'", t.line, t.column);
    expect(Tok::lparen, "'(' after function name");
    std::vector<Expr> args;
    if (peek().kind != Tok::rparen) {
      args.push_back(expr());
      while (peek().kind == Tok::comma) {
        ++pos_;
        args.push_back(expr());
      }
    }
    expect(Tok::rparen, "')'");
    if (args.size() != 1) {
      throw ParseError("function " + s + " takes 1 argument, got " + std::to_string(args.size()),
                       t.line, t.column);
    }
    return make(it->second, t, std::move(args));
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  int n_;
};

int precedence(const Expr& e) {
  switch (e->op) {
    case ExprOp::add:
    case ExprOp::sub: return 1;
    case ExprOp::mul:
    case ExprOp::div: return 2;
    case ExprOp::neg: return 3;
    case ExprOp::pow: return 4;
    default: return 5;
  }
}

std::string number_text(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  // prefer the shortest representation that round-trips
  for (int prec = 1; prec <= 17; ++prec) {
    char tmp[40];
    std::snprintf(tmp, sizeof tmp, "%.*g", prec, x);
    if (std::strtod(tmp, nullptr) == x) return tmp;
  }
  return buf;
}

const char* function_name(ExprOp op) {
  for (const auto& [name, o] : functions()) {
    if (o == op) return name.c_str();
  }
  return "?";
}

std::string print_node(const Expr& e) {
  auto wrap = [](const Expr& child, bool parens) {
    const std::string s = print_node(child);
    return parens ? "(" + s + ")" : s;
  };
  switch (e->op) {
    case ExprOp::literal: return number_text(e->value);
    case ExprOp::var_z: return "z" + std::to_string(e->index + 1);
    case ExprOp::var_v: return "v" + std::to_string(e->index + 1);
    case ExprOp::neg: return "-" + wrap(e->args[0], precedence(e->args[0]) < 3);
    case ExprOp::pow: return wrap(e->args[0], precedence(e->args[0]) < 4) + "^" + number_text(e->value);
    case ExprOp::add:
    case ExprOp::sub:
    case ExprOp::mul:
    case ExprOp::div: {
      const int p = precedence(e);
      const char* sym = e->op == ExprOp::add ? " + " : e->op == ExprOp::sub ? " - "
                        : e->op == ExprOp::mul ? " * " : " / ";
      return wrap(e->args[0], precedence(e->args[0]) < p) + sym +
             wrap(e->args[1], precedence(e->args[1]) <= p);
    }
    default: return std::string(function_name(e->op)) + "(" + print_node(e->args[0]) + ")";
  }
}

}  // namespace

MetricExpr parse_metric(const std::string& text, int n) {
  if (n < 1) fail(ErrorKind::invalid_argument, "expression dimension must be positive");
  Parser parser(lex(text), n);
  MetricExpr e;
  e.root = parser.parse();
  e.n = n;
  e.source = text;
  return e;
}

std::string print_expr(const Expr& e) { return print_node(e); }
std::string print_metric(const MetricExpr& e) { return print_node(e.root); }

bool same_tree(const Expr& a, const Expr& b) {
  if (a->op != b->op || a->args.size() != b->args.size()) return false;
  if (a->op == ExprOp::literal || a->op == ExprOp::pow) {
    if (a->value != b->value) return false;
  }
  if ((a->op == ExprOp::var_z || a->op == ExprOp::var_v) && a->index != b->index) return false;
  for (size_t i = 0; i < a->args.size(); ++i) {
    if (!same_tree(a->args[i], b->args[i])) return false;
  }
  return true;
}

bool uses_fiber_variables(const Expr& e) {
  if (e->op == ExprOp::var_v) return true;
  for (const auto& a : e->args) {
    if (uses_fiber_variables(a)) return true;
  }
  return false;
}

ComplexJet evaluate_expr_complex(const Expr& e, const SeededPoint& c) {
  const ComplexJet& proto = c.z.front();
  switch (e->op) {
    case ExprOp::literal:
      return ComplexJet::constant(proto.space_ptr(), proto.order(), proto.basis(), e->value);
    case ExprOp::var_z: return c.z.at(e->index);
    case ExprOp::var_v: return c.v.at(e->index);
    case ExprOp::neg: return -evaluate_expr_complex(e->args[0], c);
    case ExprOp::add: return evaluate_expr_complex(e->args[0], c) + evaluate_expr_complex(e->args[1], c);
    case ExprOp::sub: return evaluate_expr_complex(e->args[0], c) - evaluate_expr_complex(e->args[1], c);
    case ExprOp::mul: return evaluate_expr_complex(e->args[0], c) * evaluate_expr_complex(e->args[1], c);
    case ExprOp::div: return evaluate_expr_complex(e->args[0], c) / evaluate_expr_complex(e->args[1], c);
    case ExprOp::pow: return pow_real(evaluate_expr_complex(e->args[0], c), e->value);
    case ExprOp::conj: return conj(evaluate_expr_complex(e->args[0], c));
    case ExprOp::re: return re(evaluate_expr_complex(e->args[0], c));
    case ExprOp::im: return im(evaluate_expr_complex(e->args[0], c));
    case ExprOp::abs2: return abs2(evaluate_expr_complex(e->args[0], c));
    case ExprOp::sqrt: return sqrt(evaluate_expr_complex(e->args[0], c));
    case ExprOp::log: return log(evaluate_expr_complex(e->args[0], c));
    case ExprOp::exp: return exp(evaluate_expr_complex(e->args[0], c));
  }
  fail(ErrorKind::invalid_argument, "malformed expression node");
}

RealJet evaluate_expr_jet(const MetricExpr& e, const FinslerPoint& p, int order) {
  if (order < 0 || order > kMaxJetOrder) fail(ErrorKind::invalid_argument, "jet order must lie in [0, 4]");
  if (p.dim() != e.n) fail(ErrorKind::invalid_argument, "point dimension does not match expression");
  ComplexJet c;
  try {
    c = evaluate_expr_complex(e.root, seed_coordinates(p, order));
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::singular_evaluation || err.kind() == ErrorKind::domain_error) {
      std::string coord = "z=(";
      for (int i = 0; i < p.dim(); ++i) coord += (i ? "," : "") + format_complex(p.z(i));
      coord += "), v=(";
      for (int i = 0; i < p.dim(); ++i) coord += (i ? "," : "") + format_complex(p.v(i));
      coord += ")";
      throw DomainError(std::string("expression singular at ") + coord + ": " + err.what(), coord);
    }
    throw;
  }
  const double im0 = std::abs(c.value().imag());
  if (!(im0 < 1e-12 * std::max(1.0, std::abs(c.value().real())))) {
    fail(ErrorKind::not_a_metric, "expression is not real-valued (imaginary part " +
                                      std::to_string(im0) + ")");
  }
  return real_part(c);
}

FinslerMetric dsl_metric(const std::string& text, int n) {
  auto e = std::make_shared<const MetricExpr>(parse_metric(text, n));
  return FinslerMetric("dsl", n, [e](const FinslerPoint& p, int order) {
    return evaluate_expr_jet(*e, p, order);
  });
}

}  // namespace finsler
