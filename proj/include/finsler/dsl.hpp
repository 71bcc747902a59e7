#pragma once

#include <memory>
#include <string>
#include <vector>

#include "finsler/jets.hpp"
#include "finsler/metric.hpp"

namespace finsler {

enum class ExprOp {
  literal,
  var_z,
  var_v,
  neg,
  add,
  sub,
  mul,
  div,
  pow,
  conj,
  re,
  im,
  abs2,
  sqrt,
  log,
  exp,
};

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprOp op;
  double value = 0.0;  // literal value or pow exponent
  int index = 0;       // 0-based variable index
  std::vector<Expr> args;
  int line = 1;
  int column = 1;
};

/// Parsed metric expression over z1..zn, v1..vn.
struct MetricExpr {
  Expr root;
  int n = 1;
  std::string source;
};

/// Grammar (whitespace-insensitive):
///   expr    := term (("+" | "-") term)*
///   term    := unary (("*" | "/") unary)*
///   unary   := "-" unary | power
///   power   := primary ("^" literal)*
///   literal := ["-" | "+"] number | "(" ["-" | "+"] number ")"
///   primary := number | zK | vK | func "(" expr ")" | "(" expr ")"
///   func    := conj | re | im | abs2 | sqrt | log | exp
MetricExpr parse_metric(const std::string& text, int n);

/// Canonical text with minimal parentheses; parse(print(e)) reproduces e's tree.
std::string print_metric(const MetricExpr& e);
std::string print_expr(const Expr& e);

bool same_tree(const Expr& a, const Expr& b);

/// True when the expression mentions any fibre variable vK.
bool uses_fiber_variables(const Expr& e);

/// Complex real-basis jet of the expression at the seeded coordinates.
ComplexJet evaluate_expr_complex(const Expr& e, const SeededPoint& coords);

/// Real jet of the expression; the order-0 imaginary part must stay below 1e-12.
RealJet evaluate_expr_jet(const MetricExpr& e, const FinslerPoint& p, int order);

FinslerMetric dsl_metric(const std::string& text, int n);

}  // namespace finsler
