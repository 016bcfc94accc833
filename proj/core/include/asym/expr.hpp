#pragma once

// Expression language for user-defined metric components.
//
// Grammar (usual precedence, '^' binds tighter than unary minus and is
// right-associative):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | identifier | identifier '(' expr (',' expr)* ')'
//            | '(' expr ')'
//
// Numbers are decimal with optional exponent (1, 2.5, 1e-3). Identifiers:
//   cartesian charts: x1..xn, r = |x|
//   polar charts:     r (radial coordinate; `rho` is accepted as an alias),
//                     th1..th{n-1} (angles; `theta`, `phi` when n = 3),
//                     u1..un (unit-sphere embedding)
//   everywhere:       pi, and the declared parameters.
// Functions: sqrt exp log sin cos tan sinh cosh tanh (one argument),
// pow (two arguments).

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asym/hyperdual.hpp"
#include "asym/jets.hpp"

namespace asym {

enum class NodeKind { constant, parameter, coordinate, radius, unit, unary, binary };
enum class UnaryOp { neg, sqrt, exp, log, sin, cos, tan, sinh, cosh, tanh };
enum class BinaryOp { add, sub, mul, div, pow };

struct ExprNode {
  NodeKind kind = NodeKind::constant;
  double value = 0.0;  // constant
  int index = 0;       // parameter / coordinate / unit index, or the op
  int lhs = -1;        // children are stored before their parents
  int rhs = -1;
  std::size_t offset = 0;  // 1-based source offset
};

class ExprAst {
 public:
  int dim() const { return n_; }
  ChartKind chart() const { return chart_; }
  const std::vector<std::string>& parameters() const { return *params_; }
  const std::vector<ExprNode>& nodes() const { return *nodes_; }
  int root() const { return root_; }
  const std::string& source() const { return *source_; }

  // Number of nodes on the longest root-to-leaf path.
  int depth() const;

  // Canonical text; reparsing it yields a structurally identical tree.
  std::string print() const;

  bool structurally_equal(const ExprAst& other) const;

  // Evaluates at chart coordinates `coords` (S is double, HyperDual or
  // Dual<HyperDual>). Throws DomainError naming the offending node.
  template <typename S>
  S evaluate(std::span<const S> coords, std::span<const double> params) const;

  // Value, gradient and Hessian in the chart coordinates at p.
  ScalarJet eval_jet(const ChartPoint& p, std::span<const double> params) const;

 private:
  friend class Parser;
  friend ExprAst make_ast(std::vector<ExprNode>, int, int, ChartKind,
                          std::vector<std::string>, std::string);

  std::string describe(int node) const;

  int n_ = 3;
  ChartKind chart_ = ChartKind::cartesian;
  int root_ = -1;
  std::shared_ptr<const std::vector<ExprNode>> nodes_;
  std::shared_ptr<const std::vector<std::string>> params_;
  std::shared_ptr<const std::string> source_;
};

ExprAst parse(std::string_view text, int n, ChartKind chart,
              std::vector<std::string> parameters = {});

// Builds an AST directly from nodes (used by generators in tests).
ExprAst make_ast(std::vector<ExprNode> nodes, int root, int n, ChartKind chart,
                 std::vector<std::string> parameters, std::string source = {});

std::string_view unary_name(UnaryOp op);

}  // namespace asym
