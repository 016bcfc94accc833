#include "asym/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>

#include "asym/charts.hpp"
#include "asym/errors.hpp"

namespace asym {

namespace {

constexpr std::array<std::pair<std::string_view, UnaryOp>, 9> kFunctions{{
    {"sqrt", UnaryOp::sqrt},
    {"exp", UnaryOp::exp},
    {"log", UnaryOp::log},
    {"sin", UnaryOp::sin},
    {"cos", UnaryOp::cos},
    {"tan", UnaryOp::tan},
    {"sinh", UnaryOp::sinh},
    {"cosh", UnaryOp::cosh},
    {"tanh", UnaryOp::tanh},
}};

std::optional<UnaryOp> function_by_name(std::string_view name) {
  for (const auto& [key, op] : kFunctions)
    if (key == name) return op;
  return std::nullopt;
}

char binary_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::add:
      return '+';
    case BinaryOp::sub:
      return '-';
    case BinaryOp::mul:
      return '*';
    case BinaryOp::div:
      return '/';
    case BinaryOp::pow:
      return '^';
  }
  return '?';
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view unary_name(UnaryOp op) {
  if (op == UnaryOp::neg) return "-";
  for (const auto& [key, value] : kFunctions)
    if (value == op) return key;
  return "?";
}

ExprAst make_ast(std::vector<ExprNode> nodes, int root, int n, ChartKind chart,
                 std::vector<std::string> parameters, std::string source) {
  ExprAst ast;
  ast.n_ = n;
  ast.chart_ = chart;
  ast.root_ = root;
  ast.nodes_ = std::make_shared<const std::vector<ExprNode>>(std::move(nodes));
  ast.params_ = std::make_shared<const std::vector<std::string>>(std::move(parameters));
  ast.source_ = std::make_shared<const std::string>(std::move(source));
  return ast;
}

class Parser {
 public:
  Parser(std::string_view text, int n, ChartKind chart, std::vector<std::string> params)
      : text_(text), n_(n), chart_(chart), params_(std::move(params)) {}

  ExprAst run() {
    if (n_ < 2 || n_ > kMaxDim)
      throw UnsupportedError("expression dimension " + std::to_string(n_) + " not supported");
    skip_space();
    if (pos_ >= text_.size()) fail("empty expression");
    const int root = expr();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return make_ast(std::move(nodes_), root, n_, chart_, std::move(params_), std::string(text_));
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_ + 1); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, at + 1);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  int add(ExprNode node) {
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int binary(BinaryOp op, int lhs, int rhs, std::size_t at) {
    ExprNode node;
    node.kind = NodeKind::binary;
    node.index = static_cast<int>(op);
    node.lhs = lhs;
    node.rhs = rhs;
    node.offset = at + 1;
    return add(node);
  }

  int unary(UnaryOp op, int arg, std::size_t at) {
    ExprNode node;
    node.kind = NodeKind::unary;
    node.index = static_cast<int>(op);
    node.lhs = arg;
    node.offset = at + 1;
    return add(node);
  }

  int expr() {
    int lhs = term();
    for (;;) {
      skip_space();
      const std::size_t at = pos_;
      if (accept('+'))
        lhs = binary(BinaryOp::add, lhs, term(), at);
      else if (accept('-'))
        lhs = binary(BinaryOp::sub, lhs, term(), at);
      else
        return lhs;
    }
  }

  int term() {
    int lhs = unary_expr();
    for (;;) {
      skip_space();
      const std::size_t at = pos_;
      if (accept('*'))
        lhs = binary(BinaryOp::mul, lhs, unary_expr(), at);
      else if (accept('/'))
        lhs = binary(BinaryOp::div, lhs, unary_expr(), at);
      else
        return lhs;
    }
  }

  int unary_expr() {
    skip_space();
    const std::size_t at = pos_;
    if (accept('-')) return unary(UnaryOp::neg, unary_expr(), at);
    if (accept('+')) return unary_expr();
    return power();
  }

  int power() {
    const int base = primary();
    skip_space();
    const std::size_t at = pos_;
    if (accept('^')) return binary(BinaryOp::pow, base, unary_expr(), at);
    return base;
  }

  int primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const std::size_t at = pos_;
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      const int inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      const std::string name(text_.substr(pos_, end - pos_));
      pos_ = end;
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '(') return call(name, at);
      return identifier(name, at);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  int number() {
    const std::size_t at = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    };
    digits();
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      digits();
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < text_.size() && (text_[e] == '+' || text_[e] == '-')) ++e;
      if (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) {
        end = e;
        digits();
      }
    }
    const std::string literal(text_.substr(at, end - at));
    if (literal == ".") fail_at("malformed number", at);
    char* stop = nullptr;
    const double v = std::strtod(literal.c_str(), &stop);
    if (stop != literal.c_str() + literal.size()) fail_at("malformed number", at);
    pos_ = end;
    ExprNode node;
    node.kind = NodeKind::constant;
    node.value = v;
    node.offset = at + 1;
    return add(node);
  }

  int call(const std::string& name, std::size_t at) {
    expect('(');
    std::vector<int> args;
    args.push_back(expr());
    while (accept(',')) args.push_back(expr());
    expect(')');
    if (name == "pow") {
      if (args.size() != 2)
        fail_at("function 'pow' expects 2 arguments, got " + std::to_string(args.size()), at);
      return binary(BinaryOp::pow, args[0], args[1], at);
    }
    const auto op = function_by_name(name);
    if (!op) fail_at("unknown function '" + name + "'", at);
    if (args.size() != 1)
      fail_at("function '" + name + "' expects 1 argument, got " + std::to_string(args.size()),
              at);
    return unary(*op, args[0], at);
  }

  int identifier(const std::string& name, std::size_t at) {
    ExprNode node;
    node.offset = at + 1;
    for (std::size_t i = 0; i < params_.size(); ++i)
      if (params_[i] == name) {
        node.kind = NodeKind::parameter;
        node.index = static_cast<int>(i);
        return add(node);
      }
    if (name == "pi") {
      node.kind = NodeKind::constant;
      node.value = std::numbers::pi;
      return add(node);
    }
    auto indexed = [&](std::string_view prefix, int lo, int hi) -> int {
      if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) return -1;
      const std::string rest = name.substr(prefix.size());
      if (!std::all_of(rest.begin(), rest.end(), [](char ch) { return std::isdigit(ch); }))
        return -1;
      const int k = std::atoi(rest.c_str());
      return (k >= lo && k <= hi) ? k : -1;
    };
    if (chart_ == ChartKind::cartesian) {
      if (name == "r") {
        node.kind = NodeKind::radius;
        return add(node);
      }
      if (const int k = indexed("x", 1, n_); k > 0) {
        node.kind = NodeKind::coordinate;
        node.index = k - 1;
        return add(node);
      }
    } else {
      if (name == "r" || name == "rho") {
        node.kind = NodeKind::coordinate;
        node.index = 0;
        return add(node);
      }
      if (const int k = indexed("th", 1, n_ - 1); k > 0) {
        node.kind = NodeKind::coordinate;
        node.index = k;
        return add(node);
      }
      if (n_ == 3 && (name == "theta" || name == "phi")) {
        node.kind = NodeKind::coordinate;
        node.index = name == "theta" ? 1 : 2;
        return add(node);
      }
      if (const int k = indexed("u", 1, n_); k > 0) {
        node.kind = NodeKind::unit;
        node.index = k - 1;
        return add(node);
      }
    }
    fail_at("unknown identifier '" + name + "'", at);
  }

  std::string_view text_;
  int n_;
  ChartKind chart_;
  std::vector<std::string> params_;
  std::vector<ExprNode> nodes_;
  std::size_t pos_ = 0;
};

ExprAst parse(std::string_view text, int n, ChartKind chart,
              std::vector<std::string> parameters) {
  return Parser(text, n, chart, std::move(parameters)).run();
}

int ExprAst::depth() const {
  std::vector<int> d(nodes_->size(), 1);
  for (std::size_t i = 0; i < nodes_->size(); ++i) {
    const ExprNode& node = (*nodes_)[i];
    int best = 0;
    if (node.lhs >= 0) best = std::max(best, d[node.lhs]);
    if (node.rhs >= 0) best = std::max(best, d[node.rhs]);
    d[i] = best + 1;
  }
  return d[root_];
}

std::string ExprAst::print() const {
  std::vector<std::string> out(nodes_->size());
  for (std::size_t i = 0; i < nodes_->size(); ++i) {
    const ExprNode& node = (*nodes_)[i];
    switch (node.kind) {
      case NodeKind::constant:
        out[i] = node.value < 0 ? "(-" + format_number(-node.value) + ")"
                                : format_number(node.value);
        break;
      case NodeKind::parameter:
        out[i] = (*params_)[node.index];
        break;
      case NodeKind::coordinate:
        if (chart_ == ChartKind::cartesian)
          out[i] = "x" + std::to_string(node.index + 1);
        else
          out[i] = node.index == 0 ? "r" : "th" + std::to_string(node.index);
        break;
      case NodeKind::radius:
        out[i] = "r";
        break;
      case NodeKind::unit:
        out[i] = "u" + std::to_string(node.index + 1);
        break;
      case NodeKind::unary: {
        const auto op = static_cast<UnaryOp>(node.index);
        if (op == UnaryOp::neg)
          out[i] = "(-" + out[node.lhs] + ")";
        else
          out[i] = std::string(unary_name(op)) + "(" + out[node.lhs] + ")";
        break;
      }
      case NodeKind::binary:
        out[i] = "(" + out[node.lhs] + " " + binary_symbol(static_cast<BinaryOp>(node.index)) +
                 " " + out[node.rhs] + ")";
        break;
    }
  }
  return out[root_];
}

bool ExprAst::structurally_equal(const ExprAst& other) const {
  auto same = [&](auto&& self, int a, int b) -> bool {
    const ExprNode& x = (*nodes_)[a];
    const ExprNode& y = (*other.nodes_)[b];
    if (x.kind != y.kind || x.index != y.index) return false;
    if (x.kind == NodeKind::constant && x.value != y.value) return false;
    if (x.kind == NodeKind::parameter && (*params_)[x.index] != (*other.params_)[y.index])
      return false;
    if ((x.lhs < 0) != (y.lhs < 0) || (x.rhs < 0) != (y.rhs < 0)) return false;
    if (x.lhs >= 0 && !self(self, x.lhs, y.lhs)) return false;
    if (x.rhs >= 0 && !self(self, x.rhs, y.rhs)) return false;
    return true;
  };
  return n_ == other.n_ && chart_ == other.chart_ && same(same, root_, other.root_);
}

std::string ExprAst::describe(int node) const {
  const ExprNode& nd = (*nodes_)[node];
  std::string what;
  if (nd.kind == NodeKind::unary)
    what = std::string(unary_name(static_cast<UnaryOp>(nd.index)));
  else if (nd.kind == NodeKind::binary)
    what = std::string(1, binary_symbol(static_cast<BinaryOp>(nd.index)));
  else if (nd.kind == NodeKind::radius)
    what = "r";
  else
    what = "node";
  return "'" + what + "' at offset " + std::to_string(nd.offset);
}

template <typename S>
S ExprAst::evaluate(std::span<const S> coords, std::span<const double> params) const {
  if (params.size() < params_->size())
    throw PreconditionError("expression needs " + std::to_string(params_->size()) +
                            " parameter values");
  const std::vector<ExprNode>& nodes = *nodes_;
  std::vector<S> val(nodes.size());
  auto domain = [&](int i, const std::string& why) {
    throw DomainError("domain error in " + describe(i) + ": " + why);
  };
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const int i = static_cast<int>(k);
    const ExprNode& node = nodes[k];
    switch (node.kind) {
      case NodeKind::constant:
        val[k] = S(node.value);
        break;
      case NodeKind::parameter:
        val[k] = S(params[node.index]);
        break;
      case NodeKind::coordinate:
        val[k] = coords[node.index];
        break;
      case NodeKind::radius: {
        S sum(0.0);
        for (int j = 0; j < n_; ++j) sum = sum + coords[j] * coords[j];
        if (!(primal(sum) > 0.0)) domain(i, "r is not differentiable at the origin");
        val[k] = math::sqrt(sum);
        break;
      }
      case NodeKind::unit:
        val[k] = sphere_embedding<S>(coords.subspan(1), node.index, n_);
        break;
      case NodeKind::unary: {
        const S& a = val[node.lhs];
        const double av = primal(a);
        switch (static_cast<UnaryOp>(node.index)) {
          case UnaryOp::neg:
            val[k] = -a;
            break;
          case UnaryOp::sqrt:
            if (!(av > 0.0)) domain(i, "sqrt of a non-positive value");
            val[k] = math::sqrt(a);
            break;
          case UnaryOp::exp:
            val[k] = math::exp(a);
            break;
          case UnaryOp::log:
            if (!(av > 0.0)) domain(i, "log of a non-positive value");
            val[k] = math::log(a);
            break;
          case UnaryOp::sin:
            val[k] = math::sin(a);
            break;
          case UnaryOp::cos:
            val[k] = math::cos(a);
            break;
          case UnaryOp::tan:
            if (std::cos(av) == 0.0) domain(i, "tan at a pole");
            val[k] = math::tan(a);
            break;
          case UnaryOp::sinh:
            val[k] = math::sinh(a);
            break;
          case UnaryOp::cosh:
            val[k] = math::cosh(a);
            break;
          case UnaryOp::tanh:
            val[k] = math::tanh(a);
            break;
        }
        break;
      }
      case NodeKind::binary: {
        const S& a = val[node.lhs];
        const S& b = val[node.rhs];
        switch (static_cast<BinaryOp>(node.index)) {
          case BinaryOp::add:
            val[k] = a + b;
            break;
          case BinaryOp::sub:
            val[k] = a - b;
            break;
          case BinaryOp::mul:
            val[k] = a * b;
            break;
          case BinaryOp::div:
            if (primal(b) == 0.0) domain(i, "division by zero");
            val[k] = a / b;
            break;
          case BinaryOp::pow: {
            const ExprNode& ex = nodes[node.rhs];
            const double av = primal(a);
            if (ex.kind == NodeKind::constant || ex.kind == NodeKind::parameter) {
              const double e = ex.kind == NodeKind::constant ? ex.value : params[ex.index];
              const bool integral = e == std::round(e);
              if (av == 0.0 && e < 2.0 && e != 0.0 && e != 1.0)
                domain(i, "power of zero is not twice differentiable");
              if (av < 0.0 && !integral) domain(i, "non-integer power of a negative value");
              val[k] = math::pow(a, e);
            } else {
              if (!(av > 0.0)) domain(i, "variable exponent needs a positive base");
              val[k] = math::exp(b * math::log(a));
            }
            break;
          }
        }
        break;
      }
    }
    if (!std::isfinite(primal(val[k]))) domain(i, "non-finite value");
  }
  return val[root_];
}

template double ExprAst::evaluate<double>(std::span<const double>,
                                          std::span<const double>) const;
template HyperDual ExprAst::evaluate<HyperDual>(std::span<const HyperDual>,
                                                std::span<const double>) const;
template Dual<HyperDual> ExprAst::evaluate<Dual<HyperDual>>(std::span<const Dual<HyperDual>>,
                                                            std::span<const double>) const;

ScalarJet ExprAst::eval_jet(const ChartPoint& p, std::span<const double> params) const {
  if (p.chart != chart_ || p.n != n_)
    throw ChartMismatch("expression was parsed for a different chart or dimension");
  std::array<HyperDual, kMaxDim> x{};
  for (int i = 0; i < n_; ++i) x[i] = HyperDual::variable(p.coords[i], i, n_);
  const HyperDual v = evaluate<HyperDual>(std::span<const HyperDual>(x.data(), n_), params);
  ScalarJet out;
  out.at = p;
  out.value = v.value();
  out.grad = v.gradient();
  out.hess = v.hessian();
  return out;
}

}  // namespace asym
