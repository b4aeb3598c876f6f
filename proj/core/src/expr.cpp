#include <schwarzian_lab/expr.hpp>

#include <array>
#include <charconv>

namespace schwarzian_lab {

const char* to_string(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::Var: return "Var";
    case NodeKind::Param: return "Param";
    case NodeKind::ConstNum: return "ConstNum";
    case NodeKind::ImagUnit: return "ImagUnit";
    case NodeKind::Add: return "Add";
    case NodeKind::Sub: return "Sub";
    case NodeKind::Mul: return "Mul";
    case NodeKind::Div: return "Div";
    case NodeKind::Neg: return "Neg";
    case NodeKind::PowInt: return "PowInt";
    case NodeKind::Exp: return "Exp";
    case NodeKind::Log: return "Log";
  }
  return "?";
}

NodeId FamilyExpr::add_node(ExprNode node) {
  const auto check_child = [&](NodeId child) {
    if (child != kNoNode && child >= nodes_.size())
      throw PreconditionViolation("FamilyExpr: child node must be added before its parent");
  };
  check_child(node.lhs);
  check_child(node.rhs);
  nodes_.push_back(node);
  return static_cast<NodeId>(nodes_.size() - 1);
}

bool FamilyExpr::depends_on_z() const noexcept {
  for (const auto& node : nodes_)
    if (node.kind == NodeKind::Var) return true;
  return false;
}

namespace {

// Binding strength used by the printer; higher binds tighter.
int precedence(NodeKind kind) {
  switch (kind) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Neg: return 3;
    case NodeKind::PowInt: return 4;
    default: return 5;
  }
}

std::string format_number(double x) {
  std::array<char, 512> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::fixed);
  return ec == std::errc() ? std::string(buf.data(), ptr) : std::string("0");
}

class Printer {
 public:
  explicit Printer(const FamilyExpr& expr) : expr_(expr) {}

  std::string print(NodeId id, int min_prec) const {
    const ExprNode& node = expr_.node(id);
    std::string text = print_node(node);
    int prec = precedence(node.kind);
    if (node.kind == NodeKind::ConstNum && !literal_is_plain(node.literal)) prec = 1;
    return prec < min_prec ? "(" + text + ")" : text;
  }

 private:
  static bool literal_is_plain(Complex c) { return c.imag() == 0.0 && !std::signbit(c.real()); }

  std::string print_node(const ExprNode& node) const {
    switch (node.kind) {
      case NodeKind::Var: return "z";
      case NodeKind::Param: return "n";
      case NodeKind::ImagUnit: return "i";
      case NodeKind::ConstNum: {
        const Complex c = node.literal;
        if (literal_is_plain(c)) return format_number(c.real());
        // Not producible by the parser; spelled as arithmetic.
        std::string re = format_number(std::abs(c.real()));
        std::string out = std::signbit(c.real()) ? "-" + re : re;
        if (c.imag() != 0.0)
          out += (std::signbit(c.imag()) ? "-" : "+") + format_number(std::abs(c.imag())) + "*i";
        return out;
      }
      case NodeKind::Add: return print(node.lhs, 1) + "+" + print(node.rhs, 2);
      case NodeKind::Sub: return print(node.lhs, 1) + "-" + print(node.rhs, 2);
      case NodeKind::Mul: return print(node.lhs, 2) + "*" + print(node.rhs, 3);
      case NodeKind::Div: return print(node.lhs, 2) + "/" + print(node.rhs, 3);
      case NodeKind::Neg: return "-" + print(node.lhs, 3);
      case NodeKind::PowInt: return print(node.lhs, 5) + "^" + std::to_string(node.exponent);
      case NodeKind::Exp: return "exp(" + print(node.lhs, 0) + ")";
      case NodeKind::Log: return "log(" + print(node.lhs, 0) + ")";
    }
    return {};
  }

  const FamilyExpr& expr_;
};

bool equal_nodes(const FamilyExpr& a, NodeId ia, const FamilyExpr& b, NodeId ib) {
  if ((ia == kNoNode) != (ib == kNoNode)) return false;
  if (ia == kNoNode) return true;
  const ExprNode& x = a.node(ia);
  const ExprNode& y = b.node(ib);
  if (x.kind != y.kind) return false;
  if (x.kind == NodeKind::ConstNum && x.literal != y.literal) return false;
  if (x.kind == NodeKind::PowInt && x.exponent != y.exponent) return false;
  return equal_nodes(a, x.lhs, b, y.lhs) && equal_nodes(a, x.rhs, b, y.rhs);
}

class Evaluator {
 public:
  Evaluator(const FamilyExpr& expr, double n, const ComplexJet3& seed, const EvalOptions& options)
      : expr_(expr), n_(n), seed_(seed), limits_(options.limits) {}

  ComplexJet3 eval(NodeId id) const {
    const ExprNode& node = expr_.node(id);
    try {
      return eval_node(node);
    } catch (const JetError& e) {
      const std::string& src = expr_.source();
      std::string where;
      if (node.span.offset + node.span.length <= src.size() && node.span.length > 0)
        where = " in '" + src.substr(node.span.offset, node.span.length) + "'";
      throw EvalError(e.fault(), node.span, n_, seed_.v, std::string(e.what()) + where);
    }
  }

 private:
  ComplexJet3 eval_node(const ExprNode& node) const {
    switch (node.kind) {
      case NodeKind::Var: return seed_;
      case NodeKind::Param: return jet_const(n_);
      case NodeKind::ConstNum: return jet_const(node.literal);
      case NodeKind::ImagUnit: return jet_const(Complex(0.0, 1.0));
      case NodeKind::Add: return jet_add(eval(node.lhs), eval(node.rhs));
      case NodeKind::Sub: return jet_sub(eval(node.lhs), eval(node.rhs));
      case NodeKind::Mul: return jet_mul(eval(node.lhs), eval(node.rhs));
      case NodeKind::Div: {
        const ComplexJet3 num = eval(node.lhs);
        return jet_div(num, eval(node.rhs), limits_);
      }
      case NodeKind::Neg: return jet_neg(eval(node.lhs));
      case NodeKind::PowInt: return jet_pow_int(eval(node.lhs), node.exponent, limits_);
      case NodeKind::Exp: return jet_exp(eval(node.lhs), limits_);
      case NodeKind::Log: return jet_log(eval(node.lhs), limits_);
    }
    return {};
  }

  const FamilyExpr& expr_;
  double n_;
  ComplexJet3 seed_;
  JetLimits limits_;
};

}  // namespace

std::string pretty_print(const FamilyExpr& expr) {
  if (expr.empty()) return {};
  return Printer(expr).print(expr.root(), 0);
}

bool structurally_equal(const FamilyExpr& a, const FamilyExpr& b) {
  return equal_nodes(a, a.root(), b, b.root());
}

ComplexJet3 eval_jet(const FamilyExpr& expr, double n, const ComplexJet3& seed, const EvalOptions& options) {
  if (expr.empty()) throw PreconditionViolation("eval_jet: empty expression");
  return Evaluator(expr, n, seed, options).eval(expr.root());
}

}  // namespace schwarzian_lab
