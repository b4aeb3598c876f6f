#pragma once

#include <schwarzian_lab/errors.hpp>
#include <schwarzian_lab/jet.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace schwarzian_lab {

enum class NodeKind : std::uint8_t {
  Var,       // z
  Param,     // n
  ConstNum,  // numeric literal
  ImagUnit,  // i
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  PowInt,
  Exp,
  Log,
};

const char* to_string(NodeKind kind) noexcept;

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

struct ExprNode {
  NodeKind kind = NodeKind::Var;
  NodeId lhs = kNoNode;  // operand of unary nodes, base of PowInt
  NodeId rhs = kNoNode;
  Complex literal{};     // ConstNum only
  int exponent = 0;      // PowInt only
  SourceSpan span{};
};

/// Parsed one-parameter family f_n(z). Nodes live in a flat arena with
/// children stored before their parents; the tree is immutable once built,
/// so one instance can be shared by any number of concurrent evaluators.
class FamilyExpr {
 public:
  FamilyExpr() = default;

  const std::vector<ExprNode>& nodes() const noexcept { return nodes_; }
  const ExprNode& node(NodeId id) const { return nodes_.at(id); }
  NodeId root() const noexcept { return root_; }
  const std::string& source() const noexcept { return source_; }
  bool empty() const noexcept { return root_ == kNoNode; }

  /// True when the family does not reference z (used for Mobius
  /// coefficients written as expressions in n).
  bool depends_on_z() const noexcept;

  /// Builder API used by the parser; also handy for generated trees.
  NodeId add_node(ExprNode node);
  void set_root(NodeId id) { root_ = id; }
  void set_span(NodeId id, SourceSpan span) { nodes_.at(id).span = span; }
  void set_source(std::string source) { source_ = std::move(source); }

 private:
  std::vector<ExprNode> nodes_;
  NodeId root_ = kNoNode;
  std::string source_;
};

/// Grammar:
///   expr    := term { ("+" | "-") term }
///   term    := factor { ("*" | "/") factor }
///   factor  := "-" factor | power
///   power   := primary [ "^" ["-"] digits ]
///   primary := number | "z" | "n" | "i" | ("exp" | "log") "(" expr ")" | "(" expr ")"
///   number  := digits [ "." digits ]
/// `-z^2` is `-(z^2)`; `^` does not chain. Identifiers other than
/// z, n, i, exp, log are rejected, as is implicit multiplication.
FamilyExpr parse(std::string_view source);

/// Canonical text that re-parses to a structurally identical tree.
std::string pretty_print(const FamilyExpr& expr);

/// Compares shape, kinds, literals and exponents; ignores source spans.
bool structurally_equal(const FamilyExpr& a, const FamilyExpr& b);

/// `a+bi` style literal ("1.5-2i", "3", "-i", "0.25i"); same digit rules as
/// the family lexer. Throws ParseError.
Complex parse_complex(std::string_view text);

struct EvalOptions {
  JetLimits limits{};
};

/// Evaluates f_n at the point carried by `seed`. Seeding with jet_var(z)
/// gives the jet of f_n at z; seeding with another function's jet gives
/// the jet of the composition.
ComplexJet3 eval_jet(const FamilyExpr& expr, double n, const ComplexJet3& seed,
                     const EvalOptions& options = {});

inline ComplexJet3 eval_jet(const FamilyExpr& expr, double n, Complex z,
                            const EvalOptions& options = {}) {
  return eval_jet(expr, n, jet_var(z), options);
}

}  // namespace schwarzian_lab
