#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace schwarzian_lab {

using Complex = std::complex<double>;

/// Byte range of a subexpression in the family source text.
struct SourceSpan {
  std::size_t offset = 0;
  std::size_t length = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Thrown when an operation is called outside its documented domain
/// (epsilon <= 0, empty n-range, malformed grid, ...).
class PreconditionViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class JetFault { DivisionByZero, Overflow };

const char* to_string(JetFault fault) noexcept;

/// Base of the jet-level arithmetic faults. `argument` is the operand value
/// at which the elementary operation broke down.
class JetError : public std::runtime_error {
 public:
  JetError(JetFault fault, Complex argument, const std::string& what)
      : std::runtime_error(what), fault_(fault), argument_(argument) {}

  JetFault fault() const noexcept { return fault_; }
  Complex argument() const noexcept { return argument_; }

 private:
  JetFault fault_;
  Complex argument_;
};

class DivisionByZeroAtPoint : public JetError {
 public:
  explicit DivisionByZeroAtPoint(Complex argument);
};

class OverflowAtPoint : public JetError {
 public:
  explicit OverflowAtPoint(Complex argument);
};

/// Jet fault raised while evaluating a family expression; carries the
/// evaluation point and the span of the subexpression that failed.
class EvalError : public std::runtime_error {
 public:
  EvalError(JetFault fault, SourceSpan span, double n, Complex z, const std::string& what)
      : std::runtime_error(what), fault_(fault), span_(span), n_(n), z_(z) {}

  JetFault fault() const noexcept { return fault_; }
  SourceSpan span() const noexcept { return span_; }
  double n() const noexcept { return n_; }
  Complex z() const noexcept { return z_; }

 private:
  JetFault fault_;
  SourceSpan span_;
  double n_;
  Complex z_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, std::string message, std::string expected);

  std::size_t position() const noexcept { return position_; }
  const std::string& message() const noexcept { return message_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string message_;
  std::string expected_;
};

/// |f'| fell below the critical-point floor: f is not locally injective
/// there and its Schwarzian is undefined. `which` names the function when
/// several are involved in a check ("f", "g", "g∘f", ...).
class CriticalPointError : public std::runtime_error {
 public:
  CriticalPointError(Complex derivative, std::string which = "f");

  Complex derivative() const noexcept { return derivative_; }
  const std::string& which() const noexcept { return which_; }

 private:
  Complex derivative_;
  std::string which_;
};

class DegenerateMobius : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PoleOfMobius : public std::runtime_error {
 public:
  explicit PoleOfMobius(Complex z);
  Complex z() const noexcept { return z_; }

 private:
  Complex z_;
};

/// Sample point too close to the value the caller claims is omitted.
class GuardViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConjugacyViolated : public std::runtime_error {
 public:
  ConjugacyViolated(double gap, const std::string& what) : std::runtime_error(what), gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

class SegmentEvaluationError : public std::runtime_error {
 public:
  explicit SegmentEvaluationError(std::vector<int> flagged_n);
  const std::vector<int>& flagged_n() const noexcept { return flagged_n_; }

 private:
  std::vector<int> flagged_n_;
};

}  // namespace schwarzian_lab
