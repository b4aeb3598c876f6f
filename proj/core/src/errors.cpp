#include <schwarzian_lab/errors.hpp>

#include <sstream>

namespace schwarzian_lab {

namespace {

std::string format_point(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (std::signbit(z.imag()) ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

}  // namespace

const char* to_string(JetFault fault) noexcept {
  switch (fault) {
    case JetFault::DivisionByZero:
      return "DivisionByZeroAtPoint";
    case JetFault::Overflow:
      return "OverflowAtPoint";
  }
  return "unknown";
}

DivisionByZeroAtPoint::DivisionByZeroAtPoint(Complex argument)
    : JetError(JetFault::DivisionByZero, argument,
               "division by zero: divisor " + format_point(argument) + " below magnitude floor") {}

OverflowAtPoint::OverflowAtPoint(Complex argument)
    : JetError(JetFault::Overflow, argument,
               "overflow: non-finite result at argument " + format_point(argument)) {}

ParseError::ParseError(std::size_t position, std::string message, std::string expected)
    : std::runtime_error("parse error at offset " + std::to_string(position) + ": " + message +
                         (expected.empty() ? "" : " (expected " + expected + ")")),
      position_(position),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

CriticalPointError::CriticalPointError(Complex derivative, std::string which)
    : std::runtime_error("critical point of " + which + ": |f'| = " +
                         std::to_string(std::abs(derivative)) + " below floor"),
      derivative_(derivative),
      which_(std::move(which)) {}

PoleOfMobius::PoleOfMobius(Complex z)
    : std::runtime_error("Mobius map has a pole at " + format_point(z)), z_(z) {}

SegmentEvaluationError::SegmentEvaluationError(std::vector<int> flagged_n)
    : std::runtime_error([&] {
        std::string msg = "segment evaluation failed for n =";
        for (int n : flagged_n) msg += " " + std::to_string(n);
        return msg;
      }()),
      flagged_n_(std::move(flagged_n)) {}

}  // namespace schwarzian_lab
