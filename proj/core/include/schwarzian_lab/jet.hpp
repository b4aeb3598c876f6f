#pragma once

#include <schwarzian_lab/errors.hpp>

#include <iosfwd>

namespace schwarzian_lab {

/// Value and first three complex derivatives of an analytic function at a
/// point. Components are always finite: every producing operation throws a
/// JetError instead of storing inf/nan.
struct ComplexJet3 {
  Complex v{};
  Complex d1{};
  Complex d2{};
  Complex d3{};

  friend bool operator==(const ComplexJet3&, const ComplexJet3&) = default;
};

std::ostream& operator<<(std::ostream& os, const ComplexJet3& j);

/// Guards applied by the jet primitives.
struct JetLimits {
  // |b.v| below this is treated as a zero divisor (also the log floor).
  double division_floor = 1e-300;
  // exp refuses arguments with |Re u| above this.
  double exp_real_limit = 700.0;
};

ComplexJet3 jet_var(Complex z0);
ComplexJet3 jet_const(Complex c);

ComplexJet3 jet_add(const ComplexJet3& a, const ComplexJet3& b);
ComplexJet3 jet_sub(const ComplexJet3& a, const ComplexJet3& b);
ComplexJet3 jet_mul(const ComplexJet3& a, const ComplexJet3& b);
ComplexJet3 jet_neg(const ComplexJet3& u);
ComplexJet3 jet_reciprocal(const ComplexJet3& b, const JetLimits& limits = {});
ComplexJet3 jet_div(const ComplexJet3& a, const ComplexJet3& b, const JetLimits& limits = {});

ComplexJet3 jet_exp(const ComplexJet3& u, const JetLimits& limits = {});
/// Principal branch.
ComplexJet3 jet_log(const ComplexJet3& u, const JetLimits& limits = {});
ComplexJet3 jet_pow_int(const ComplexJet3& u, int k, const JetLimits& limits = {});

/// Chain rule through order 3 for an outer function g with
/// g(u.v), g'(u.v), g''(u.v), g'''(u.v) given.
ComplexJet3 jet_compose(const ComplexJet3& u, Complex g0, Complex g1, Complex g2, Complex g3);

inline ComplexJet3 operator+(const ComplexJet3& a, const ComplexJet3& b) { return jet_add(a, b); }
inline ComplexJet3 operator-(const ComplexJet3& a, const ComplexJet3& b) { return jet_sub(a, b); }
inline ComplexJet3 operator*(const ComplexJet3& a, const ComplexJet3& b) { return jet_mul(a, b); }
inline ComplexJet3 operator/(const ComplexJet3& a, const ComplexJet3& b) { return jet_div(a, b); }
inline ComplexJet3 operator-(const ComplexJet3& u) { return jet_neg(u); }

bool is_finite(const ComplexJet3& j) noexcept;

}  // namespace schwarzian_lab
