#include <schwarzian_lab/jet.hpp>

#include <cmath>
#include <ostream>

namespace schwarzian_lab {

namespace {

bool finite(Complex c) noexcept { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

// Every producer funnels its result through here.
ComplexJet3 checked(const ComplexJet3& j, Complex argument) {
  if (!is_finite(j)) throw OverflowAtPoint(argument);
  return j;
}

}  // namespace

bool is_finite(const ComplexJet3& j) noexcept {
  return finite(j.v) && finite(j.d1) && finite(j.d2) && finite(j.d3);
}

std::ostream& operator<<(std::ostream& os, const ComplexJet3& j) {
  return os << "(" << j.v << ", " << j.d1 << ", " << j.d2 << ", " << j.d3 << ")";
}

ComplexJet3 jet_var(Complex z0) { return {z0, 1.0, 0.0, 0.0}; }

ComplexJet3 jet_const(Complex c) { return {c, 0.0, 0.0, 0.0}; }

ComplexJet3 jet_add(const ComplexJet3& a, const ComplexJet3& b) {
  return checked({a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3}, a.v);
}

ComplexJet3 jet_sub(const ComplexJet3& a, const ComplexJet3& b) {
  return checked({a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3}, a.v);
}

ComplexJet3 jet_neg(const ComplexJet3& u) { return {-u.v, -u.d1, -u.d2, -u.d3}; }

ComplexJet3 jet_mul(const ComplexJet3& a, const ComplexJet3& b) {
  // Leibniz rule through order 3.
  return checked({a.v * b.v,
                  a.d1 * b.v + a.v * b.d1,
                  (a.d2 * b.v + a.v * b.d2) + 2.0 * a.d1 * b.d1,
                  (a.d3 * b.v + a.v * b.d3) + 3.0 * (a.d2 * b.d1 + a.d1 * b.d2)},
                 a.v);
}

ComplexJet3 jet_compose(const ComplexJet3& u, Complex g0, Complex g1, Complex g2, Complex g3) {
  const Complex u1sq = u.d1 * u.d1;
  return checked({g0,
                  g1 * u.d1,
                  g2 * u1sq + g1 * u.d2,
                  g3 * u1sq * u.d1 + 3.0 * g2 * u.d1 * u.d2 + g1 * u.d3},
                 u.v);
}

ComplexJet3 jet_reciprocal(const ComplexJet3& b, const JetLimits& limits) {
  if (!(std::abs(b.v) > limits.division_floor)) throw DivisionByZeroAtPoint(b.v);
  // Work with w_k = b_k / b so tiny values with zero derivatives do not
  // overflow through 1/b^4.
  const Complex r = 1.0 / b.v;
  const Complex w1 = b.d1 * r, w2 = b.d2 * r, w3 = b.d3 * r;
  return checked({r, -r * w1, r * (2.0 * w1 * w1 - w2), r * (6.0 * w1 * (w2 - w1 * w1) - w3)}, b.v);
}

ComplexJet3 jet_div(const ComplexJet3& a, const ComplexJet3& b, const JetLimits& limits) {
  return jet_mul(a, jet_reciprocal(b, limits));
}

ComplexJet3 jet_exp(const ComplexJet3& u, const JetLimits& limits) {
  if (!(std::abs(u.v.real()) <= limits.exp_real_limit)) throw OverflowAtPoint(u.v);
  const Complex e = std::exp(u.v);
  return jet_compose(u, e, e, e, e);
}

ComplexJet3 jet_log(const ComplexJet3& u, const JetLimits& limits) {
  if (!(std::abs(u.v) > limits.division_floor)) throw DivisionByZeroAtPoint(u.v);
  const Complex r = 1.0 / u.v;
  const Complex w1 = u.d1 * r, w2 = u.d2 * r, w3 = u.d3 * r;
  return checked({std::log(u.v), w1, w2 - w1 * w1, w3 - 3.0 * w1 * w2 + 2.0 * w1 * w1 * w1}, u.v);
}

ComplexJet3 jet_pow_int(const ComplexJet3& u, int k, const JetLimits& limits) {
  if (k < 0) {
    // Negating INT_MIN would overflow; splitting off one factor avoids it.
    const ComplexJet3 base = jet_reciprocal(u, limits);
    return jet_mul(base, jet_pow_int(base, -(k + 1), limits));
  }
  ComplexJet3 result = jet_const(1.0);
  ComplexJet3 base = u;
  for (unsigned e = static_cast<unsigned>(k); e != 0; e >>= 1) {
    if (e & 1u) result = jet_mul(result, base);
    if (e > 1) base = jet_mul(base, base);
  }
  return result;
}

}  // namespace schwarzian_lab
