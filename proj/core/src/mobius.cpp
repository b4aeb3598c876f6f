#include <schwarzian_lab/mobius.hpp>

#include <array>
#include <cmath>
#include <numbers>

namespace schwarzian_lab {

namespace {

constexpr double kDeterminantFloor = 1e-12;

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

}  // namespace

Mobius::Mobius(Complex a, Complex b, Complex c, Complex d) {
  if (!finite(a) || !finite(b) || !finite(c) || !finite(d))
    throw DegenerateMobius("Mobius coefficients must be finite");
  const Complex det = a * d - b * c;
  if (!(std::abs(det) > kDeterminantFloor)) throw DegenerateMobius("Mobius map requires ad - bc != 0");

  const Complex s = std::sqrt(det);
  std::array<Complex, 4> coeffs{a / s, b / s, c / s, d / s};
  for (const Complex& x : coeffs) {
    if (x == Complex(0.0, 0.0)) continue;
    const double arg = std::arg(x);
    if (!(arg >= 0.0 && arg < std::numbers::pi))
      for (Complex& y : coeffs) y = -y;
    break;
  }
  a_ = coeffs[0];
  b_ = coeffs[1];
  c_ = coeffs[2];
  d_ = coeffs[3];
}

std::optional<Complex> Mobius::apply(Complex z) const noexcept {
  const Complex den = c_ * z + d_;
  if (den == Complex(0.0, 0.0)) return std::nullopt;
  return (a_ * z + b_) / den;
}

ComplexJet3 Mobius::jet(Complex z) const {
  const Complex den = c_ * z + d_;
  if (!(std::abs(den) > JetLimits{}.division_floor)) throw PoleOfMobius(z);
  const Complex r = 1.0 / den;
  const Complex det = a_ * d_ - b_ * c_;
  const Complex r2 = r * r;
  ComplexJet3 j{(a_ * z + b_) * r, det * r2, -2.0 * c_ * det * r2 * r, 6.0 * c_ * c_ * det * r2 * r2};
  if (!is_finite(j)) throw OverflowAtPoint(z);
  return j;
}

ComplexJet3 Mobius::apply(const ComplexJet3& u, const JetLimits& limits) const {
  const ComplexJet3 num = jet_add(jet_mul(jet_const(a_), u), jet_const(b_));
  const ComplexJet3 den = jet_add(jet_mul(jet_const(c_), u), jet_const(d_));
  if (!(std::abs(den.v) > limits.division_floor)) throw PoleOfMobius(u.v);
  return jet_div(num, den, limits);
}

Mobius compose(const Mobius& m1, const Mobius& m2) {
  return {m1.a() * m2.a() + m1.b() * m2.c(), m1.a() * m2.b() + m1.b() * m2.d(),
          m1.c() * m2.a() + m1.d() * m2.c(), m1.c() * m2.b() + m1.d() * m2.d()};
}

Mobius inverse(const Mobius& m) { return {m.d(), -m.b(), -m.c(), m.a()}; }

}  // namespace schwarzian_lab
