#include <schwarzian_lab/schwarzian.hpp>

#include <algorithm>
#include <cmath>

namespace schwarzian_lab {

namespace {

constexpr double kOmittedValueGuard = 1e-9;

bool within(double abs_gap, double rel_gap, const Tolerance& tol) {
  return abs_gap <= tol.abs || rel_gap <= tol.rel;
}

}  // namespace

double spherical_derivative(const ComplexJet3& j) noexcept {
  return std::abs(j.d1) / (1.0 + std::norm(j.v));
}

Complex schwarzian(const ComplexJet3& j, double critical_floor, const std::string& which) {
  if (!(std::abs(j.d1) > critical_floor)) throw CriticalPointError(j.d1, which);
  const Complex q2 = j.d2 / j.d1;
  const Complex s = j.d3 / j.d1 - 1.5 * q2 * q2;
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw OverflowAtPoint(j.v);
  return s;
}

IdentityReport make_report(Complex lhs, Complex rhs, const Tolerance& tol) {
  IdentityReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_gap = std::abs(lhs - rhs);
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  r.rel_gap = scale > 0.0 ? r.abs_gap / scale : 0.0;
  r.pass = within(r.abs_gap, r.rel_gap, tol);
  r.tolerance_used = tol;
  return r;
}

IdentityReport check_mobius_invariance(const FamilyExpr& f, double n, const Mobius& m, Complex z,
                                       const Tolerance& tol, const SchwarzianOptions& options) {
  const ComplexJet3 jf = eval_jet(f, n, z, options.eval);
  const Complex rhs = schwarzian(jf, options.critical_floor, "f");
  const ComplexJet3 composed = m.apply(jf, options.eval.limits);
  const Complex lhs = schwarzian(composed, options.critical_floor, "m∘f");
  return make_report(lhs, rhs, tol);
}

IdentityReport check_composition_law(const FamilyExpr& f, const FamilyExpr& g, double n, Complex z,
                                     const Tolerance& tol, const SchwarzianOptions& options) {
  const ComplexJet3 jf = eval_jet(f, n, z, options.eval);
  const Complex sf = schwarzian(jf, options.critical_floor, "f");
  const ComplexJet3 jg = eval_jet(g, n, jf.v, options.eval);
  const Complex sg = schwarzian(jg, options.critical_floor, "g");
  const ComplexJet3 jgf = eval_jet(g, n, jf, options.eval);
  const Complex lhs = schwarzian(jgf, options.critical_floor, "g∘f");
  const Complex rhs = sg * jf.d1 * jf.d1 + sf;
  return make_report(lhs, rhs, tol);
}

IdentityReport check_reciprocal(const FamilyExpr& f, double n, Complex omitted, Complex z,
                                const Tolerance& tol, const SchwarzianOptions& options) {
  const ComplexJet3 jf = eval_jet(f, n, z, options.eval);
  const Complex rhs = schwarzian(jf, options.critical_floor, "f");
  const ComplexJet3 shifted = jet_sub(jf, jet_const(omitted));
  if (!(std::abs(shifted.v) > kOmittedValueGuard))
    throw GuardViolation("f(z) is within 1e-9 of the omitted value; 1/(f - w) is singular at the sample point");
  const ComplexJet3 recip = jet_reciprocal(shifted, options.eval.limits);
  const Complex lhs = schwarzian(recip, options.critical_floor, "1/(f-w)");
  return make_report(lhs, rhs, tol);
}

IdentityReport check_conjugation(const FamilyExpr& f, const FamilyExpr& g, const Mobius& phi, double n, Complex z,
                                 const Tolerance& tol, const SchwarzianOptions& options) {
  const ComplexJet3 jf = eval_jet(f, n, z, options.eval);
  const ComplexJet3 jphi = phi.jet(z);
  const ComplexJet3 jg = eval_jet(g, n, jphi.v, options.eval);

  const auto phi_of_f = phi.apply(jf.v);
  if (!phi_of_f) throw ConjugacyViolated(INFINITY, "phi(f(z)) is the point at infinity but g(phi(z)) is finite");
  const IdentityReport conj = make_report(*phi_of_f, jg.v, tol);
  if (!conj.pass)
    throw ConjugacyViolated(conj.abs_gap, "phi(f(z)) != g(phi(z)): gap " + std::to_string(conj.abs_gap));

  const Complex sg = schwarzian(jg, options.critical_floor, "g");
  const Complex sf = schwarzian(jf, options.critical_floor, "f");
  const Complex lhs = sg * jphi.d1 * jphi.d1;
  return make_report(lhs, sf, tol);
}

}  // namespace schwarzian_lab
