#pragma once

#include <schwarzian_lab/expr.hpp>
#include <schwarzian_lab/jet.hpp>
#include <schwarzian_lab/mobius.hpp>

#include <string>

namespace schwarzian_lab {

struct SchwarzianOptions {
  /// |f'| at or below this is a critical point.
  double critical_floor = 1e-12;
  EvalOptions eval{};
};

/// |f'| / (1 + |f|^2)
double spherical_derivative(const ComplexJet3& j) noexcept;

/// f'''/f' - (3/2)(f''/f')^2. Throws CriticalPointError (tagged `which`)
/// when |f'| <= critical_floor.
Complex schwarzian(const ComplexJet3& j, double critical_floor = 1e-12, const std::string& which = "f");

struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-8;
};

/// Outcome of one numeric identity check, lhs against rhs.
struct IdentityReport {
  Complex lhs{};
  Complex rhs{};
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  bool pass = false;
  Tolerance tolerance_used{};
};

/// rel_gap is measured against max(|lhs|, |rhs|) and is 0 when both vanish.
IdentityReport make_report(Complex lhs, Complex rhs, const Tolerance& tol);

/// S of m∘f (jet-composed) against S of f, at z.
IdentityReport check_mobius_invariance(const FamilyExpr& f, double n, const Mobius& m, Complex z,
                                       const Tolerance& tol = {}, const SchwarzianOptions& options = {});

/// S of g∘f against (S_g ∘ f)·f'^2 + S_f, at z. g∘f is evaluated by seeding
/// g's variable with the jet of f.
IdentityReport check_composition_law(const FamilyExpr& f, const FamilyExpr& g, double n, Complex z,
                                     const Tolerance& tol = {}, const SchwarzianOptions& options = {});

/// S of 1/(f - omitted) against S of f, at z. That f omits `omitted` is the
/// caller's claim; only |f(z) - omitted| > 1e-9 is enforced (GuardViolation).
IdentityReport check_reciprocal(const FamilyExpr& f, double n, Complex omitted, Complex z,
                                const Tolerance& tol = {}, const SchwarzianOptions& options = {});

/// (S_g ∘ phi)(phi')^2 against S_f at z, after verifying phi(f(z)) = g(phi(z))
/// to within tol (ConjugacyViolated otherwise).
IdentityReport check_conjugation(const FamilyExpr& f, const FamilyExpr& g, const Mobius& phi, double n, Complex z,
                                 const Tolerance& tol = {}, const SchwarzianOptions& options = {});

}  // namespace schwarzian_lab
