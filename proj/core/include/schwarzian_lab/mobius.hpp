#pragma once

#include <schwarzian_lab/jet.hpp>

#include <optional>

namespace schwarzian_lab {

/// z -> (a z + b) / (c z + d), stored in the normalized representative with
/// ad - bc = 1 whose first nonzero coefficient has argument in [0, pi).
class Mobius {
 public:
  /// Throws DegenerateMobius when |ad - bc| <= 1e-12 or a coefficient is
  /// not finite.
  Mobius(Complex a, Complex b, Complex c, Complex d);

  static Mobius identity() { return {1.0, 0.0, 0.0, 1.0}; }

  Complex a() const noexcept { return a_; }
  Complex b() const noexcept { return b_; }
  Complex c() const noexcept { return c_; }
  Complex d() const noexcept { return d_; }

  /// Image of z; std::nullopt stands for the point at infinity (cz + d = 0).
  std::optional<Complex> apply(Complex z) const noexcept;

  /// Jet of the map at z from its closed-form derivatives
  /// 1/(cz+d)^2, -2c/(cz+d)^3, 6c^2/(cz+d)^4. Throws PoleOfMobius at z = -d/c.
  ComplexJet3 jet(Complex z) const;

  /// Post-composes the map onto an arbitrary jet: (a u + b) / (c u + d).
  ComplexJet3 apply(const ComplexJet3& u, const JetLimits& limits = {}) const;

  friend bool operator==(const Mobius&, const Mobius&) = default;

 private:
  Complex a_, b_, c_, d_;
};

/// (m1 ∘ m2)(z) = m1(m2(z)).
Mobius compose(const Mobius& m1, const Mobius& m2);
Mobius inverse(const Mobius& m);

}  // namespace schwarzian_lab
