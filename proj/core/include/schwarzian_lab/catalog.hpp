#pragma once

#include <schwarzian_lab/expr.hpp>
#include <schwarzian_lab/mobius.hpp>

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace schwarzian_lab {

struct CatalogEntry {
  std::string_view name;
  std::string_view source;
  std::string_view description;
};

/// Named example families: example1, example2, example3, example4-f,
/// example4-g, example7-f, example7-g.
std::span<const CatalogEntry> family_catalog();
std::optional<std::string_view> catalog_family(std::string_view name);

/// Mobius map whose coefficients are expressions in n, e.g. "n,0,0,1".
class MobiusTemplate {
 public:
  /// Four comma-separated expressions a,b,c,d. They may use n and i but
  /// not z. Throws ParseError.
  static MobiusTemplate parse(std::string_view text);

  /// Throws DegenerateMobius / EvalError.
  Mobius instantiate(double n) const;

 private:
  std::array<FamilyExpr, 4> coeffs_;
};

/// Conjugating map for a catalog pair: "example4" -> "n,0,0,1" (z -> nz),
/// "example7" -> "1,n,0,1" (z -> z + n).
std::optional<std::string_view> catalog_conjugator(std::string_view pair_name);

}  // namespace schwarzian_lab
