#include <schwarzian_lab/catalog.hpp>

namespace schwarzian_lab {

namespace {

constexpr CatalogEntry kFamilies[] = {
    {"example1", "exp(n*z)", "e^{nz}; normal off the imaginary axis, SD family -n^2/2"},
    {"example2", "exp(z/(n*z+1))", "e^{z/(nz+1)}; SD family -1/(2(nz+1)^4)"},
    {"example3", "exp(z)-n", "e^z - n; normal in C, SD family -1/2"},
    {"example4-f", "exp(n*z)", "e^{nz}, conjugate to example4-g under z -> nz"},
    {"example4-g", "n*exp(z)", "n e^z"},
    {"example7-f", "exp(z+n)", "e^{z+n}, conjugate to example7-g under z -> z + n"},
    {"example7-g", "exp(z)+n", "e^z + n"},
};

struct ConjugatorEntry {
  std::string_view pair;
  std::string_view coefficients;
};

constexpr ConjugatorEntry kConjugators[] = {
    {"example4", "n,0,0,1"},
    {"example7", "1,n,0,1"},
};

}  // namespace

std::span<const CatalogEntry> family_catalog() { return kFamilies; }

std::optional<std::string_view> catalog_family(std::string_view name) {
  for (const auto& entry : kFamilies)
    if (entry.name == name) return entry.source;
  return std::nullopt;
}

std::optional<std::string_view> catalog_conjugator(std::string_view pair_name) {
  for (const auto& entry : kConjugators)
    if (entry.pair == pair_name) return entry.coefficients;
  return std::nullopt;
}

MobiusTemplate MobiusTemplate::parse(std::string_view text) {
  MobiusTemplate out;
  std::size_t start = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t comma = text.find(',', start);
    const bool last = k == 3;
    if (last != (comma == std::string_view::npos))
      throw ParseError(comma == std::string_view::npos ? text.size() : comma,
                       "Mobius map needs exactly four coefficients", "a,b,c,d");
    const std::string_view piece = text.substr(start, last ? std::string_view::npos : comma - start);
    try {
      out.coeffs_[k] = schwarzian_lab::parse(piece);
    } catch (const ParseError& e) {
      throw ParseError(start + e.position(), e.message(), e.expected());
    }
    if (out.coeffs_[k].depends_on_z())
      throw ParseError(start, "Mobius coefficients may depend on n but not on z", "expression in n");
    start = comma + 1;
  }
  return out;
}

Mobius MobiusTemplate::instantiate(double n) const {
  std::array<Complex, 4> c{};
  for (std::size_t k = 0; k < 4; ++k) c[k] = eval_jet(coeffs_[k], n, Complex(0.0, 0.0)).v;
  return {c[0], c[1], c[2], c[3]};
}

}  // namespace schwarzian_lab
