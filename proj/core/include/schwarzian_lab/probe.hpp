#pragma once

#include <schwarzian_lab/expr.hpp>
#include <schwarzian_lab/schwarzian.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace schwarzian_lab {

/// Rectangular sample grid. Points run row-major: index = iy * nx + ix,
/// re = re_min + ix * (re_max - re_min) / (nx - 1) (the midpoint when nx == 1).
struct GridSpec {
  double re_min = -1.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 1.0;
  int nx = 41;
  int ny = 41;
  double neighborhood_radius = 0.05;
  int neighborhood_samples = 9;

  /// Throws PreconditionViolation.
  void validate() const;
  /// True when the radius is at least four grid cells (allowed, but the
  /// neighborhoods then overlap heavily).
  bool radius_too_large() const;
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  Complex point(std::size_t index) const;
};

/// Center first, then neighborhood_samples - 1 equispaced points on the
/// circle of the given radius, rotated by a per-point angle drawn from
/// (seed, point_index). Same inputs, same points.
std::vector<Complex> neighborhood(Complex center, double radius, int samples, std::uint64_t seed,
                                  std::size_t point_index);

enum class ScanFlag : std::uint8_t { Pole = 1, Overflow = 2, CriticalPoint = 4 };

class ScanFlags {
 public:
  void set(ScanFlag f) noexcept { bits_ |= static_cast<std::uint8_t>(f); }
  bool has(ScanFlag f) const noexcept { return (bits_ & static_cast<std::uint8_t>(f)) != 0; }
  bool empty() const noexcept { return bits_ == 0; }
  ScanFlags& operator|=(ScanFlags other) noexcept {
    bits_ |= other.bits_;
    return *this;
  }
  /// "Pole;Overflow;CriticalPoint" subset in that order, "" when empty.
  std::string to_string() const;

  friend bool operator==(const ScanFlags&, const ScanFlags&) = default;

 private:
  std::uint8_t bits_ = 0;
};

enum class Statistic { Marty, SchwarzianFamily };

struct PointReport {
  Complex point{};
  double sup_stat = 0.0;
  int argmax_n = 0;
  /// Least-squares slope of log(stat) against log(n) on the top half of the
  /// n-range. NaN with fewer than 3 usable n; +inf when every sample hit a pole.
  double growth_slope = 0.0;
  ScanFlags flags{};
  int finite_samples = 0;
  /// Per entry of n_values: sup over the neighborhood, NaN if no sample
  /// of that n evaluated cleanly.
  std::vector<double> per_n;
};

struct MartyGridReport {
  Statistic statistic = Statistic::Marty;
  GridSpec grid{};
  std::vector<int> n_values;
  std::vector<PointReport> points;
};

struct ScanOptions {
  std::uint64_t seed = 0;
  /// 0 means std::thread::hardware_concurrency().
  unsigned workers = 0;
  /// Statistics below this are numerical noise and recorded as 0.
  double stat_floor = 1e-12;
  SchwarzianOptions schwarzian{};
};

/// first, first + 1, ..., last
std::vector<int> n_range(int first, int last);

/// f_n^# sampled over each grid point's neighborhood for every n.
MartyGridReport marty_scan(const FamilyExpr& f, const GridSpec& grid, const std::vector<int>& n_values,
                           const ScanOptions& options = {});

/// Same scan with the statistic |S'| / (1 + |S|^2) of z -> S_{f_n}(z).
MartyGridReport sd_family_scan(const FamilyExpr& f, const GridSpec& grid, const std::vector<int>& n_values,
                               const ScanOptions& options = {});

/// Spherical derivative of z -> S_{f_n}(z) at q, with S' from the 5-point
/// central stencil of the given step along the real axis. Throws the
/// underlying EvalError / CriticalPointError.
double sd_spherical_statistic(const FamilyExpr& f, double n, Complex q, double step,
                              const SchwarzianOptions& options = {});

enum class Verdict { BoundedCandidate, DivergentCandidate, Inconclusive };

const char* to_string(Verdict v) noexcept;  // bounded / divergent / inconclusive

struct ClassifyThresholds {
  double slope_threshold = 0.5;
  double decay_threshold = 0.1;
  double cap = 1e6;
};

struct NormalityVerdict {
  Verdict verdict = Verdict::Inconclusive;
  ClassifyThresholds thresholds{};
};

NormalityVerdict classify_point(const PointReport& point, const ClassifyThresholds& thresholds = {});
std::vector<NormalityVerdict> classify(const MartyGridReport& report, const ClassifyThresholds& thresholds = {});

// ---------------------------------------------------------------------------
// Hypothesis and bound checks
// ---------------------------------------------------------------------------

struct LocalBoundReport {
  int n = 0;
  Complex value_at_z0{};
  double k_estimate = 0.0;  // max |f_n'| over the sampled segment
  double bound_rhs = 0.0;   // k_estimate * |z - z0|
  double observed = 0.0;    // |f_n(z) - f_n(z0)|
  bool pass = false;
};

/// Mean-value bound along the straight segment [z0, z] for each n.
/// Throws SegmentEvaluationError naming every n whose segment failed to
/// evaluate.
std::vector<LocalBoundReport> local_bound_estimate(const FamilyExpr& f, const std::vector<int>& n_values,
                                                   Complex z0, Complex z, int segment_samples = 256,
                                                   const EvalOptions& options = {});

struct DerivativeFloorReport {
  double epsilon = 0.0;
  std::vector<int> n_values;
  /// passes[point * n_values.size() + k]: min |f_n'| over the neighborhood >= epsilon
  std::vector<std::uint8_t> passes;
  std::vector<ScanFlags> flags;  // per point
  double global_min_abs_derivative = 0.0;
  bool all_pass = false;

  bool pass(std::size_t point, std::size_t n_index) const { return passes.at(point * n_values.size() + n_index) != 0; }
};

/// Samples that fail to evaluate count as failures and are flagged.
DerivativeFloorReport derivative_floor_check(const FamilyExpr& f, const std::vector<int>& n_values,
                                             const GridSpec& grid, double epsilon, const ScanOptions& options = {});

struct ValueBoundReport {
  bool pass = false;
  double max_abs_value = 0.0;
  int argmax_n = 0;
};

/// max_n |f_n(zeta)| <= bound. Evaluation errors propagate.
ValueBoundReport value_bound_check(const FamilyExpr& f, const std::vector<int>& n_values, Complex zeta,
                                   double bound, const EvalOptions& options = {});

/// M k! / r^k: bound on |f^(k)| at points a distance r inside a region where |f| <= M.
double cauchy_derivative_bound(double max_modulus, double radius, int order);

/// M3/eps + 1.5 (M2/eps)^2: bound on |S_f| where |f''| <= M2, |f'''| <= M3, |f'| >= eps.
double sd_bound_from_hypotheses(double max_d2, double max_d3, double epsilon);

struct RegionMaxima {
  double min_abs_d1 = 0.0;
  double max_abs_d2 = 0.0;
  double max_abs_d3 = 0.0;
  double max_abs_sd = 0.0;
};

/// Extremes of |f_n'|, |f_n''|, |f_n'''| and |S_{f_n}| over the given points.
/// Evaluation and critical-point errors propagate.
RegionMaxima measure_region(const FamilyExpr& f, double n, const std::vector<Complex>& points,
                            const SchwarzianOptions& options = {});

/// Every neighborhood sample of every grid point, in point order.
std::vector<Complex> grid_sample_points(const GridSpec& grid, std::uint64_t seed);

struct HypothesesReport {
  ValueBoundReport value{};
  DerivativeFloorReport floor{};
  double epsilon = 0.0;
  double max_abs_d2 = 0.0;
  double max_abs_d3 = 0.0;
  double sd_bound = 0.0;
  double observed_max_sd = 0.0;
  bool bound_holds = false;
  bool pass = false;
};

/// Value bound at zeta, derivative floor over the grid, and the derived SD
/// bound compared with the largest |S_{f_n}| seen on the same samples.
HypothesesReport check_hypotheses(const FamilyExpr& f, const std::vector<int>& n_values, const GridSpec& grid,
                                  double epsilon, Complex zeta, double value_bound, const ScanOptions& options = {});

}  // namespace schwarzian_lab
