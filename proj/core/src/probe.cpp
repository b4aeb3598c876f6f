#include <schwarzian_lab/probe.hpp>

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace schwarzian_lab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

ScanFlag flag_for(JetFault fault) {
  return fault == JetFault::DivisionByZero ? ScanFlag::Pole : ScanFlag::Overflow;
}

void validate_n_values(const std::vector<int>& n_values) {
  if (n_values.empty()) throw PreconditionViolation("n_values must be nonempty");
  if (!std::is_sorted(n_values.begin(), n_values.end()))
    throw PreconditionViolation("n_values must be sorted ascending");
  if (n_values.front() < 1) throw PreconditionViolation("n_values must be positive");
}

// Fitted on the upper half of the sweep (at least the last three entries).
double growth_slope(const std::vector<int>& n_values, const std::vector<double>& per_n, double stat_floor) {
  const std::size_t count = n_values.size();
  std::size_t start = count / 2;
  if (count >= 3) start = std::min(start, count - 3);

  const double floor = std::max(stat_floor, std::numeric_limits<double>::min());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (std::size_t k = start; k < count; ++k) {
    if (std::isnan(per_n[k])) continue;
    const double x = std::log(static_cast<double>(n_values[k]));
    const double y = std::log(std::max(per_n[k], floor));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 3) return kNaN;
  const double denom = m * sxx - sx * sx;
  if (!(denom > 0.0)) return kNaN;
  return (m * sxy - sx * sy) / denom;
}

// Sample statistic for one (n, q); returns NaN and records a flag on failure.
template <class StatFn>
double sample_stat(StatFn&& stat, ScanFlags& flags) {
  try {
    return stat();
  } catch (const EvalError& e) {
    flags.set(flag_for(e.fault()));
  } catch (const JetError& e) {
    flags.set(flag_for(e.fault()));
  } catch (const CriticalPointError&) {
    flags.set(ScanFlag::CriticalPoint);
  }
  return kNaN;
}

template <class StatFn>
MartyGridReport run_scan(Statistic statistic, const GridSpec& grid, const std::vector<int>& n_values,
                         const ScanOptions& options, StatFn&& stat_at) {
  grid.validate();
  validate_n_values(n_values);

  MartyGridReport report;
  report.statistic = statistic;
  report.grid = grid;
  report.n_values = n_values;
  report.points.resize(grid.size());

  detail::parallel_for(grid.size(), options.workers, [&](std::size_t index) {
    PointReport& out = report.points[index];
    out.point = grid.point(index);
    out.per_n.assign(n_values.size(), kNaN);
    const std::vector<Complex> samples =
        neighborhood(out.point, grid.neighborhood_radius, grid.neighborhood_samples, options.seed, index);

    double sup = -1.0;
    for (std::size_t k = 0; k < n_values.size(); ++k) {
      const double n = n_values[k];
      double best = kNaN;
      for (const Complex& q : samples) {
        double s = sample_stat([&] { return stat_at(n, q); }, out.flags);
        if (std::isnan(s)) continue;
        if (s < options.stat_floor) s = 0.0;
        ++out.finite_samples;
        if (std::isnan(best) || s > best) best = s;
      }
      out.per_n[k] = best;
      if (!std::isnan(best) && best > sup) {
        sup = best;
        out.argmax_n = n_values[k];
      }
    }
    out.sup_stat = std::max(sup, 0.0);
    if (out.finite_samples == 0 && out.flags.has(ScanFlag::Pole))
      out.growth_slope = kInf;
    else
      out.growth_slope = growth_slope(n_values, out.per_n, options.stat_floor);
  });
  return report;
}

std::vector<std::vector<Complex>> all_neighborhoods(const GridSpec& grid, std::uint64_t seed) {
  std::vector<std::vector<Complex>> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = neighborhood(grid.point(i), grid.neighborhood_radius, grid.neighborhood_samples, seed, i);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

void GridSpec::validate() const {
  const auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(re_min) || !finite(re_max) || !finite(im_min) || !finite(im_max))
    throw PreconditionViolation("grid bounds must be finite");
  if (!(re_min < re_max) || !(im_min < im_max))
    throw PreconditionViolation("grid requires re_min < re_max and im_min < im_max");
  if (nx < 1 || ny < 1) throw PreconditionViolation("grid dimensions must be positive");
  if (!(neighborhood_radius > 0.0) || !finite(neighborhood_radius))
    throw PreconditionViolation("neighborhood radius must be positive");
  if (neighborhood_samples < 1) throw PreconditionViolation("neighborhood samples must be positive");
}

bool GridSpec::radius_too_large() const {
  const double cx = nx > 1 ? (re_max - re_min) / (nx - 1) : re_max - re_min;
  const double cy = ny > 1 ? (im_max - im_min) / (ny - 1) : im_max - im_min;
  return neighborhood_radius >= 4.0 * std::min(cx, cy);
}

Complex GridSpec::point(std::size_t index) const {
  const std::size_t ix = index % static_cast<std::size_t>(nx);
  const std::size_t iy = index / static_cast<std::size_t>(nx);
  const double re = nx > 1 ? re_min + static_cast<double>(ix) * (re_max - re_min) / (nx - 1) : 0.5 * (re_min + re_max);
  const double im = ny > 1 ? im_min + static_cast<double>(iy) * (im_max - im_min) / (ny - 1) : 0.5 * (im_min + im_max);
  return {re, im};
}

std::vector<Complex> neighborhood(Complex center, double radius, int samples, std::uint64_t seed,
                                  std::size_t point_index) {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(std::max(samples, 1)));
  out.push_back(center);
  const int ring = samples - 1;
  if (ring <= 0) return out;

  const std::uint64_t idx = point_index;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
  std::mt19937_64 rng(seq);
  const double offset = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  for (int k = 0; k < ring; ++k) {
    const double angle = 2.0 * std::numbers::pi * (k + offset) / ring;
    out.push_back(center + std::polar(radius, angle));
  }
  return out;
}

std::string ScanFlags::to_string() const {
  std::string out;
  const auto append = [&](ScanFlag f, const char* name) {
    if (!has(f)) return;
    if (!out.empty()) out += ';';
    out += name;
  };
  append(ScanFlag::Pole, "Pole");
  append(ScanFlag::Overflow, "Overflow");
  append(ScanFlag::CriticalPoint, "CriticalPoint");
  return out;
}

std::vector<int> n_range(int first, int last) {
  if (first > last) throw PreconditionViolation("n range is empty");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(last - first + 1));
  for (int n = first; n <= last; ++n) out.push_back(n);
  return out;
}

MartyGridReport marty_scan(const FamilyExpr& f, const GridSpec& grid, const std::vector<int>& n_values,
                           const ScanOptions& options) {
  const EvalOptions eval = options.schwarzian.eval;
  return run_scan(Statistic::Marty, grid, n_values, options,
                  [&](double n, Complex q) { return spherical_derivative(eval_jet(f, n, q, eval)); });
}

double sd_spherical_statistic(const FamilyExpr& f, double n, Complex q, double step,
                              const SchwarzianOptions& options) {
  const auto sd = [&](Complex p) { return schwarzian(eval_jet(f, n, p, options.eval), options.critical_floor); };
  const Complex s0 = sd(q);
  const Complex sm2 = sd(q - 2.0 * step);
  const Complex sm1 = sd(q - step);
  const Complex sp1 = sd(q + step);
  const Complex sp2 = sd(q + 2.0 * step);
  const Complex derivative = (sm2 - 8.0 * sm1 + 8.0 * sp1 - sp2) / (12.0 * step);
  const double stat = std::abs(derivative) / (1.0 + std::norm(s0));
  if (!std::isfinite(stat)) throw OverflowAtPoint(q);
  return stat;
}

MartyGridReport sd_family_scan(const FamilyExpr& f, const GridSpec& grid, const std::vector<int>& n_values,
                               const ScanOptions& options) {
  const double step = grid.neighborhood_radius / 8.0;
  return run_scan(Statistic::SchwarzianFamily, grid, n_values, options,
                  [&](double n, Complex q) { return sd_spherical_statistic(f, n, q, step, options.schwarzian); });
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::BoundedCandidate: return "bounded";
    case Verdict::DivergentCandidate: return "divergent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

NormalityVerdict classify_point(const PointReport& point, const ClassifyThresholds& t) {
  NormalityVerdict out;
  out.thresholds = t;
  const double slope = point.growth_slope;
  if (point.finite_samples == 0 && point.flags.has(ScanFlag::Pole)) {
    out.verdict = Verdict::DivergentCandidate;
  } else if (slope >= t.slope_threshold || point.sup_stat >= t.cap) {
    out.verdict = Verdict::DivergentCandidate;
  } else if (slope <= t.decay_threshold && point.sup_stat < t.cap) {
    out.verdict = Verdict::BoundedCandidate;
  } else {
    out.verdict = Verdict::Inconclusive;
  }
  return out;
}

std::vector<NormalityVerdict> classify(const MartyGridReport& report, const ClassifyThresholds& thresholds) {
  std::vector<NormalityVerdict> out;
  out.reserve(report.points.size());
  for (const auto& p : report.points) out.push_back(classify_point(p, thresholds));
  return out;
}

// ---------------------------------------------------------------------------

std::vector<LocalBoundReport> local_bound_estimate(const FamilyExpr& f, const std::vector<int>& n_values,
                                                   Complex z0, Complex z, int segment_samples,
                                                   const EvalOptions& options) {
  validate_n_values(n_values);
  if (segment_samples < 2) throw PreconditionViolation("segment_samples must be at least 2");

  std::vector<LocalBoundReport> out;
  std::vector<int> flagged;
  const double length = std::abs(z - z0);
  for (int n : n_values) {
    try {
      LocalBoundReport r;
      r.n = n;
      const ComplexJet3 start = eval_jet(f, n, z0, options);
      const ComplexJet3 end = eval_jet(f, n, z, options);
      r.value_at_z0 = start.v;
      double k_est = std::max(std::abs(start.d1), std::abs(end.d1));
      for (int s = 1; s + 1 < segment_samples; ++s) {
        const double t = static_cast<double>(s) / (segment_samples - 1);
        k_est = std::max(k_est, std::abs(eval_jet(f, n, z0 + t * (z - z0), options).d1));
      }
      r.k_estimate = k_est;
      r.bound_rhs = k_est * length;
      r.observed = std::abs(end.v - start.v);
      r.pass = r.observed <= r.bound_rhs * (1.0 + 1e-9) + 1e-12;
      out.push_back(r);
    } catch (const EvalError&) {
      flagged.push_back(n);
    }
  }
  if (!flagged.empty()) throw SegmentEvaluationError(std::move(flagged));
  return out;
}

DerivativeFloorReport derivative_floor_check(const FamilyExpr& f, const std::vector<int>& n_values,
                                             const GridSpec& grid, double epsilon, const ScanOptions& options) {
  if (!(epsilon > 0.0)) throw PreconditionViolation("derivative floor epsilon must be positive");
  grid.validate();
  validate_n_values(n_values);

  DerivativeFloorReport out;
  out.epsilon = epsilon;
  out.n_values = n_values;
  out.passes.assign(grid.size() * n_values.size(), 0);
  out.flags.assign(grid.size(), ScanFlags{});
  std::vector<double> point_min(grid.size(), kInf);
  const EvalOptions eval = options.schwarzian.eval;

  detail::parallel_for(grid.size(), options.workers, [&](std::size_t index) {
    const auto samples =
        neighborhood(grid.point(index), grid.neighborhood_radius, grid.neighborhood_samples, options.seed, index);
    for (std::size_t k = 0; k < n_values.size(); ++k) {
      double lowest = kInf;
      bool failed = false;
      for (const Complex& q : samples) {
        const double d = sample_stat([&] { return std::abs(eval_jet(f, n_values[k], q, eval).d1); }, out.flags[index]);
        if (std::isnan(d)) {
          failed = true;
          continue;
        }
        lowest = std::min(lowest, d);
      }
      out.passes[index * n_values.size() + k] = !failed && lowest >= epsilon;
      point_min[index] = std::min(point_min[index], lowest);
    }
  });

  out.global_min_abs_derivative = *std::min_element(point_min.begin(), point_min.end());
  out.all_pass = std::all_of(out.passes.begin(), out.passes.end(), [](std::uint8_t p) { return p != 0; });
  return out;
}

ValueBoundReport value_bound_check(const FamilyExpr& f, const std::vector<int>& n_values, Complex zeta, double bound,
                                   const EvalOptions& options) {
  if (!std::isfinite(bound)) throw PreconditionViolation("value bound L must be finite");
  validate_n_values(n_values);
  ValueBoundReport out;
  out.max_abs_value = -1.0;
  for (int n : n_values) {
    const double value = std::abs(eval_jet(f, n, zeta, options).v);
    if (value > out.max_abs_value) {
      out.max_abs_value = value;
      out.argmax_n = n;
    }
  }
  out.pass = out.max_abs_value <= bound;
  return out;
}

double cauchy_derivative_bound(double max_modulus, double radius, int order) {
  if (!(max_modulus >= 0.0)) throw PreconditionViolation("Cauchy bound requires M >= 0");
  if (!(radius > 0.0)) throw PreconditionViolation("Cauchy bound requires r > 0");
  if (order < 1 || order > 3) throw PreconditionViolation("Cauchy bound supports k in {1, 2, 3}");
  constexpr double factorial[] = {1.0, 1.0, 2.0, 6.0};
  return max_modulus * factorial[order] / std::pow(radius, order);
}

double sd_bound_from_hypotheses(double max_d2, double max_d3, double epsilon) {
  if (!(epsilon > 0.0)) throw PreconditionViolation("SD bound requires epsilon > 0");
  if (!(max_d2 >= 0.0) || !(max_d3 >= 0.0)) throw PreconditionViolation("SD bound requires M2, M3 >= 0");
  const double q = max_d2 / epsilon;
  return max_d3 / epsilon + 1.5 * q * q;
}

RegionMaxima measure_region(const FamilyExpr& f, double n, const std::vector<Complex>& points,
                            const SchwarzianOptions& options) {
  if (points.empty()) throw PreconditionViolation("measure_region needs at least one point");
  RegionMaxima out;
  out.min_abs_d1 = kInf;
  for (const Complex& q : points) {
    const ComplexJet3 j = eval_jet(f, n, q, options.eval);
    out.min_abs_d1 = std::min(out.min_abs_d1, std::abs(j.d1));
    out.max_abs_d2 = std::max(out.max_abs_d2, std::abs(j.d2));
    out.max_abs_d3 = std::max(out.max_abs_d3, std::abs(j.d3));
    out.max_abs_sd = std::max(out.max_abs_sd, std::abs(schwarzian(j, options.critical_floor)));
  }
  return out;
}

std::vector<Complex> grid_sample_points(const GridSpec& grid, std::uint64_t seed) {
  grid.validate();
  std::vector<Complex> out;
  for (auto& hood : all_neighborhoods(grid, seed)) out.insert(out.end(), hood.begin(), hood.end());
  return out;
}

HypothesesReport check_hypotheses(const FamilyExpr& f, const std::vector<int>& n_values, const GridSpec& grid,
                                  double epsilon, Complex zeta, double value_bound, const ScanOptions& options) {
  HypothesesReport out;
  out.epsilon = epsilon;
  out.value = value_bound_check(f, n_values, zeta, value_bound, options.schwarzian.eval);
  out.floor = derivative_floor_check(f, n_values, grid, epsilon, options);

  const std::vector<Complex> points = grid_sample_points(grid, options.seed);
  bool measured = true;
  for (int n : n_values) {
    try {
      const RegionMaxima m = measure_region(f, n, points, options.schwarzian);
      out.max_abs_d2 = std::max(out.max_abs_d2, m.max_abs_d2);
      out.max_abs_d3 = std::max(out.max_abs_d3, m.max_abs_d3);
      out.observed_max_sd = std::max(out.observed_max_sd, m.max_abs_sd);
    } catch (const EvalError&) {
      measured = false;
    } catch (const JetError&) {
      measured = false;
    } catch (const CriticalPointError&) {
      measured = false;
    }
  }
  if (!measured) out.observed_max_sd = kInf;
  out.sd_bound = sd_bound_from_hypotheses(out.max_abs_d2, out.max_abs_d3, epsilon);
  out.bound_holds = measured && out.observed_max_sd <= out.sd_bound * (1.0 + 1e-9);
  out.pass = out.value.pass && out.floor.all_pass && out.bound_holds;
  return out;
}

}  // namespace schwarzian_lab
