#include <schwarzian_lab/catalog.hpp>
#include <schwarzian_lab/probe.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

namespace schwarzian_lab {
namespace {

FamilyExpr family(std::string_view name) { return parse(*catalog_family(name)); }

// One-point grid centered at z.
GridSpec single_point(Complex z, double radius = 0.05, int samples = 9) {
  GridSpec g;
  g.re_min = z.real() - 0.1;
  g.re_max = z.real() + 0.1;
  g.im_min = z.imag() - 0.1;
  g.im_max = z.imag() + 0.1;
  g.nx = g.ny = 1;
  g.neighborhood_radius = radius;
  g.neighborhood_samples = samples;
  return g;
}

ScanOptions serial() {
  ScanOptions o;
  o.workers = 1;
  return o;
}

// Ordinary least squares of log(y) on log(n) over the last half.
double slope_oracle(const std::vector<int>& ns, const std::vector<double>& ys) {
  const std::size_t start = std::min(ns.size() / 2, ns.size() - 3);
  std::vector<double> xs, ls;
  for (std::size_t k = start; k < ns.size(); ++k) {
    xs.push_back(std::log(ns[k]));
    ls.push_back(std::log(std::max(ys[k], 1e-12)));
  }
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) mx += xs[k], my += ls[k];
  mx /= xs.size();
  my /= xs.size();
  double num = 0, den = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) num += (xs[k] - mx) * (ls[k] - my), den += (xs[k] - mx) * (xs[k] - mx);
  return num / den;
}

// n e^{nx} / (1 + e^{2nx}): spherical derivative of e^{nz} at Re z = x.
double exp_family_stat(int n, Complex q) {
  const double x = q.real();
  return n * std::exp(n * x) / (1.0 + std::exp(2.0 * n * x));
}

// ----------------------------------------------------------------------------
// Grid and neighborhoods
// ----------------------------------------------------------------------------

TEST(GridSpec, Validation) {
  GridSpec g;
  EXPECT_NO_THROW(g.validate());
  g.re_min = 1.0;
  EXPECT_THROW(g.validate(), PreconditionViolation);
  g = GridSpec{};
  g.nx = 0;
  EXPECT_THROW(g.validate(), PreconditionViolation);
  g = GridSpec{};
  g.neighborhood_radius = 0.0;
  EXPECT_THROW(g.validate(), PreconditionViolation);
  g = GridSpec{};
  g.neighborhood_samples = 0;
  EXPECT_THROW(g.validate(), PreconditionViolation);
}

TEST(GridSpec, RadiusWarning) {
  GridSpec g;  // cell 0.05
  EXPECT_FALSE(g.radius_too_large());
  g.neighborhood_radius = 0.2;
  EXPECT_TRUE(g.radius_too_large());
}

TEST(GridSpec, RowMajorPoints) {
  GridSpec g;
  g.nx = 3;
  g.ny = 2;
  EXPECT_EQ(g.size(), 6u);
  EXPECT_EQ(g.point(0), Complex(-1.0, -1.0));
  EXPECT_EQ(g.point(2), Complex(1.0, -1.0));
  EXPECT_EQ(g.point(4), Complex(0.0, 1.0));
  EXPECT_EQ(single_point(Complex(0.5, 0.0)).point(0), Complex(0.5, 0.0));
}

TEST(Neighborhood, CenterThenCircle) {
  const auto pts = neighborhood(Complex(0.3, -0.2), 0.05, 9, 42, 7);
  ASSERT_EQ(pts.size(), 9u);
  EXPECT_EQ(pts[0], Complex(0.3, -0.2));
  for (std::size_t k = 1; k < pts.size(); ++k) EXPECT_NEAR(std::abs(pts[k] - pts[0]), 0.05, 1e-15);
  // equispaced: consecutive circle points subtend 2 pi / 8
  for (std::size_t k = 2; k < pts.size(); ++k)
    EXPECT_NEAR(std::abs(pts[k] - pts[k - 1]), 2 * 0.05 * std::sin(3.141592653589793 / 8), 1e-14);
  EXPECT_EQ(neighborhood(Complex(0.3, -0.2), 0.05, 9, 42, 7), pts);
  EXPECT_NE(neighborhood(Complex(0.3, -0.2), 0.05, 9, 43, 7), pts);
  EXPECT_NE(neighborhood(Complex(0.3, -0.2), 0.05, 9, 42, 8), pts);
  EXPECT_EQ(neighborhood(1.0, 0.05, 1, 0, 0), std::vector<Complex>{Complex(1.0)});
}

TEST(NRange, Inclusive) {
  EXPECT_EQ(n_range(1, 4), (std::vector<int>{1, 2, 3, 4}));
  EXPECT_THROW(n_range(3, 2), PreconditionViolation);
}

// ----------------------------------------------------------------------------
// Marty scan
// ----------------------------------------------------------------------------

TEST(MartyScan, ExpFamilyRightHalfPlaneDecays) {
  const auto ns = n_range(1, 32);
  const auto report = marty_scan(family("example1"), single_point(0.5), ns, serial());
  const PointReport& p = report.points.at(0);
  const auto pts = neighborhood(0.5, 0.05, 9, 0, 0);
  double best = 0.0;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    double per = 0.0;
    for (Complex q : pts) per = std::max(per, exp_family_stat(ns[k], q));
    EXPECT_NEAR(p.per_n[k], per, 1e-12 * per) << "n = " << ns[k];
    best = std::max(best, per);
  }
  EXPECT_NEAR(p.sup_stat, best, 1e-12);
  EXPECT_GE(p.sup_stat, 0.648);  // center value at n = 2
  EXPECT_LE(p.sup_stat, 0.73);   // disk maximum over Re z >= 0.45
  EXPECT_GE(p.argmax_n, 2);
  EXPECT_LE(p.argmax_n, 3);
  EXPECT_LT(p.growth_slope, 0.0);
  EXPECT_EQ(classify_point(p).verdict, Verdict::BoundedCandidate);
}

TEST(MartyScan, ExpFamilyOriginGrowsLinearly) {
  const auto ns = n_range(1, 64);
  const PointReport p = marty_scan(family("example1"), single_point(0.0), ns, serial()).points.at(0);
  for (std::size_t k = 0; k < ns.size(); ++k) EXPECT_NEAR(p.per_n[k], ns[k] / 2.0, 1e-12 * ns[k]);
  EXPECT_NEAR(p.sup_stat, 32.0, 1e-12);
  EXPECT_EQ(p.argmax_n, 64);
  EXPECT_NEAR(p.growth_slope, 1.0, 1e-9);
  EXPECT_EQ(classify_point(p).verdict, Verdict::DivergentCandidate);
}

TEST(MartyScan, ExampleThreeBoundedEverywhere) {
  GridSpec g;
  g.nx = g.ny = 5;
  const auto ns = n_range(1, 64);
  const auto report = marty_scan(family("example3"), g, ns, serial());
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const PointReport& p = report.points[idx];
    const auto pts = neighborhood(g.point(idx), g.neighborhood_radius, g.neighborhood_samples, 0, idx);
    std::vector<double> expected(ns.size(), 0.0);
    for (std::size_t k = 0; k < ns.size(); ++k)
      for (Complex q : pts) {
        const Complex w = std::exp(q) - static_cast<double>(ns[k]);
        expected[k] = std::max(expected[k], std::exp(q.real()) / (1.0 + std::norm(w)));
      }
    for (std::size_t k = 0; k < ns.size(); ++k) EXPECT_NEAR(p.per_n[k], expected[k], 1e-12 * expected[k]);
    EXPECT_NEAR(p.growth_slope, slope_oracle(ns, expected), 1e-9);
    EXPECT_EQ(classify_point(p).verdict, Verdict::BoundedCandidate) << g.point(idx);
  }
}

TEST(MartyScan, PoleEverywhereForcesInfiniteSlope) {
  const auto ns = n_range(1, 8);
  const PointReport p = marty_scan(parse("1/(z-z)"), single_point(0.3), ns, serial()).points.at(0);
  EXPECT_TRUE(p.flags.has(ScanFlag::Pole));
  EXPECT_EQ(p.finite_samples, 0);
  EXPECT_EQ(p.growth_slope, std::numeric_limits<double>::infinity());
  for (double v : p.per_n) EXPECT_TRUE(std::isnan(v));
  EXPECT_EQ(classify_point(p).verdict, Verdict::DivergentCandidate);
}

TEST(MartyScan, IsolatedPoleIsFlaggedAndExcluded) {
  // exp(z/(n z + 1)) has a singularity at -1 for n = 1 only
  const auto ns = n_range(1, 8);
  const PointReport p = marty_scan(family("example2"), single_point(-1.0), ns, serial()).points.at(0);
  EXPECT_TRUE(p.flags.has(ScanFlag::Pole));
  EXPECT_EQ(p.finite_samples, 8 * 9 - 1);
  EXPECT_TRUE(std::isfinite(p.per_n[0]));  // the circle samples of n = 1 still count
  EXPECT_TRUE(std::isfinite(p.growth_slope));
}

TEST(MartyScan, OverflowIsFlagged) {
  const auto ns = n_range(1, 64);
  const PointReport p = marty_scan(family("example1"), single_point(20.0), ns, serial()).points.at(0);
  EXPECT_TRUE(p.flags.has(ScanFlag::Overflow));
  EXPECT_FALSE(p.flags.has(ScanFlag::Pole));
  EXPECT_TRUE(std::isnan(p.per_n.back()));
  EXPECT_TRUE(std::isfinite(p.per_n.front()));
}

TEST(MartyScan, FewerThanThreeNGivesNaNSlope) {
  const PointReport p = marty_scan(family("example1"), single_point(0.0), {1, 2}, serial()).points.at(0);
  EXPECT_TRUE(std::isnan(p.growth_slope));
  EXPECT_EQ(classify_point(p).verdict, Verdict::Inconclusive);
}

TEST(MartyScan, RejectsBadNValues) {
  EXPECT_THROW(marty_scan(family("example1"), single_point(0.0), {}, serial()), PreconditionViolation);
  EXPECT_THROW(marty_scan(family("example1"), single_point(0.0), {3, 2, 4}, serial()), PreconditionViolation);
  EXPECT_THROW(marty_scan(family("example1"), single_point(0.0), {0, 1, 2}, serial()), PreconditionViolation);
}

TEST(Scans, DeterministicAcrossRunsAndWorkers) {
  GridSpec g;
  g.nx = 9;
  g.ny = 7;
  const auto ns = n_range(1, 16);
  ScanOptions one = serial();
  one.seed = 1234;
  ScanOptions many = one;
  many.workers = 5;
  for (const FamilyExpr& f : {family("example2"), family("example1")}) {
    const auto a = marty_scan(f, g, ns, one);
    const auto b = marty_scan(f, g, ns, many);
    const auto c = marty_scan(f, g, ns, one);
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
      // memcmp-style equality including NaN payload positions
      for (const auto* other : {&b, &c}) {
        const PointReport& x = a.points[i];
        const PointReport& y = other->points[i];
        EXPECT_EQ(std::memcmp(&x.sup_stat, &y.sup_stat, sizeof(double)), 0);
        EXPECT_EQ(std::memcmp(&x.growth_slope, &y.growth_slope, sizeof(double)), 0);
        EXPECT_EQ(x.argmax_n, y.argmax_n);
        EXPECT_EQ(x.flags, y.flags);
        ASSERT_EQ(x.per_n.size(), y.per_n.size());
        EXPECT_EQ(std::memcmp(x.per_n.data(), y.per_n.data(), x.per_n.size() * sizeof(double)), 0);
      }
    }
    const auto sd1 = sd_family_scan(f, g, ns, one);
    const auto sd2 = sd_family_scan(f, g, ns, many);
    for (std::size_t i = 0; i < sd1.points.size(); ++i)
      EXPECT_EQ(std::memcmp(sd1.points[i].per_n.data(), sd2.points[i].per_n.data(),
                            sd1.points[i].per_n.size() * sizeof(double)),
                0);
  }
}

// ----------------------------------------------------------------------------
// SD-family scan
// ----------------------------------------------------------------------------

// S of exp(z/(nz+1)) in closed form, and the 5-point stencil applied to it.
Complex example2_sd(double n, Complex q) {
  const Complex w = n * q + 1.0;
  return -1.0 / (2.0 * w * w * w * w);
}

double example2_stencil_stat(double n, Complex q, double h) {
  const Complex d = (example2_sd(n, q - 2.0 * h) - 8.0 * example2_sd(n, q - h) + 8.0 * example2_sd(n, q + h) -
                     example2_sd(n, q + 2.0 * h)) /
                    (12.0 * h);
  return std::abs(d) / (1.0 + std::norm(example2_sd(n, q)));
}

TEST(SdScan, ExpFamilyStatisticVanishes) {
  GridSpec g;
  g.nx = g.ny = 5;
  const auto report = sd_family_scan(family("example1"), g, n_range(1, 16), serial());
  EXPECT_EQ(report.statistic, Statistic::SchwarzianFamily);
  for (const PointReport& p : report.points) {
    EXPECT_EQ(p.sup_stat, 0.0);
    EXPECT_TRUE(p.flags.empty());
    EXPECT_EQ(classify_point(p).verdict, Verdict::BoundedCandidate);
  }
}

TEST(SdScan, ExpFamilyHitsCriticalFloorFarLeft) {
  // |f_n'(-1)| = n e^{-n} drops below 1e-12 from n = 32 on
  const PointReport p = sd_family_scan(family("example1"), single_point(-1.0), n_range(1, 64), serial()).points.at(0);
  EXPECT_TRUE(p.flags.has(ScanFlag::CriticalPoint));
  EXPECT_EQ(p.sup_stat, 0.0);
  EXPECT_TRUE(std::isnan(p.per_n.back()));
  EXPECT_EQ(classify_point(p).verdict, Verdict::Inconclusive);
}

TEST(SdScan, StencilStatisticMatchesClosedForm) {
  const double h = 0.05 / 8;
  for (double n : {1.0, 4.0, 17.0}) {
    for (Complex q : {Complex(0.0), Complex(1.0), Complex(0.2, 0.3)}) {
      const double expected = example2_stencil_stat(n, q, h);
      // the stencil divides rounding in S (relative ~1e-13) by 12h
      const double stencil_noise = 1e-12 * (1.0 + std::abs(example2_sd(n, q))) / h;
      EXPECT_NEAR(sd_spherical_statistic(family("example2"), n, q, h), expected, 1e-9 * expected + stencil_noise);
    }
  }
}

TEST(SdScan, ExampleTwoDivergesAtOrigin) {
  const auto ns = n_range(1, 32);
  const PointReport p = sd_family_scan(family("example2"), single_point(0.0), ns, serial()).points.at(0);
  // exact value at the center is 2n / (1 + 1/4) = 1.6 n; stencil error stays below 10% for n <= 32
  EXPECT_GE(p.per_n[0], 1.6 * 0.99);
  EXPECT_GE(p.sup_stat, 1.6 * 32 * 0.9);
  EXPECT_GT(p.growth_slope, 0.5);
  EXPECT_EQ(classify_point(p).verdict, Verdict::DivergentCandidate);
}

TEST(SdScan, ExampleTwoBoundedAtOne) {
  const auto ns = n_range(1, 32);
  const PointReport p = sd_family_scan(family("example2"), single_point(1.0), ns, serial()).points.at(0);
  const auto pts = neighborhood(1.0, 0.05, 9, 0, 0);
  for (std::size_t k = 0; k < ns.size(); ++k) {
    double expected = 0.0;
    for (Complex q : pts) expected = std::max(expected, example2_stencil_stat(ns[k], q, 0.05 / 8));
    if (expected < 1e-12) expected = 0.0;
    EXPECT_NEAR(p.per_n[k], expected, 1e-8 * expected + 1e-12 * 8 / 0.05);
  }
  EXPECT_LT(p.growth_slope, 0.1);
  EXPECT_EQ(classify_point(p).verdict, Verdict::BoundedCandidate);
}

TEST(SdScan, CriticalPointFlag) {
  const PointReport p = sd_family_scan(parse("z^2"), single_point(0.0), n_range(1, 4), serial()).points.at(0);
  EXPECT_TRUE(p.flags.has(ScanFlag::CriticalPoint));
  EXPECT_EQ(p.finite_samples, 4 * 8);
}

TEST(ScanFlags, Names) {
  ScanFlags f;
  EXPECT_EQ(f.to_string(), "");
  f.set(ScanFlag::CriticalPoint);
  f.set(ScanFlag::Pole);
  EXPECT_EQ(f.to_string(), "Pole;CriticalPoint");
  f.set(ScanFlag::Overflow);
  EXPECT_EQ(f.to_string(), "Pole;Overflow;CriticalPoint");
}

// ----------------------------------------------------------------------------
// Classification
// ----------------------------------------------------------------------------

PointReport with(double slope, double sup) {
  PointReport p;
  p.growth_slope = slope;
  p.sup_stat = sup;
  p.finite_samples = 10;
  return p;
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify_point(with(1.0, 32.0)).verdict, Verdict::DivergentCandidate);
  EXPECT_EQ(classify_point(with(-0.8, 0.65)).verdict, Verdict::BoundedCandidate);
  EXPECT_EQ(classify_point(with(0.3, 10.0)).verdict, Verdict::Inconclusive);
  EXPECT_EQ(classify_point(with(-1.0, 2e6)).verdict, Verdict::DivergentCandidate);  // cap
  EXPECT_EQ(classify_point(with(0.5, 1.0)).verdict, Verdict::DivergentCandidate);   // boundary
  EXPECT_EQ(classify_point(with(0.1, 1.0)).verdict, Verdict::BoundedCandidate);
  const ClassifyThresholds t{2.0, 0.0, 10.0};
  const NormalityVerdict v = classify_point(with(1.0, 32.0), t);
  EXPECT_EQ(v.verdict, Verdict::DivergentCandidate);
  EXPECT_EQ(v.thresholds.cap, 10.0);
  EXPECT_STREQ(to_string(Verdict::BoundedCandidate), "bounded");
  EXPECT_STREQ(to_string(Verdict::DivergentCandidate), "divergent");
  EXPECT_STREQ(to_string(Verdict::Inconclusive), "inconclusive");
}

TEST(Classify, Monotone) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> slope(-3.0, 3.0), logsup(-5.0, 8.0), thr(0.0, 2.0);
  for (int trial = 0; trial < 20000; ++trial) {
    const PointReport p = with(slope(rng), std::pow(10.0, logsup(rng)));
    ClassifyThresholds base{thr(rng), -thr(rng), std::pow(10.0, logsup(rng))};
    ClassifyThresholds looser = base;
    looser.slope_threshold += thr(rng);
    looser.cap *= 1.0 + thr(rng);
    if (classify_point(p, base).verdict == Verdict::BoundedCandidate)
      EXPECT_NE(classify_point(p, looser).verdict, Verdict::DivergentCandidate);
  }
}

TEST(Classify, WholeReport) {
  MartyGridReport r;
  r.points = {with(1.0, 32.0), with(-0.8, 0.65)};
  const auto v = classify(r);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].verdict, Verdict::DivergentCandidate);
  EXPECT_EQ(v[1].verdict, Verdict::BoundedCandidate);
}

// ----------------------------------------------------------------------------
// Bound checks
// ----------------------------------------------------------------------------

TEST(LocalBound, QuadraticFamily) {
  const auto reports = local_bound_estimate(parse("(z^2)/n"), n_range(1, 6), 0.0, 0.5);
  for (const auto& r : reports) {
    EXPECT_NEAR(r.k_estimate, 1.0 / r.n, 1e-15);
    EXPECT_NEAR(r.observed, 0.25 / r.n, 1e-15);
    EXPECT_NEAR(r.bound_rhs, 0.5 / r.n, 1e-15);
    EXPECT_EQ(r.value_at_z0, Complex(0.0));
    EXPECT_TRUE(r.pass);
  }
}

TEST(LocalBound, ExpFamilyWithCommonFixedPoint) {
  const auto reports = local_bound_estimate(parse("exp(n*z)-1"), n_range(1, 10), 0.0, 0.1);
  for (const auto& r : reports) {
    EXPECT_EQ(r.value_at_z0, Complex(0.0));
    EXPECT_NEAR(r.observed, std::exp(0.1 * r.n) - 1.0, 1e-14);
    EXPECT_NEAR(r.k_estimate, r.n * std::exp(0.1 * r.n), 1e-12 * r.n * std::exp(0.1 * r.n));
    EXPECT_TRUE(r.pass);
  }
}

TEST(LocalBound, DegenerateSegment) {
  for (const auto& r : local_bound_estimate(family("example1"), {1, 2}, Complex(0.3, 0.1), Complex(0.3, 0.1))) {
    EXPECT_EQ(r.observed, 0.0);
    EXPECT_EQ(r.bound_rhs, 0.0);
    EXPECT_TRUE(r.pass);
  }
}

TEST(LocalBound, SegmentThroughPole) {
  try {
    local_bound_estimate(family("example2"), n_range(1, 4), 0.0, -1.0, 5);
    FAIL();
  } catch (const SegmentEvaluationError& e) {
    // z = -1/n hits the sample grid {0, -0.25, -0.5, -0.75, -1} for n = 1, 2, 4
    EXPECT_EQ(e.flagged_n(), (std::vector<int>{1, 2, 4}));
  }
  EXPECT_THROW(local_bound_estimate(family("example1"), {1}, 0.0, 1.0, 1), PreconditionViolation);
}

TEST(LocalBound, HoldsOnGeneratedFamilies) {
  testing::ExprGenerator gen(41);
  int checked = 0;
  for (int trial = 0; trial < 5000 && checked < 200; ++trial) {
    const auto tree = gen.generate(3);
    const Complex z0 = gen.point(0.8);
    const Complex z = z0 + gen.point(0.2);
    bool safe = true;
    for (int k = 0; k <= 8 && safe; ++k)
      for (int n = 1; n <= 3 && safe; ++n) safe = testing::safe_point(*tree, n, z0 + (z - z0) * (k / 8.0));
    if (!safe) continue;
    for (const auto& r : local_bound_estimate(parse(testing::render(*tree)), n_range(1, 3), z0, z))
      EXPECT_TRUE(r.pass) << testing::render(*tree) << " observed " << r.observed << " bound " << r.bound_rhs;
    ++checked;
  }
  EXPECT_GE(checked, 200);
}

TEST(DerivativeFloor, ExpFamily) {
  GridSpec g;
  g.nx = g.ny = 5;
  const auto ns = n_range(1, 6);
  const auto r = derivative_floor_check(family("example1"), ns, g, 0.5, serial());
  double global_min = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const auto pts = neighborhood(g.point(idx), g.neighborhood_radius, g.neighborhood_samples, 0, idx);
    for (std::size_t k = 0; k < ns.size(); ++k) {
      double lo = std::numeric_limits<double>::infinity();
      for (Complex q : pts) lo = std::min(lo, ns[k] * std::exp(ns[k] * q.real()));
      EXPECT_EQ(r.pass(idx, k), lo >= 0.5);
      global_min = std::min(global_min, lo);
    }
  }
  EXPECT_NEAR(r.global_min_abs_derivative, global_min, 1e-14);
  EXPECT_FALSE(r.all_pass);
}

TEST(DerivativeFloor, PerturbedIdentityPasses) {
  GridSpec g;
  g.re_min = g.im_min = -0.14;
  g.re_max = g.im_max = 0.14;
  g.nx = g.ny = 7;
  const auto r = derivative_floor_check(parse("z+(z^2)/n"), n_range(1, 16), g, 0.5, serial());
  EXPECT_TRUE(r.all_pass);
  EXPECT_GE(r.global_min_abs_derivative, 0.5);
}

TEST(DerivativeFloor, EpsilonMustBePositive) {
  EXPECT_THROW(derivative_floor_check(family("example1"), {1}, GridSpec{}, 0.0), PreconditionViolation);
}

TEST(ValueBound, Examples) {
  const auto grows = value_bound_check(family("example3"), n_range(1, 64), 0.0, 10.0);
  EXPECT_FALSE(grows.pass);
  EXPECT_EQ(grows.argmax_n, 64);
  EXPECT_NEAR(grows.max_abs_value, 63.0, 1e-13);

  const auto unit = value_bound_check(family("example1"), n_range(1, 64), 0.0, 1.0);
  EXPECT_TRUE(unit.pass);
  EXPECT_EQ(unit.max_abs_value, 1.0);

  EXPECT_TRUE(value_bound_check(family("example7-f"), {1}, 0.0, 3.0).pass);
  const auto shifted = value_bound_check(family("example7-f"), {1, 2}, 0.0, 3.0);
  EXPECT_FALSE(shifted.pass);
  EXPECT_NEAR(shifted.max_abs_value, std::exp(2.0), 1e-14);
}

TEST(CauchyBound, Examples) {
  EXPECT_EQ(cauchy_derivative_bound(1.0, 1.0, 1), 1.0);
  EXPECT_EQ(cauchy_derivative_bound(2.0, 0.5, 3), 96.0);
  const double bound = cauchy_derivative_bound(std::exp(1.0), 0.5, 3);
  EXPECT_NEAR(bound, std::exp(1.0) * 48.0, 1e-12);
  EXPECT_LE(std::abs(eval_jet(parse("exp(z)"), 1.0, 0.0).d3), bound);
  EXPECT_THROW(cauchy_derivative_bound(1.0, 0.0, 1), PreconditionViolation);
  EXPECT_THROW(cauchy_derivative_bound(1.0, 1.0, 4), PreconditionViolation);
  EXPECT_THROW(cauchy_derivative_bound(-1.0, 1.0, 1), PreconditionViolation);
}

TEST(CauchyBound, DominatesDerivativesOfGeneratedFamilies) {
  // |f^(k)(z)| <= max_{|q - z| = r} |f| k! / r^k
  testing::ExprGenerator gen(43);
  int checked = 0;
  for (int trial = 0; trial < 5000 && checked < 200; ++trial) {
    const auto tree = gen.generate(3);
    const Complex z = gen.point(0.5);
    if (!testing::safe_point(*tree, 2, z)) continue;
    double m = 0.0;
    for (int k = 0; k < 256; ++k)
      m = std::max(m, std::abs(testing::eval_scalar(*tree, 2, z + std::polar(0.04, 2 * 3.141592653589793 * k / 256))));
    const ComplexJet3 j = eval_jet(parse(testing::render(*tree)), 2, z);
    EXPECT_LE(std::abs(j.d1), cauchy_derivative_bound(m, 0.04, 1) * (1 + 1e-6));
    EXPECT_LE(std::abs(j.d2), cauchy_derivative_bound(m, 0.04, 2) * (1 + 1e-6));
    EXPECT_LE(std::abs(j.d3), cauchy_derivative_bound(m, 0.04, 3) * (1 + 1e-6));
    ++checked;
  }
  EXPECT_GE(checked, 200);
}

TEST(SdBound, Examples) {
  for (int n : {1, 2, 5}) {
    const double bound = sd_bound_from_hypotheses(2.0 / n, 0.0, 0.5);
    EXPECT_NEAR(bound, 24.0 / (n * n), 1e-14);
    for (Complex z : {Complex(0.25), Complex(-0.25), Complex(0.0, 0.2)}) {
      const Complex s = schwarzian(eval_jet(parse("z+(z^2)/n"), n, z));
      EXPECT_LE(std::abs(s), bound * (1 + 1e-9));
    }
  }
  EXPECT_EQ(sd_bound_from_hypotheses(0.0, 3.0, 0.5), 6.0);
  EXPECT_THROW(sd_bound_from_hypotheses(1.0, 1.0, 0.0), PreconditionViolation);
}

TEST(SdBound, DecreasesInEpsilon) {
  double prev = std::numeric_limits<double>::infinity();
  for (double eps = 0.01; eps < 100.0; eps *= 1.3) {
    const double b = sd_bound_from_hypotheses(2.0, 5.0, eps);
    EXPECT_LT(b, prev);
    prev = b;
  }
}

// ----------------------------------------------------------------------------
// Properties linking the checks
// ----------------------------------------------------------------------------

TEST(Hypotheses, BoundChainIsSound) {
  testing::ExprGenerator gen(47);
  int checked = 0;
  for (int trial = 0; trial < 5000 && checked < 60; ++trial) {
    const auto tree = gen.generate(3);
    const Complex c = gen.point(0.5);
    GridSpec g;
    g.re_min = c.real() - 0.1;
    g.re_max = c.real() + 0.1;
    g.im_min = c.imag() - 0.1;
    g.im_max = c.imag() + 0.1;
    g.nx = g.ny = 3;
    bool safe = true;
    for (Complex q : grid_sample_points(g, 0))
      for (int n = 1; n <= 3 && safe; ++n) safe = testing::safe_point(*tree, n, q);
    if (!safe) continue;
    const FamilyExpr f = parse(testing::render(*tree));
    const auto floor = derivative_floor_check(f, n_range(1, 3), g, 1.0, serial());
    const double eps = floor.global_min_abs_derivative;
    if (!(eps > 1e-3)) continue;
    const auto r = check_hypotheses(f, n_range(1, 3), g, eps, c, 1e300, serial());
    EXPECT_TRUE(r.floor.all_pass);
    EXPECT_TRUE(r.bound_holds) << testing::render(*tree) << " observed " << r.observed_max_sd << " bound "
                               << r.sd_bound;
    EXPECT_LE(r.observed_max_sd, r.sd_bound * (1 + 1e-9));
    ++checked;
  }
  EXPECT_GE(checked, 60);
}

TEST(Hypotheses, ExampleFamily) {
  GridSpec g;
  g.re_min = g.im_min = -0.14;
  g.re_max = g.im_max = 0.14;
  g.nx = g.ny = 5;
  const auto r = check_hypotheses(parse("z+(z^2)/n"), n_range(1, 8), g, 0.5, 0.0, 1.0, serial());
  EXPECT_TRUE(r.value.pass);
  EXPECT_TRUE(r.floor.all_pass);
  EXPECT_TRUE(r.bound_holds);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.max_abs_d2, 2.0, 1e-15);  // n = 1
  EXPECT_EQ(r.max_abs_d3, 0.0);
  EXPECT_NEAR(r.sd_bound, 24.0, 1e-13);
}

TEST(Hypotheses, ContainmentOfVerdicts) {
  struct Case {
    std::string source;
    GridSpec grid;
    Complex zeta;
  };
  GridSpec near_origin;
  near_origin.re_min = near_origin.im_min = -0.14;
  near_origin.re_max = near_origin.im_max = 0.14;
  near_origin.nx = near_origin.ny = 5;
  GridSpec right;
  right.re_min = 0.5;
  right.re_max = 1.5;
  right.im_min = -0.5;
  right.im_max = 0.5;
  right.nx = right.ny = 5;
  const std::vector<Case> cases{
      {"z+(z^2)/n", near_origin, 0.0},
      {"exp(z/(n*z+1))", right, 1.0},
      {"exp(z)+1/n", right, 1.0},
      {"(z+2)^2/n+n*z", right, 1.0},
  };
  const auto ns = n_range(1, 24);
  for (const Case& c : cases) {
    const FamilyExpr f = parse(c.source);
    const auto floor = derivative_floor_check(f, ns, c.grid, 1e-2, serial());
    const auto value = value_bound_check(f, ns, c.zeta, 1e3);
    if (!floor.all_pass || !value.pass) continue;
    const auto marty = classify(marty_scan(f, c.grid, ns, serial()));
    const auto sd = classify(sd_family_scan(f, c.grid, ns, serial()));
    for (std::size_t i = 0; i < marty.size(); ++i)
      if (marty[i].verdict == Verdict::BoundedCandidate)
        EXPECT_NE(sd[i].verdict, Verdict::DivergentCandidate) << c.source << " at " << c.grid.point(i);
  }
}

}  // namespace
}  // namespace schwarzian_lab
