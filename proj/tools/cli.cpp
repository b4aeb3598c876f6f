#include "cli.hpp"

#include <schwarzian_lab/catalog.hpp>
#include <schwarzian_lab/expr.hpp>
#include <schwarzian_lab/probe.hpp>
#include <schwarzian_lab/report_io.hpp>
#include <schwarzian_lab/schwarzian.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

namespace schwarzian_lab::cli {

namespace {

/// Command-line state shared by all subcommands; each subcommand binds the
/// subset it needs.
struct RunConfig {
  std::vector<std::string> families;
  std::vector<std::string> catalog;
  double n = 1.0;
  std::string z = "0";
  int n_min = 1;
  int n_max = 64;
  std::string grid = "-1,1,-1,1,41,41";
  double radius = 0.05;
  int samples = 9;
  std::optional<std::uint64_t> seed;
  double tol_abs = 1e-10;
  double tol_rel = 1e-8;
  double slope_threshold = 0.5;
  double decay_threshold = 0.1;
  double cap = 1e6;
  std::string out_path;
  std::string format = "csv";
  unsigned workers = 0;
  std::string mobius;
  std::string phi;
  std::string omitted = "0";
  std::string z0 = "0";
  int segment_samples = 256;
  double epsilon = 0.0;
  std::string zeta = "0";
  double value_bound = 0.0;
};

/// Invalid option values or combinations, detected before any computation.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParsedFamily {
  std::string source;
  FamilyExpr expr;
};

std::vector<ParsedFamily> resolve_families(const RunConfig& cfg, std::size_t required) {
  if (!cfg.families.empty() && !cfg.catalog.empty())
    throw UsageError("use either --family or --catalog, not both");
  std::vector<std::string> sources;
  if (!cfg.catalog.empty()) {
    for (const auto& name : cfg.catalog) {
      const auto src = catalog_family(name);
      if (!src) throw UsageError("unknown catalog family '" + name + "'");
      sources.emplace_back(*src);
    }
  } else {
    sources = cfg.families;
  }
  if (sources.size() != required)
    throw UsageError("this command needs exactly " + std::to_string(required) + " famil" +
                     (required == 1 ? "y" : "ies") + " (--family or --catalog)");
  std::vector<ParsedFamily> out;
  for (auto& s : sources) out.push_back({s, parse(s)});
  return out;
}

GridSpec resolve_grid(const RunConfig& cfg) {
  std::vector<double> values;
  std::string_view text = cfg.grid;
  while (true) {
    const std::size_t comma = text.find(',');
    const std::string_view piece = text.substr(0, comma);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (ec != std::errc() || ptr != piece.data() + piece.size())
      throw UsageError("--grid expects re0,re1,im0,im1,nx,ny; bad field '" + std::string(piece) + "'");
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (values.size() != 6) throw UsageError("--grid expects six comma-separated fields re0,re1,im0,im1,nx,ny");
  if (values[4] != std::floor(values[4]) || values[5] != std::floor(values[5]))
    throw UsageError("--grid nx and ny must be integers");
  GridSpec grid;
  grid.re_min = values[0];
  grid.re_max = values[1];
  grid.im_min = values[2];
  grid.im_max = values[3];
  grid.nx = static_cast<int>(values[4]);
  grid.ny = static_cast<int>(values[5]);
  grid.neighborhood_radius = cfg.radius;
  grid.neighborhood_samples = cfg.samples;
  try {
    grid.validate();
  } catch (const PreconditionViolation& e) {
    throw UsageError(e.what());
  }
  return grid;
}

std::vector<int> resolve_n_values(const RunConfig& cfg) {
  if (cfg.n_min < 1 || cfg.n_min > cfg.n_max) throw UsageError("--n-min/--n-max must satisfy 1 <= n-min <= n-max");
  return n_range(cfg.n_min, cfg.n_max);
}

std::uint64_t resolve_seed(const RunConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("SCHWARZIAN_LAB_SEED"); env && *env) {
    std::uint64_t value = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw UsageError("SCHWARZIAN_LAB_SEED must be an unsigned integer");
    return value;
  }
  return 0;
}

ScanOptions resolve_scan_options(const RunConfig& cfg) {
  ScanOptions options;
  options.seed = resolve_seed(cfg);
  options.workers = cfg.workers;
  return options;
}

ClassifyThresholds resolve_thresholds(const RunConfig& cfg) {
  if (!(cfg.cap > 0.0)) throw UsageError("--cap must be positive");
  return {cfg.slope_threshold, cfg.decay_threshold, cfg.cap};
}

Tolerance resolve_tolerance(const RunConfig& cfg) {
  if (!(cfg.tol_abs >= 0.0) || !(cfg.tol_rel >= 0.0)) throw UsageError("tolerances must be nonnegative");
  return {cfg.tol_abs, cfg.tol_rel};
}

OutputFormat resolve_format(const RunConfig& cfg) {
  return cfg.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
}

/// Emits to --out (or stdout). Returns false on I/O failure.
bool emit(const RunConfig& cfg, std::ostream& out, std::ostream& err, const std::vector<Record>& records,
          bool single) {
  if (cfg.out_path.empty()) {
    write_records(out, records, resolve_format(cfg), single);
    out.flush();
    return static_cast<bool>(out);
  }
  std::ofstream file(cfg.out_path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot open output file '" << cfg.out_path << "'\n";
    return false;
  }
  write_records(file, records, resolve_format(cfg), single);
  file.flush();
  if (!file) {
    err << "error: failed writing '" << cfg.out_path << "'\n";
    return false;
  }
  return true;
}

int finish(const RunConfig& cfg, std::ostream& out, std::ostream& err, const std::vector<Record>& records,
           bool single, bool pass) {
  if (!emit(cfg, out, err, records, single)) return kIoError;
  return pass ? kSuccess : kCheckFailed;
}

void show_span(std::ostream& err, const std::string& source, std::size_t offset, std::size_t length) {
  if (source.empty()) return;
  err << "  " << source << "\n  " << std::string(std::min(offset, source.size()), ' ')
      << std::string(std::max<std::size_t>(length, 1), '^') << '\n';
}

// ---------------------------------------------------------------------------

int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto families = resolve_families(cfg, 1);
  const Complex z = parse_complex(cfg.z);
  const ComplexJet3 j = eval_jet(families[0].expr, cfg.n, z);

  Record r;
  r.add("n", cfg.n);
  r.add_complex("z", z);
  r.add_complex("v", j.v);
  r.add_complex("d1", j.d1);
  r.add_complex("d2", j.d2);
  r.add_complex("d3", j.d3);
  try {
    r.add_complex("sd", schwarzian(j));
    r.add("sd_error", "");
  } catch (const CriticalPointError&) {
    r.add_complex("sd", Complex(std::nan(""), std::nan("")));
    r.add("sd_error", "CriticalPointError");
  } catch (const JetError& e) {
    r.add_complex("sd", Complex(std::nan(""), std::nan("")));
    r.add("sd_error", to_string(e.fault()));
  }
  r.add("spherical", spherical_derivative(j));
  return finish(cfg, out, err, {r}, true, true);
}

int cmd_identity(const std::string& kind, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Complex z = parse_complex(cfg.z);
  const Tolerance tol = resolve_tolerance(cfg);
  IdentityReport report;

  if (kind == "mobius-invariance") {
    const auto f = resolve_families(cfg, 1);
    if (cfg.mobius.empty()) throw UsageError("mobius-invariance needs --mobius a,b,c,d");
    const Mobius m = MobiusTemplate::parse(cfg.mobius).instantiate(cfg.n);
    report = check_mobius_invariance(f[0].expr, cfg.n, m, z, tol);
  } else if (kind == "composition") {
    const auto fg = resolve_families(cfg, 2);
    report = check_composition_law(fg[0].expr, fg[1].expr, cfg.n, z, tol);
  } else if (kind == "reciprocal") {
    const auto f = resolve_families(cfg, 1);
    report = check_reciprocal(f[0].expr, cfg.n, parse_complex(cfg.omitted), z, tol);
  } else {
    const auto fg = resolve_families(cfg, 2);
    std::string phi_text = cfg.phi;
    if (phi_text.empty() && cfg.catalog.size() == 2) {
      // example4-f + example4-g -> conjugator of "example4"
      const std::string pair = cfg.catalog[0].substr(0, cfg.catalog[0].rfind('-'));
      if (cfg.catalog[1].rfind(pair, 0) == 0)
        if (auto c = catalog_conjugator(pair)) phi_text = std::string(*c);
    }
    if (phi_text.empty()) throw UsageError("conjugation needs --phi a,b,c,d");
    const Mobius phi = MobiusTemplate::parse(phi_text).instantiate(cfg.n);
    report = check_conjugation(fg[0].expr, fg[1].expr, phi, cfg.n, z, tol);
  }
  return finish(cfg, out, err, {identity_record(kind, report)}, true, report.pass);
}

int cmd_scan(bool sd, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto f = resolve_families(cfg, 1);
  const GridSpec grid = resolve_grid(cfg);
  const auto n_values = resolve_n_values(cfg);
  const ClassifyThresholds thresholds = resolve_thresholds(cfg);
  const ScanOptions options = resolve_scan_options(cfg);
  if (grid.radius_too_large())
    err << "warning: neighborhood radius spans four or more grid cells\n";

  const MartyGridReport report =
      sd ? sd_family_scan(f[0].expr, grid, n_values, options) : marty_scan(f[0].expr, grid, n_values, options);
  return finish(cfg, out, err, scan_records(report, classify(report, thresholds)), false, true);
}

int cmd_bound(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto f = resolve_families(cfg, 1);
  const auto n_values = resolve_n_values(cfg);
  if (cfg.segment_samples < 2) throw UsageError("--segment-samples must be at least 2");
  const auto reports =
      local_bound_estimate(f[0].expr, n_values, parse_complex(cfg.z0), parse_complex(cfg.z), cfg.segment_samples);
  std::vector<Record> records;
  bool pass = true;
  for (const auto& r : reports) {
    records.push_back(local_bound_record(r));
    pass = pass && r.pass;
  }
  return finish(cfg, out, err, records, false, pass);
}

int cmd_hypotheses(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto f = resolve_families(cfg, 1);
  const auto n_values = resolve_n_values(cfg);
  const GridSpec grid = resolve_grid(cfg);
  if (!(cfg.epsilon > 0.0)) throw UsageError("--epsilon must be positive");
  if (!std::isfinite(cfg.value_bound)) throw UsageError("--value-bound must be finite");
  const HypothesesReport report = check_hypotheses(f[0].expr, n_values, grid, cfg.epsilon, parse_complex(cfg.zeta),
                                                   cfg.value_bound, resolve_scan_options(cfg));
  return finish(cfg, out, err, {hypotheses_record(report)}, true, report.pass);
}

// ---------------------------------------------------------------------------

void add_family_options(CLI::App* app, RunConfig& cfg) {
  app->add_option("--family", cfg.families, "Family f_n(z) in the expression language (repeatable)");
  app->add_option("--catalog", cfg.catalog, "Built-in family name (repeatable)")
      ->check(CLI::IsMember({"example1", "example2", "example3", "example4-f", "example4-g", "example7-f",
                             "example7-g"}));
}

void add_output_options(CLI::App* app, RunConfig& cfg) {
  app->add_option("--out", cfg.out_path, "Write output to this file instead of stdout");
  app->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_n_range(CLI::App* app, RunConfig& cfg) {
  app->add_option("--n-min", cfg.n_min, "First family index (default 1)");
  app->add_option("--n-max", cfg.n_max, "Last family index (default 64)");
}

void add_grid_options(CLI::App* app, RunConfig& cfg) {
  app->add_option("--grid", cfg.grid, "re0,re1,im0,im1,nx,ny (default -1,1,-1,1,41,41)");
  app->add_option("--radius", cfg.radius, "Neighborhood radius (default 0.05)");
  app->add_option("--samples", cfg.samples, "Neighborhood samples incl. center (default 9)");
  app->add_option("--seed", cfg.seed, "Sampling seed (fallback: SCHWARZIAN_LAB_SEED, then 0)");
  app->add_option("--workers", cfg.workers, "Worker threads (default: available parallelism)");
}

std::ostream& report_parse_error(std::ostream& err, const ParseError& e, const std::string& source) {
  err << "error: " << e.what() << '\n';
  show_span(err, source, e.position(), 1);
  return err;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Schwarzian and spherical derivatives of one-parameter families; normality scans"};
  app.name(args.empty() ? "schwarzian-lab" : args.front());
  app.require_subcommand(1);

  auto* eval = app.add_subcommand("eval", "Jet, Schwarzian and spherical derivative of f_n at z");
  add_family_options(eval, cfg);
  eval->add_option("--n", cfg.n, "Family index");
  eval->add_option("--z", cfg.z, "Point, e.g. 1+0i (use --z=-1+2i for negative real parts)");
  add_output_options(eval, cfg);

  auto* identity = app.add_subcommand("identity", "Numeric check of a Schwarzian identity");
  identity->require_subcommand(1);
  std::string identity_kind;
  const std::pair<const char*, const char*> identity_kinds[] = {
      {"mobius-invariance", "S(T o f) = S(f) for a Mobius map T"},
      {"composition", "S(g o f) = (S(g) o f) f'^2 + S(f), families given as f then g"},
      {"reciprocal", "S(1/(f - w)) = S(f) for the omitted value w"},
      {"conjugation", "(S(g) o phi) phi'^2 = S(f) where phi o f = g o phi, families given as f then g"},
  };
  for (const auto& [kind, description] : identity_kinds) {
    auto* sub = identity->add_subcommand(kind, description);
    add_family_options(sub, cfg);
    sub->add_option("--n", cfg.n, "Family index");
    sub->add_option("--z", cfg.z, "Sample point");
    sub->add_option("--tol-abs", cfg.tol_abs, "Absolute tolerance (default 1e-10)");
    sub->add_option("--tol-rel", cfg.tol_rel, "Relative tolerance (default 1e-8)");
    add_output_options(sub, cfg);
    sub->callback([&identity_kind, kind] { identity_kind = kind; });
  }
  identity->get_subcommand("mobius-invariance")->add_option("--mobius", cfg.mobius, "a,b,c,d as expressions in n");
  identity->get_subcommand("reciprocal")->add_option("--omitted", cfg.omitted, "Value omitted by f (default 0)");
  identity->get_subcommand("conjugation")->add_option("--phi", cfg.phi, "Conjugating map a,b,c,d in n");

  CLI::App* scans[2] = {app.add_subcommand("scan-marty", "Marty statistic f_n^# over a grid"),
                        app.add_subcommand("scan-sd", "Spherical derivative of the SD family over a grid")};
  for (auto* scan : scans) {
    add_family_options(scan, cfg);
    add_n_range(scan, cfg);
    add_grid_options(scan, cfg);
    scan->add_option("--slope-threshold", cfg.slope_threshold, "Divergent when growth slope >= this (0.5)");
    scan->add_option("--decay-threshold", cfg.decay_threshold, "Bounded when growth slope <= this (0.1)");
    scan->add_option("--cap", cfg.cap, "Divergent when sup statistic >= this (1e6)");
    add_output_options(scan, cfg);
  }

  auto* bound = app.add_subcommand("bound", "Mean-value bound |f(z)-f(z0)| <= K|z-z0| along a segment");
  add_family_options(bound, cfg);
  add_n_range(bound, cfg);
  bound->add_option("--z0", cfg.z0, "Segment start (default 0)");
  bound->add_option("--z", cfg.z, "Segment end");
  bound->add_option("--segment-samples", cfg.segment_samples, "Samples along the segment (default 256)");
  add_output_options(bound, cfg);

  auto* hyp = app.add_subcommand("hypotheses", "Value bound, derivative floor and derived SD bound");
  add_family_options(hyp, cfg);
  add_n_range(hyp, cfg);
  add_grid_options(hyp, cfg);
  hyp->add_option("--epsilon", cfg.epsilon, "Derivative floor epsilon")->required();
  hyp->add_option("--zeta", cfg.zeta, "Point for the value bound (default 0)");
  hyp->add_option("--value-bound", cfg.value_bound, "L in max_n |f_n(zeta)| <= L")->required();
  add_output_options(hyp, cfg);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("schwarzian-lab");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kParseError;
  }

  std::string current_source;
  try {
    if (eval->parsed()) {
      if (!cfg.families.empty()) current_source = cfg.families.front();
      return cmd_eval(cfg, out, err);
    }
    if (identity->parsed()) return cmd_identity(identity_kind, cfg, out, err);
    if (scans[0]->parsed()) return cmd_scan(false, cfg, out, err);
    if (scans[1]->parsed()) return cmd_scan(true, cfg, out, err);
    if (bound->parsed()) return cmd_bound(cfg, out, err);
    if (hyp->parsed()) return cmd_hypotheses(cfg, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const ParseError& e) {
    report_parse_error(err, e, cfg.families.size() == 1 ? cfg.families.front() : std::string());
    return kParseError;
  } catch (const PreconditionViolation& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const DegenerateMobius& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const ConjugacyViolated& e) {
    err << "check failed: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const EvalError& e) {
    err << "evaluation error: " << to_string(e.fault()) << ": " << e.what() << '\n';
    show_span(err, current_source, e.span().offset, e.span().length);
    return kEvaluationError;
  } catch (const CriticalPointError& e) {
    err << "evaluation error: CriticalPointError: " << e.what() << '\n';
    return kEvaluationError;
  } catch (const PoleOfMobius& e) {
    err << "evaluation error: PoleOfMobius: " << e.what() << '\n';
    return kEvaluationError;
  } catch (const GuardViolation& e) {
    err << "evaluation error: GuardViolation: " << e.what() << '\n';
    return kEvaluationError;
  } catch (const SegmentEvaluationError& e) {
    err << "evaluation error: SegmentEvaluationError: " << e.what() << '\n';
    return kEvaluationError;
  } catch (const JetError& e) {
    err << "evaluation error: " << to_string(e.fault()) << ": " << e.what() << '\n';
    return kEvaluationError;
  }
  return kParseError;
}

}  // namespace schwarzian_lab::cli
