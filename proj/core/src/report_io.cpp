#include <schwarzian_lab/report_io.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>

namespace schwarzian_lab {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const FieldValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_real(v);
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return csv_escape(v);
      },
      value);
}

nlohmann::ordered_json json_value(const FieldValue& value) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_real(v);
        }
        return v;
      },
      value);
}

nlohmann::ordered_json json_object(const Record& record) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const auto& [key, value] : record.fields) obj[key] = json_value(value);
  return obj;
}

}  // namespace

Record& Record::add_complex(const std::string& prefix, Complex value) {
  add(prefix + "_re", value.real());
  return add(prefix + "_im", value.imag());
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_records(std::ostream& os, const std::vector<Record>& records, OutputFormat format, bool single) {
  if (format == OutputFormat::Json) {
    if (single && records.size() == 1) {
      os << json_object(records.front()).dump(2) << '\n';
      return;
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : records) arr.push_back(json_object(r));
    os << arr.dump(2) << '\n';
    return;
  }

  if (records.empty()) return;
  const auto& header = records.front().fields;
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k].first;
  os << '\n';
  for (const auto& r : records) {
    for (std::size_t k = 0; k < r.fields.size(); ++k) os << (k ? "," : "") << csv_cell(r.fields[k].second);
    os << '\n';
  }
}

std::vector<Record> scan_records(const MartyGridReport& report, const std::vector<NormalityVerdict>& verdicts) {
  if (verdicts.size() != report.points.size())
    throw PreconditionViolation("scan_records: one verdict per grid point required");
  std::vector<Record> rows;
  rows.reserve(report.points.size());
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const PointReport& p = report.points[i];
    Record r;
    r.add("re", p.point.real())
        .add("im", p.point.imag())
        .add("sup_stat", p.sup_stat)
        .add("argmax_n", p.argmax_n)
        .add("growth_slope", p.growth_slope)
        .add("flags", p.flags.to_string())
        .add("verdict", to_string(verdicts[i].verdict));
    rows.push_back(std::move(r));
  }
  return rows;
}

Record identity_record(std::string_view identity, const IdentityReport& report) {
  Record r;
  r.add("identity", std::string(identity));
  r.add_complex("lhs", report.lhs);
  r.add_complex("rhs", report.rhs);
  r.add("abs_gap", report.abs_gap)
      .add("rel_gap", report.rel_gap)
      .add("tol_abs", report.tolerance_used.abs)
      .add("tol_rel", report.tolerance_used.rel)
      .add("pass", report.pass);
  return r;
}

Record local_bound_record(const LocalBoundReport& report) {
  Record r;
  r.add("n", report.n);
  r.add_complex("f_z0", report.value_at_z0);
  r.add("k_estimate", report.k_estimate)
      .add("bound_rhs", report.bound_rhs)
      .add("observed", report.observed)
      .add("pass", report.pass);
  return r;
}

Record hypotheses_record(const HypothesesReport& report) {
  Record r;
  r.add("value_bound_pass", report.value.pass)
      .add("max_abs_value", report.value.max_abs_value)
      .add("max_abs_value_n", report.value.argmax_n)
      .add("floor_pass", report.floor.all_pass)
      .add("min_abs_derivative", report.floor.global_min_abs_derivative)
      .add("epsilon", report.epsilon)
      .add("max_abs_d2", report.max_abs_d2)
      .add("max_abs_d3", report.max_abs_d3)
      .add("sd_bound", report.sd_bound)
      .add("observed_max_sd", report.observed_max_sd)
      .add("bound_holds", report.bound_holds)
      .add("pass", report.pass);
  return r;
}

}  // namespace schwarzian_lab
