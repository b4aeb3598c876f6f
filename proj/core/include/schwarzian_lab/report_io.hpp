#pragma once

#include <schwarzian_lab/probe.hpp>
#include <schwarzian_lab/schwarzian.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace schwarzian_lab {

using FieldValue = std::variant<double, std::int64_t, bool, std::string>;

/// One flat output row; field order is the column order.
struct Record {
  std::vector<std::pair<std::string, FieldValue>> fields;

  Record& add(std::string key, double value) { return push(std::move(key), value); }
  Record& add(std::string key, int value) { return push(std::move(key), std::int64_t{value}); }
  Record& add(std::string key, std::int64_t value) { return push(std::move(key), value); }
  Record& add(std::string key, bool value) { return push(std::move(key), value); }
  Record& add(std::string key, std::string value) { return push(std::move(key), std::move(value)); }
  Record& add(std::string key, const char* value) { return push(std::move(key), std::string(value)); }
  /// prefix_re, prefix_im
  Record& add_complex(const std::string& prefix, Complex value);

 private:
  Record& push(std::string key, FieldValue value) {
    fields.emplace_back(std::move(key), std::move(value));
    return *this;
  }
};

enum class OutputFormat { Csv, Json };

/// "%.17g", with inf, -inf and nan spelled out.
std::string format_real(double x);

/// CSV: header from the first record, one line per record.
/// JSON: an array of flat objects, or a single object when `single` is set.
/// Non-finite reals become the strings "inf", "-inf", "nan" in JSON.
void write_records(std::ostream& os, const std::vector<Record>& records, OutputFormat format, bool single = false);

/// Rows with columns re,im,sup_stat,argmax_n,growth_slope,flags,verdict.
std::vector<Record> scan_records(const MartyGridReport& report, const std::vector<NormalityVerdict>& verdicts);

Record identity_record(std::string_view identity, const IdentityReport& report);
Record local_bound_record(const LocalBoundReport& report);
Record hypotheses_record(const HypothesesReport& report);

}  // namespace schwarzian_lab
