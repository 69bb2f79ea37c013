#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "sdrkit/appraisal.hpp"
#include "sdrkit/decimal.hpp"
#include "sdrkit/error.hpp"
#include "sdrkit/serialize.hpp"

namespace sdrkit {

enum class ReportFormat { Csv, Table };

inline ReportFormat parse_report_format(std::string_view s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "table") return ReportFormat::Table;
  throw ParseError("format must be 'csv' or 'table', got '" + std::string(s) + "'");
}

struct ReportOptions {
  /// Table format prints amount / unit_divisor. The default leaves amounts
  /// as stored (the Carlisle figures are already in millions).
  double unit_divisor = 1.0;
};

namespace detail {

inline std::string trim_zeros(std::string s) {
  if (s.find('.') == std::string::npos) return s;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

inline std::string percent_label(double rate) { return trim_zeros(format_fixed(rate * 100.0, 6)); }

// One decimal, half-even, '-' prefix on negatives, never "-0.0".
inline std::string one_decimal(const Fixed4& amount, double divisor) {
  const long double value = static_cast<long double>(amount.units()) / (Fixed4::kScale * static_cast<long double>(divisor));
  const long long tenths = static_cast<long long>(std::nearbyint(value * 10.0L));
  const unsigned long long mag = tenths < 0 ? 0ULL - static_cast<unsigned long long>(tenths) : static_cast<unsigned long long>(tenths);
  return (tenths < 0 ? "-" : "") + std::to_string(mag / 10) + "." + std::to_string(mag % 10);
}

}  // namespace detail

inline std::string render_report(const ComparisonTable& table, ReportFormat format, ReportOptions options = {}) {
  if (table.empty()) throw InvalidParameter("cannot render an empty comparison table");
  if (!std::isfinite(options.unit_divisor) || options.unit_divisor <= 0) throw InvalidParameter("unit divisor must be > 0");

  if (format == ReportFormat::Csv) {
    std::string out(kComparisonCsvHeader);
    out += '\n';
    for (const auto& r : table) {
      out += format_shortest(r.rate()) + "," + r.npv_pfi().amount.to_string() + "," + r.npv_psc().amount.to_string() + "," +
             r.difference_in_favour_of_pfi().amount.to_string() + "\n";
    }
    return out;
  }

  std::vector<std::array<std::string, 4>> cells;
  for (const auto& r : table) {
    cells.push_back({detail::percent_label(r.rate()), detail::one_decimal(r.npv_pfi().amount, options.unit_divisor),
                     detail::one_decimal(r.npv_psc().amount, options.unit_divisor),
                     detail::one_decimal(r.difference_in_favour_of_pfi().amount, options.unit_divisor)});
  }
  // Left-aligned to the widest data cell; the last column is not padded.
  std::array<std::size_t, 4> width{};
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out = "Discount Rate (%) | PFI | PSC | Difference in Favour of PFI\n";
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < 4; ++c) {
      out += row[c];
      if (c < 3) out += std::string(width[c] - row[c].size(), ' ') + " | ";
    }
    out += '\n';
  }
  return out;
}

}  // namespace sdrkit
