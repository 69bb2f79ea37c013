#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "sdrkit/decimal.hpp"
#include "sdrkit/error.hpp"
#include "sdrkit/rates.hpp"

namespace sdrkit {

enum class Compounding { DiscreteAnnual, Continuous };

inline std::string_view to_string(Compounding c) {
  return c == Compounding::Continuous ? "continuous" : "discrete";
}

inline Compounding parse_compounding(std::string_view s) {
  if (s == "discrete" || s == "discrete-annual") return Compounding::DiscreteAnnual;
  if (s == "continuous") return Compounding::Continuous;
  throw ParseError("unknown compounding mode '" + std::string(s) + "'");
}

/// Dated amounts for one procurement option. Entries are sorted by time;
/// equal times are allowed and simply add up.
class CashFlowSeries {
 public:
  struct Entry {
    double t = 0.0;  // years from valuation date
    Fixed4 amount;
    std::string label;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  CashFlowSeries() = default;

  CashFlowSeries(std::string currency, std::vector<Entry> entries)
      : currency_(std::move(currency)), entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const double t = entries_[i].t;
      if (!std::isfinite(t)) throw ValidationError("entry " + std::to_string(i) + ": t must be finite");
      if (t < 0) throw ValidationError("entry " + std::to_string(i) + ": t must be >= 0");
      if (i > 0 && t < entries_[i - 1].t) {
        throw ValidationError("entry " + std::to_string(i) + ": entries must be sorted non-decreasing by t");
      }
    }
  }

  const std::string& currency() const { return currency_; }
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// Undiscounted sum, exact.
  Money total() const {
    Fixed4 sum;
    for (const auto& e : entries_) sum += e.amount;
    return {sum, currency_};
  }

  /// Multiset union of two same-currency series, kept sorted (stable).
  friend CashFlowSeries merge(const CashFlowSeries& a, const CashFlowSeries& b) {
    if (a.currency_ != b.currency_) throw InvalidParameter("currency mismatch: " + a.currency_ + " vs " + b.currency_);
    std::vector<Entry> out;
    out.reserve(a.entries_.size() + b.entries_.size());
    std::merge(a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(), std::back_inserter(out),
               [](const Entry& x, const Entry& y) { return x.t < y.t; });
    return CashFlowSeries(a.currency_, std::move(out));
  }

  friend bool operator==(const CashFlowSeries&, const CashFlowSeries&) = default;

 private:
  std::string currency_ = "GBP";
  std::vector<Entry> entries_;
};

namespace detail {
// Exponent k such that the factor is exp(-k). Long double keeps products
// with large Money unit counts accurate.
inline long double discount_exponent(const RateSchedule& schedule, double t, Compounding c) {
  long double k = 0.0L;
  schedule.for_each_span(t, [&](double rate, double dt) {
    const long double r = rate;
    k += (c == Compounding::Continuous ? r : std::log1p(r)) * static_cast<long double>(dt);
  });
  return k;
}
}  // namespace detail

/// Discount factor for time t. Declining schedules accumulate segment by
/// segment (forward-rate reading).
inline double discount_factor(const RateSchedule& schedule, double t, Compounding compounding) {
  return static_cast<double>(std::exp(-detail::discount_exponent(schedule, t, compounding)));
}

namespace detail {
inline long double npv_units(const CashFlowSeries& series, const RateSchedule& schedule, Compounding compounding) {
  long double units = 0.0L;
  for (const auto& e : series.entries()) {
    units += static_cast<long double>(e.amount.units()) * std::exp(-discount_exponent(schedule, e.t, compounding));
  }
  return units;
}
}  // namespace detail

/// Net present value, rounded half-even to four decimals once at the end.
inline Money npv(const CashFlowSeries& series, const RateSchedule& schedule, Compounding compounding) {
  return {Fixed4::round_units(detail::npv_units(series, schedule, compounding)), series.currency()};
}

/// Same sum without the final rounding, in currency units. Used where a
/// continuous objective is needed (root finding).
inline long double npv_unrounded(const CashFlowSeries& series, const RateSchedule& schedule, Compounding compounding) {
  return detail::npv_units(series, schedule, compounding) / Fixed4::kScale;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep, std::size_t max_fields) {
  std::vector<std::string_view> out;
  while (out.size() + 1 < max_fields) {
    const auto pos = line.find(sep);
    if (pos == std::string_view::npos) break;
    out.push_back(line.substr(0, pos));
    line.remove_prefix(pos + 1);
  }
  out.push_back(line);
  return out;
}

/// Iterates non-blank, non-comment lines as (1-based line number, text).
template <class F>
void for_each_data_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    f(line_no, line);
  }
}

}  // namespace detail

/// Parses the `t,amount[,label]` CSV format. Syntax problems raise
/// ParseError with the line number; well-formed rows that break a series
/// invariant raise ValidationError.
inline CashFlowSeries parse_cashflow_csv(std::string_view text, std::string currency = "GBP") {
  bool have_header = false;
  bool with_label = false;
  std::vector<CashFlowSeries::Entry> entries;
  detail::for_each_data_line(text, [&](std::size_t line_no, std::string_view line) {
    if (!have_header) {
      if (line == "t,amount") {
        with_label = false;
      } else if (line == "t,amount,label") {
        with_label = true;
      } else {
        throw ParseError("expected header 't,amount' or 't,amount,label'", line_no);
      }
      have_header = true;
      return;
    }
    const auto fields = detail::split(line, ',', with_label ? 3 : 2);
    if (fields.size() < 2 || (!with_label && fields[1].find(',') != std::string_view::npos)) {
      throw ParseError("expected " + std::string(with_label ? "3" : "2") + " fields", line_no);
    }
    CashFlowSeries::Entry e;
    try {
      e.t = parse_double(detail::trim(fields[0]));
      e.amount = Fixed4::parse(detail::trim(fields[1]));
    } catch (const ParseError& err) {
      throw ParseError(err.what(), line_no);
    }
    if (with_label && fields.size() == 3) e.label = std::string(detail::trim(fields[2]));
    if (!std::isfinite(e.t)) throw ValidationError("line " + std::to_string(line_no) + ": t must be finite");
    if (e.t < 0) throw ValidationError("line " + std::to_string(line_no) + ": t must be >= 0");
    if (!entries.empty() && e.t < entries.back().t) {
      throw ValidationError("line " + std::to_string(line_no) + ": entries must be sorted non-decreasing by t");
    }
    entries.push_back(std::move(e));
  });
  if (!have_header) throw ParseError("missing header 't,amount'", 1);
  return CashFlowSeries(std::move(currency), std::move(entries));
}

inline std::string to_csv(const CashFlowSeries& series) {
  bool labels = std::any_of(series.entries().begin(), series.entries().end(),
                            [](const auto& e) { return !e.label.empty(); });
  std::string out = labels ? "t,amount,label\n" : "t,amount\n";
  for (const auto& e : series.entries()) {
    out += format_shortest(e.t) + "," + e.amount.to_string();
    if (labels) out += "," + e.label;
    out += "\n";
  }
  return out;
}

}  // namespace sdrkit
