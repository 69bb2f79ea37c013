#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sdrkit/cashflow.hpp"
#include "sdrkit/decimal.hpp"
#include "sdrkit/error.hpp"
#include "sdrkit/rates.hpp"

namespace sdrkit {

enum class OptionKind { Pfi, Psc };

inline std::string_view to_string(OptionKind k) { return k == OptionKind::Pfi ? "PFI" : "PSC"; }

/// A procurement route costed as a series of positive cost outflows. Only
/// the public sector comparator may carry a separate risk adjustment.
struct ProcurementOption {
  std::string name;
  OptionKind kind = OptionKind::Pfi;
  CashFlowSeries series;
  std::optional<CashFlowSeries> risk_adjustment;

  /// Cost series the NPV is taken over: the base series plus any risk
  /// adjustment.
  CashFlowSeries costed_series() const {
    return risk_adjustment ? merge(series, *risk_adjustment) : series;
  }
};

inline void validate(const ProcurementOption& o) {
  if (o.kind == OptionKind::Pfi && o.risk_adjustment && !o.risk_adjustment->empty()) {
    throw InvalidParameter("PFI option '" + o.name + "' must not carry a risk adjustment");
  }
  if (o.risk_adjustment && o.risk_adjustment->currency() != o.series.currency()) {
    throw InvalidParameter("risk adjustment currency differs from option '" + o.name + "'");
  }
}

/// One line of a sensitivity table. The difference is always derived, never
/// stored independently.
class ComparisonRow {
 public:
  ComparisonRow(double rate, Money npv_pfi, Money npv_psc)
      : rate_(rate), npv_pfi_(std::move(npv_pfi)), npv_psc_(std::move(npv_psc)) {
    if (!std::isfinite(rate_) || rate_ < 0) throw InvalidParameter("rate must be finite and >= 0");
    difference_ = npv_psc_ - npv_pfi_;
  }

  double rate() const { return rate_; }
  const Money& npv_pfi() const { return npv_pfi_; }
  const Money& npv_psc() const { return npv_psc_; }
  /// npv_psc - npv_pfi; positive means the PFI route is cheaper.
  const Money& difference_in_favour_of_pfi() const { return difference_; }

  friend bool operator==(const ComparisonRow&, const ComparisonRow&) = default;

 private:
  double rate_;
  Money npv_pfi_;
  Money npv_psc_;
  Money difference_;
};

using ComparisonTable = std::vector<ComparisonRow>;

/// NPV of both options at each flat rate, rows in the order given.
inline ComparisonTable compare(const ProcurementOption& pfi, const ProcurementOption& psc, std::span<const double> rates,
                               Compounding compounding) {
  if (pfi.kind != OptionKind::Pfi) throw InvalidParameter("first option must be of kind PFI");
  if (psc.kind != OptionKind::Psc) throw InvalidParameter("second option must be of kind PSC");
  validate(pfi);
  validate(psc);
  if (pfi.series.currency() != psc.series.currency()) {
    throw InvalidParameter("currency mismatch: " + pfi.series.currency() + " vs " + psc.series.currency());
  }
  if (rates.empty()) throw InvalidParameter("at least one rate is required");

  const CashFlowSeries pfi_costs = pfi.costed_series();
  const CashFlowSeries psc_costs = psc.costed_series();
  ComparisonTable table;
  table.reserve(rates.size());
  for (double r : rates) {
    if (!std::isfinite(r) || r < 0) throw InvalidParameter("rates must be finite and >= 0");
    const auto schedule = RateSchedule::flat(r);
    table.emplace_back(r, npv(pfi_costs, schedule, compounding), npv(psc_costs, schedule, compounding));
  }
  return table;
}

enum class Selection { Pfi, Psc, Tie };

inline std::string_view to_string(Selection s) {
  switch (s) {
    case Selection::Pfi: return "PFI";
    case Selection::Psc: return "PSC";
    case Selection::Tie: return "tie";
  }
  return "?";
}

struct VfmVerdict {
  Selection selected = Selection::Tie;
  Money margin;

  friend bool operator==(const VfmVerdict&, const VfmVerdict&) = default;
};

/// Lower cost NPV wins; exact equality at four decimals is a tie.
inline VfmVerdict verdict(const ComparisonRow& row) {
  const Money& d = row.difference_in_favour_of_pfi();
  const auto units = d.amount.units();
  const Selection s = units > 0 ? Selection::Pfi : units < 0 ? Selection::Psc : Selection::Tie;
  return {s, {abs(d.amount), d.currency}};
}

/// Carlisle Hospital sensitivity table (GBP millions), rates descending.
inline ComparisonTable table1_carlisle() {
  const std::pair<double, std::pair<const char*, const char*>> rows[] = {
      {0.06, {"173.1", "174.3"}}, {0.055, {"186.7", "185.8"}}, {0.05, {"202.0", "198.8"}},
      {0.045, {"219.5", "213.9"}}, {0.04, {"239.3", "231.2"}}, {0.03, {"288.6", "275.0"}},
  };
  ComparisonTable table;
  for (const auto& [rate, npvs] : rows) {
    table.emplace_back(rate, Money{Fixed4::parse(npvs.first), "GBP"}, Money{Fixed4::parse(npvs.second), "GBP"});
  }
  return table;
}

struct BreakevenOptions {
  double tol = 1e-6;
  int max_iterations = 200;
};

/// Locates r in [low, high] where the PSC and PFI cost NPVs coincide, by
/// midpoint bisection on npv_psc(r) - npv_pfi(r).
inline double breakeven_rate(const ProcurementOption& pfi, const ProcurementOption& psc, std::pair<double, double> bracket,
                             Compounding compounding, BreakevenOptions options = {}) {
  if (pfi.kind != OptionKind::Pfi || psc.kind != OptionKind::Psc) throw InvalidParameter("expected one PFI and one PSC option");
  validate(pfi);
  validate(psc);
  if (pfi.series.currency() != psc.series.currency()) throw InvalidParameter("currency mismatch between options");
  if (!(options.tol > 0) || !std::isfinite(options.tol)) throw InvalidParameter("tol must be > 0");
  auto [low, high] = bracket;
  if (!std::isfinite(low) || !std::isfinite(high) || low < 0 || !(low < high)) {
    throw InvalidParameter("bracket must satisfy 0 <= low < high");
  }

  const CashFlowSeries pfi_costs = pfi.costed_series();
  const CashFlowSeries psc_costs = psc.costed_series();
  auto difference = [&](double r) {
    const auto s = RateSchedule::flat(r);
    return npv_unrounded(psc_costs, s, compounding) - npv_unrounded(pfi_costs, s, compounding);
  };
  // Half a Money unit: anything smaller rounds to a zero difference.
  constexpr long double resolution = 0.5L / Fixed4::kScale;

  long double d_low = difference(low);
  const long double d_high = difference(high);
  const bool both_zero = d_low == 0 && d_high == 0;
  const bool same_sign = d_low != 0 && d_high != 0 && (d_low > 0) == (d_high > 0);
  if (both_zero || same_sign) {
    throw NoSignChange("PSC-minus-PFI difference has the same sign at both bracket ends");
  }
  if (d_low == 0) return low;
  if (d_high == 0) return high;

  for (int i = 0; i < options.max_iterations; ++i) {
    const double mid = low + (high - low) / 2;
    const long double d_mid = difference(mid);
    if (std::fabs(d_mid) < resolution) return mid;
    if ((d_mid > 0) == (d_low > 0)) {
      low = mid;
      d_low = d_mid;
    } else {
      high = mid;
    }
    if (high - low <= options.tol) return low + (high - low) / 2;
  }
  throw NoConvergence("bisection did not converge in " + std::to_string(options.max_iterations) + " iterations");
}

/// Payments at t = 1..horizon with present value equal to `target` at the
/// given flat rate. All payments equal the rounded level payment except the
/// last, which absorbs the sub-unit rounding residual.
inline CashFlowSeries fit_annuity(const Money& target, double rate, int horizon, Compounding compounding) {
  if (horizon < 1) throw InvalidParameter("horizon must be >= 1");
  if (!std::isfinite(rate) || rate < 0) throw InvalidParameter("rate must be finite and >= 0");
  const auto schedule = RateSchedule::flat(rate);
  long double annuity_factor = 0.0L;
  for (int t = 1; t <= horizon; ++t) annuity_factor += discount_factor(schedule, t, compounding);

  const long double target_units = target.amount.units();
  const Fixed4 level = Fixed4::round_units(target_units / annuity_factor);
  const long double residual_units = target_units - static_cast<long double>(level.units()) * annuity_factor;
  const long double last_factor = discount_factor(schedule, horizon, compounding);
  const Fixed4 last = level + Fixed4::round_units(residual_units / last_factor);

  std::vector<CashFlowSeries::Entry> entries;
  entries.reserve(horizon);
  for (int t = 1; t <= horizon; ++t) entries.push_back({static_cast<double>(t), t == horizon ? last : level, {}});
  return CashFlowSeries(target.currency, std::move(entries));
}

/// Reconstructed Carlisle-like cost profiles: a 30-year PFI unitary charge
/// and a 20-year PSC profile, each fitted to the published 6% NPVs (GBP
/// millions). The real schedules were never published.
inline std::pair<ProcurementOption, ProcurementOption> carlisle_fitted(Compounding compounding = Compounding::DiscreteAnnual) {
  ProcurementOption pfi{"Carlisle PFI", OptionKind::Pfi,
                        fit_annuity({Fixed4::parse("173.1"), "GBP"}, 0.06, 30, compounding), std::nullopt};
  ProcurementOption psc{"Carlisle PSC", OptionKind::Psc,
                        fit_annuity({Fixed4::parse("174.3"), "GBP"}, 0.06, 20, compounding), std::nullopt};
  return {std::move(pfi), std::move(psc)};
}

}  // namespace sdrkit
