#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sdrkit/decimal.hpp"
#include "sdrkit/error.hpp"

namespace sdrkit {

using Date = std::chrono::year_month_day;

/// Strict ISO-8601 calendar date, YYYY-MM-DD.
inline Date parse_date(std::string_view s) {
  auto digits = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (s[i] < '0' || s[i] > '9') throw ParseError("malformed date '" + std::string(s) + "'");
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') throw ParseError("malformed date '" + std::string(s) + "'");
  const Date d{std::chrono::year{digits(0, 4)}, std::chrono::month{static_cast<unsigned>(digits(5, 2))},
               std::chrono::day{static_cast<unsigned>(digits(8, 2))}};
  if (!d.ok()) throw ParseError("invalid calendar date '" + std::string(s) + "'");
  return d;
}

inline std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

enum class BalanceSheet { On, Off };
enum class Basis { Cash, Accrual };
enum class Scope { OnBalanceOnly, IncludeOffBalance };

inline BalanceSheet parse_balance_sheet(std::string_view s) {
  if (s == "on") return BalanceSheet::On;
  if (s == "off") return BalanceSheet::Off;
  throw ParseError("balance_sheet must be 'on' or 'off', got '" + std::string(s) + "'");
}
inline Basis parse_basis(std::string_view s) {
  if (s == "cash") return Basis::Cash;
  if (s == "accrual") return Basis::Accrual;
  throw ParseError("basis must be 'cash' or 'accrual', got '" + std::string(s) + "'");
}
inline Scope parse_scope(std::string_view s) {
  if (s == "on_balance_only") return Scope::OnBalanceOnly;
  if (s == "include_off_balance") return Scope::IncludeOffBalance;
  throw ParseError("scope must be 'on_balance_only' or 'include_off_balance', got '" + std::string(s) + "'");
}
inline std::string_view to_string(BalanceSheet b) { return b == BalanceSheet::On ? "on" : "off"; }

struct Payment {
  Date date;
  Fixed4 amount;

  friend bool operator==(const Payment&, const Payment&) = default;
};

/// A PPP liability or guarantee. Payments are dated on or after incurrence,
/// in order, and never exceed the outstanding amount.
struct LedgerEntry {
  std::string id;
  Fixed4 amount;
  Date incurred;
  BalanceSheet balance_sheet = BalanceSheet::On;
  bool contingent = false;
  std::vector<Payment> payments;

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

inline void validate(const LedgerEntry& e) {
  if (e.id.empty()) throw ValidationError("ledger entry id must not be empty");
  if (e.amount < Fixed4{}) throw ValidationError("entry '" + e.id + "': amount must be >= 0");
  Fixed4 paid;
  Date previous = e.incurred;
  for (const auto& p : e.payments) {
    if (p.amount < Fixed4{}) throw ValidationError("entry '" + e.id + "': payment amounts must be >= 0");
    if (p.date < previous) throw ValidationError("entry '" + e.id + "': payment dates must be non-decreasing and not before incurrence");
    if (p.amount > e.amount - paid) throw ValidationError("entry '" + e.id + "': payment exceeds remaining unpaid amount");
    paid += p.amount;
    previous = p.date;
  }
}

/// Immutable register of liabilities in one currency. `with_entry` returns
/// a new register.
class DebtRegister {
 public:
  explicit DebtRegister(std::string currency = "GBP", std::vector<LedgerEntry> entries = {})
      : currency_(std::move(currency)), entries_(std::move(entries)) {
    std::set<std::string> ids;
    for (const auto& e : entries_) {
      validate(e);
      if (!ids.insert(e.id).second) throw ValidationError("duplicate ledger entry id '" + e.id + "'");
    }
  }

  [[nodiscard]] DebtRegister with_entry(LedgerEntry entry) const {
    auto entries = entries_;
    entries.push_back(std::move(entry));
    return DebtRegister(currency_, std::move(entries));
  }

  const std::string& currency() const { return currency_; }
  const std::vector<LedgerEntry>& entries() const { return entries_; }

  friend bool operator==(const DebtRegister&, const DebtRegister&) = default;

 private:
  std::string currency_;
  std::vector<LedgerEntry> entries_;
};

namespace detail {

inline Fixed4 recognized(const LedgerEntry& e, Basis basis, const Date& as_of) {
  Fixed4 paid;
  bool any_payment = false;
  for (const auto& p : e.payments) {
    if (p.date <= as_of) {
      paid += p.amount;
      any_payment = true;
    }
  }
  // A contingent guarantee only counts once a payment evidences the trigger.
  if (e.contingent && !any_payment) return {};
  if (basis == Basis::Cash) return paid;
  return e.incurred <= as_of ? e.amount : Fixed4{};
}

inline bool in_scope(const LedgerEntry& e, Scope scope) {
  return scope == Scope::IncludeOffBalance || e.balance_sheet == BalanceSheet::On;
}

}  // namespace detail

/// Liabilities recognized by `as_of`: full incurred amounts on accrual,
/// payments made on cash.
inline Money recognized_liabilities(const DebtRegister& reg, Basis basis, const Date& as_of,
                                    Scope scope = Scope::IncludeOffBalance) {
  Fixed4 sum;
  for (const auto& e : reg.entries()) {
    if (detail::in_scope(e, scope)) sum += detail::recognized(e, basis, as_of);
  }
  return {sum, reg.currency()};
}

struct GdpObservation {
  Date date;
  Money gdp;
};

/// Recognized liabilities within scope over GDP. GDP must be observed in the
/// same calendar year as `as_of`.
inline double debt_to_gdp(const DebtRegister& reg, const GdpObservation& gdp, Scope scope, Basis basis, const Date& as_of) {
  if (gdp.gdp.amount <= Fixed4{}) throw InvalidParameter("gdp must be > 0");
  if (gdp.gdp.currency != reg.currency()) throw InvalidParameter("gdp currency differs from register currency");
  if (gdp.date.year() != as_of.year()) {
    throw InvalidParameter("gdp observed in " + format_date(gdp.date) + " but as_of is " + format_date(as_of) +
                           "; periods must share a calendar year");
  }
  const Money debt = recognized_liabilities(reg, basis, as_of, scope);
  return static_cast<double>(static_cast<long double>(debt.amount.units()) / static_cast<long double>(gdp.gdp.amount.units()));
}

/// Reported UK PPP debt-to-GDP (central government PPPs only).
inline constexpr double kUkReportedPppDebtToGdp = 0.015;
/// Keen's danger-zone threshold for total debt-to-GDP.
inline constexpr double kKeenDangerThreshold = 1.50;

enum class DangerStatus { Clear, Alert };

inline std::string_view to_string(DangerStatus a) { return a == DangerStatus::Alert ? "alert" : "clear"; }

/// Strictly above the threshold raises the alert.
inline DangerStatus danger_alert(double ratio, double threshold = kKeenDangerThreshold) {
  if (!std::isfinite(ratio) || ratio < 0) throw InvalidParameter("ratio must be finite and >= 0");
  if (!std::isfinite(threshold) || threshold < 0) throw InvalidParameter("threshold must be finite and >= 0");
  return ratio > threshold ? DangerStatus::Alert : DangerStatus::Clear;
}

}  // namespace sdrkit
