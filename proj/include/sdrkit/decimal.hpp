#pragma once

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <system_error>

#include "sdrkit/error.hpp"

namespace sdrkit {

/// Fixed-point decimal with exactly four fractional digits, stored as a
/// signed count of 1e-4 units. Arithmetic is exact and overflow-checked.
class Fixed4 {
 public:
  static constexpr std::int64_t kScale = 10000;

  constexpr Fixed4() = default;

  static constexpr Fixed4 from_units(std::int64_t units) {
    Fixed4 f;
    f.units_ = units;
    return f;
  }

  static constexpr Fixed4 from_integer(std::int64_t whole) {
    if (whole > std::numeric_limits<std::int64_t>::max() / kScale ||
        whole < std::numeric_limits<std::int64_t>::min() / kScale) {
      throw InvalidParameter("Fixed4 overflow");
    }
    return from_units(whole * kScale);
  }

  /// Rounds a value expressed in units (1e-4) half-to-even. This is the one
  /// place where inexact intermediates become Money.
  static Fixed4 round_units(long double units) {
    if (!std::isfinite(units) || std::fabs(units) >= 9.2e18L) {
      throw InvalidParameter("Fixed4 overflow or non-finite value");
    }
    // The default floating-point environment rounds to nearest, ties to even.
    return from_units(static_cast<std::int64_t>(std::nearbyint(units)));
  }

  static Fixed4 round(long double value) {
    return round_units(value * static_cast<long double>(kScale));
  }

  /// Parses `[-+]digits[.digits]` with at most four fractional digits.
  static Fixed4 parse(std::string_view text) {
    std::string_view s = text;
    if (s.empty()) throw ParseError("empty decimal");
    bool negative = false;
    if (s.front() == '-' || s.front() == '+') {
      negative = s.front() == '-';
      s.remove_prefix(1);
    }
    const auto dot = s.find('.');
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw ParseError("malformed decimal '" + std::string(text) + "'");
    if (dot != std::string_view::npos && frac.empty() && whole.empty()) {
      throw ParseError("malformed decimal '" + std::string(text) + "'");
    }
    if (frac.size() > 4) {
      throw ParseError("more than 4 fractional digits in '" + std::string(text) + "'");
    }
    std::int64_t units = 0;
    auto accumulate = [&](std::string_view digits) {
      for (char c : digits) {
        if (c < '0' || c > '9') throw ParseError("malformed decimal '" + std::string(text) + "'");
        if (__builtin_mul_overflow(units, 10, &units) || __builtin_add_overflow(units, c - '0', &units)) {
          throw ParseError("decimal out of range '" + std::string(text) + "'");
        }
      }
    };
    accumulate(whole);
    accumulate(frac);
    for (std::size_t i = frac.size(); i < 4; ++i) {
      if (__builtin_mul_overflow(units, 10, &units)) {
        throw ParseError("decimal out of range '" + std::string(text) + "'");
      }
    }
    return from_units(negative ? -units : units);
  }

  constexpr std::int64_t units() const { return units_; }
  double to_double() const { return static_cast<double>(units_) / kScale; }
  long double to_long_double() const { return static_cast<long double>(units_) / kScale; }

  /// Always four fractional digits, '.' separator, leading '-' on negatives.
  std::string to_string() const {
    const bool negative = units_ < 0;
    // Magnitude via unsigned arithmetic so INT64_MIN is representable.
    const std::uint64_t mag = negative ? 0 - static_cast<std::uint64_t>(units_) : static_cast<std::uint64_t>(units_);
    std::string frac = std::to_string(mag % kScale);
    frac.insert(0, 4 - frac.size(), '0');
    return (negative ? "-" : "") + std::to_string(mag / kScale) + "." + frac;
  }

  friend Fixed4 operator+(Fixed4 a, Fixed4 b) {
    std::int64_t r;
    if (__builtin_add_overflow(a.units_, b.units_, &r)) throw InvalidParameter("Fixed4 overflow");
    return from_units(r);
  }
  friend Fixed4 operator-(Fixed4 a, Fixed4 b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a.units_, b.units_, &r)) throw InvalidParameter("Fixed4 overflow");
    return from_units(r);
  }
  friend Fixed4 operator-(Fixed4 a) { return Fixed4{} - a; }
  Fixed4& operator+=(Fixed4 b) { return *this = *this + b; }
  Fixed4& operator-=(Fixed4 b) { return *this = *this - b; }

  friend constexpr auto operator<=>(Fixed4, Fixed4) = default;

 private:
  std::int64_t units_ = 0;
};

inline Fixed4 abs(Fixed4 f) { return f.units() < 0 ? -f : f; }

/// A fixed-point amount tagged with a currency code. Mixed-currency
/// arithmetic throws.
struct Money {
  Fixed4 amount;
  std::string currency = "GBP";

  friend bool operator==(const Money&, const Money&) = default;
};

namespace detail {
inline void require_same_currency(const Money& a, const Money& b) {
  if (a.currency != b.currency) {
    throw InvalidParameter("currency mismatch: " + a.currency + " vs " + b.currency);
  }
}
}  // namespace detail

inline Money operator+(const Money& a, const Money& b) {
  detail::require_same_currency(a, b);
  return {a.amount + b.amount, a.currency};
}
inline Money operator-(const Money& a, const Money& b) {
  detail::require_same_currency(a, b);
  return {a.amount - b.amount, a.currency};
}

/// Locale-independent fixed notation with `precision` fractional digits.
inline std::string format_fixed(double value, int precision) {
  char buf[128];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, precision);
  if (ec != std::errc{}) throw InvalidParameter("value not representable");
  std::string out(buf, end);
  if (out.starts_with("-") && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

/// Shortest representation that round-trips; never exponent notation for
/// the magnitudes used as rates.
inline std::string format_shortest(double value) {
  char buf[128];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (ec != std::errc{}) throw InvalidParameter("value not representable");
  return std::string(buf, end);
}

/// Strict, locale-independent parse of a whole token as a double.
inline double parse_double(std::string_view text) {
  std::string_view s = text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("malformed number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace sdrkit
