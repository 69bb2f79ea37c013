#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdrkit/error.hpp"

namespace sdrkit {

/// How a discount rate was arrived at.
enum class RateMethod { Soc, Stpr, MarketDriven };

inline std::string_view to_string(RateMethod m) {
  switch (m) {
    case RateMethod::Soc: return "SOC";
    case RateMethod::Stpr: return "STPR";
    case RateMethod::MarketDriven: return "market-driven";
  }
  return "?";
}

/// Ramsey-rule inputs, all real per-year decimal fractions except `mu`.
struct StprParams {
  double delta = 0.0;   // pure time preference
  double hazard = 0.0;  // systemic / mortality risk L
  double mu = 1.0;      // elasticity of marginal utility of consumption
  double growth = 0.0;  // per-capita real consumption growth g

  /// HM Treasury Green Book parameterization: 0.5% + 1% + 1.0 * 2%.
  static constexpr StprParams green_book() { return {0.005, 0.01, 1.0, 0.02}; }

  friend bool operator==(const StprParams&, const StprParams&) = default;
};

inline void validate(const StprParams& p) {
  if (!std::isfinite(p.delta) || !std::isfinite(p.hazard) || !std::isfinite(p.mu) || !std::isfinite(p.growth)) {
    throw InvalidParameter("STPR parameters must be finite");
  }
  if (p.delta < 0) throw InvalidParameter("delta must be >= 0");
  if (p.hazard < 0) throw InvalidParameter("hazard must be >= 0");
  if (p.mu < 0) throw InvalidParameter("mu must be >= 0");
  if (p.growth < 0) throw InvalidParameter("growth must be >= 0");
}

/// Advisory only: the recommended band for pure time preference is [0, 1%].
inline bool delta_in_recommended_band(const StprParams& p) { return p.delta >= 0.0 && p.delta <= 0.01; }

namespace detail {

// Values snapped to 12 fractional decimal digits so sums and products are
// carried out exactly in integers.
inline constexpr long double kRateScale = 1e12L;

inline __int128 to_scaled(double x) {
  const long double s = static_cast<long double>(x) * kRateScale;
  if (std::fabs(s) > 9e18L) throw InvalidParameter("rate component out of range");
  return static_cast<__int128>(std::llround(s));
}

// Divides by 1e12 rounding half to even.
inline __int128 rescale(__int128 v) {
  const __int128 scale = 1000000000000LL;
  __int128 q = v / scale;
  __int128 r = v % scale;
  if (r < 0) {
    r += scale;
    --q;
  }
  if (2 * r > scale || (2 * r == scale && (q & 1) != 0)) ++q;
  return q;
}

inline double from_scaled(__int128 v) {
  return static_cast<double>(static_cast<long double>(static_cast<std::int64_t>(v)) / kRateScale);
}

}  // namespace detail

/// Social time preference rate r = (delta + L) + mu * g.
inline double stpr(const StprParams& p) {
  validate(p);
  using namespace detail;
  const __int128 rho = to_scaled(p.delta) + to_scaled(p.hazard);
  const __int128 growth_term = rescale(to_scaled(p.mu) * to_scaled(p.growth));
  return from_scaled(rho + growth_term);
}

/// Life-chance hazard L as deaths over population.
inline double mortality_hazard(double deaths, double population) {
  if (!std::isfinite(deaths) || !std::isfinite(population)) throw InvalidParameter("counts must be finite");
  if (population <= 0) throw InvalidParameter("population must be > 0");
  if (deaths < 0 || deaths > population) throw InvalidParameter("deaths must lie in [0, population]");
  return deaths / population;
}

struct TaggedRate {
  double rate = 0.0;
  RateMethod method = RateMethod::Soc;

  friend bool operator==(const TaggedRate&, const TaggedRate&) = default;
};

/// Social opportunity cost convention: the marginal pre-tax return on safe
/// private investment, validated and tagged.
inline TaggedRate soc_rate(double pretax_marginal_return) {
  if (!std::isfinite(pretax_marginal_return) || pretax_marginal_return < 0) {
    throw InvalidParameter("pre-tax marginal return must be finite and >= 0");
  }
  return {pretax_marginal_return, RateMethod::Soc};
}

/// Piecewise-constant term structure of real annual rates. Segment i covers
/// [start_year_i, start_year_{i+1}); the last segment extends to infinity.
class RateSchedule {
 public:
  struct Segment {
    double start_year = 0.0;
    double rate = 0.0;

    friend bool operator==(const Segment&, const Segment&) = default;
  };

  explicit RateSchedule(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw InvalidParameter("rate schedule needs at least one segment");
    if (segments_.front().start_year != 0.0) throw InvalidParameter("first segment must start at year 0");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      const auto& s = segments_[i];
      if (!std::isfinite(s.start_year) || !std::isfinite(s.rate)) {
        throw InvalidParameter("schedule values must be finite");
      }
      if (s.rate < 0) throw InvalidParameter("schedule rates must be >= 0");
      if (i > 0 && !(s.start_year > segments_[i - 1].start_year)) {
        throw InvalidParameter("segment start years must be strictly increasing");
      }
    }
  }

  static RateSchedule flat(double rate) { return RateSchedule({{0.0, rate}}); }

  std::span<const Segment> segments() const { return segments_; }
  bool is_flat() const { return segments_.size() == 1; }

  double rate_at(double t) const {
    if (!(t >= 0)) throw InvalidParameter("time must be >= 0");
    // Last segment whose start is <= t (left-closed intervals).
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const Segment& s) { return v < s.start_year; });
    return std::prev(it)->rate;
  }

  /// Calls f(rate, duration) for each segment's share of [0, t].
  template <class F>
  void for_each_span(double t, F&& f) const {
    if (!(t >= 0)) throw InvalidParameter("time must be >= 0");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      const double begin = segments_[i].start_year;
      if (begin >= t) break;
      const double end = i + 1 < segments_.size() ? std::min(t, segments_[i + 1].start_year) : t;
      f(segments_[i].rate, end - begin);
    }
  }

  friend bool operator==(const RateSchedule&, const RateSchedule&) = default;

 private:
  std::vector<Segment> segments_;
};

inline double schedule_rate_at(const RateSchedule& schedule, double t) { return schedule.rate_at(t); }

struct RateRecord {
  std::string jurisdiction;
  int year = 0;
  double rate = 0.0;
  RateMethod method = RateMethod::Soc;

  friend bool operator==(const RateRecord&, const RateRecord&) = default;
};

inline void validate(const RateRecord& r) {
  if (!(r.rate >= 0.0 && r.rate <= 0.20)) throw InvalidParameter("reference rate outside [0, 0.20]");
  if (r.year < 1960 || r.year > 2030) throw InvalidParameter("reference year outside [1960, 2030]");
}

/// Published reference rates. The UK entries are the years the real rate
/// changed; the STPR switch is dated 2003 (one passage says 1990).
inline const std::vector<RateRecord>& reference_rates() {
  static const std::vector<RateRecord> records = [] {
    std::vector<RateRecord> r = {
        {"UK", 1967, 0.08, RateMethod::Soc},
        {"UK", 1969, 0.10, RateMethod::Soc},
        {"UK", 1978, 0.05, RateMethod::MarketDriven},
        {"UK", 1989, 0.06, RateMethod::Soc},
        {"UK", 2003, 0.035, RateMethod::Stpr},
        {"India", 2007, 0.12, RateMethod::Soc},
        {"Pakistan", 2007, 0.12, RateMethod::Soc},
        {"Philippines", 2007, 0.15, RateMethod::Soc},
        {"Italy", 2007, 0.05, RateMethod::Stpr},
        {"Spain", 2007, 0.06, RateMethod::Stpr},
        {"Norway", 2007, 0.035, RateMethod::MarketDriven},
        {"Germany", 2007, 0.03, RateMethod::MarketDriven},
    };
    for (const auto& rec : r) validate(rec);
    return r;
  }();
  return records;
}

namespace detail {
inline bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}
}  // namespace detail

inline RateRecord lookup_reference_rate(std::string_view jurisdiction, int year) {
  for (const auto& rec : reference_rates()) {
    if (rec.year == year && detail::iequals(rec.jurisdiction, jurisdiction)) return rec;
  }
  throw NotFound("no reference rate for " + std::string(jurisdiction) + " in " + std::to_string(year));
}

}  // namespace sdrkit
