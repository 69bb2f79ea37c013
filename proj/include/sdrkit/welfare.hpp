#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sdrkit/error.hpp"

namespace sdrkit {

// ---------------------------------------------------------------------------
// Income weights and inequality statistics

/// Marginal value of an extra unit to the richer party relative to the
/// poorer, under iso-elastic utility: ratio^(-mu).
inline double mu_weight(double income_ratio, double mu) {
  if (!std::isfinite(income_ratio) || income_ratio <= 0) throw InvalidParameter("income ratio must be > 0");
  if (!std::isfinite(mu) || mu < 0) throw InvalidParameter("mu must be finite and >= 0");
  return std::pow(income_ratio, -mu);
}

namespace detail {
inline void validate_holdings(std::span<const double> holdings) {
  if (holdings.empty()) throw InvalidParameter("holdings must not be empty");
  bool any_positive = false;
  for (double x : holdings) {
    if (!std::isfinite(x) || x < 0) throw InvalidParameter("holdings must be finite and >= 0");
    any_positive = any_positive || x > 0;
  }
  if (!any_positive) throw InvalidParameter("holdings must not all be zero");
}
}  // namespace detail

/// Gini coefficient, sum_i sum_j |x_i - x_j| / (2 n^2 mean), evaluated in
/// O(n log n) via the sorted-rank identity.
inline double gini(std::span<const double> holdings) {
  detail::validate_holdings(holdings);
  std::vector<double> x(holdings.begin(), holdings.end());
  std::sort(x.begin(), x.end());
  const auto n = static_cast<long double>(x.size());
  long double weighted = 0.0L;
  long double total = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    weighted += (2.0L * static_cast<long double>(i + 1) - n - 1.0L) * x[i];
    total += x[i];
  }
  return static_cast<double>(weighted / (n * total));
}

/// Share of the total held by the richest ceil(fraction * n) holders.
inline double top_share(std::span<const double> holdings, double fraction) {
  detail::validate_holdings(holdings);
  if (!std::isfinite(fraction) || fraction <= 0 || fraction > 1) throw InvalidParameter("fraction must lie in (0, 1]");
  const std::size_t n = holdings.size();
  // Guard against 0.3 * 10 == 3.0000000000000004.
  const double raw = fraction * static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
  k = std::clamp<std::size_t>(k, 1, n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return holdings[a] > holdings[b]; });
  long double top = 0.0L;
  long double total = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    total += holdings[order[i]];
    if (i < k) top += holdings[order[i]];
  }
  return static_cast<double>(top / total);
}

// ---------------------------------------------------------------------------
// Social welfare over a two-party utility frontier

struct UtilityPair {
  double u_a = 0.0;
  double u_b = 0.0;

  friend bool operator==(const UtilityPair&, const UtilityPair&) = default;
};

inline void validate(const UtilityPair& p) {
  if (!std::isfinite(p.u_a) || !std::isfinite(p.u_b) || p.u_a < 0 || p.u_b < 0) {
    throw InvalidParameter("utilities must be finite and >= 0");
  }
}

/// Downward-sloping frontier sampled at >= 3 points and linearly
/// interpolated between them.
class UtilityFrontier {
 public:
  explicit UtilityFrontier(std::vector<UtilityPair> points) : points_(std::move(points)) {
    if (points_.size() < 3) throw InvalidParameter("frontier needs at least 3 points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      validate(points_[i]);
      if (i > 0 && !(points_[i].u_a > points_[i - 1].u_a)) throw InvalidParameter("frontier u_a must be strictly increasing");
      if (i > 0 && !(points_[i].u_b < points_[i - 1].u_b)) throw InvalidParameter("frontier u_b must be strictly decreasing");
    }
  }

  std::span<const UtilityPair> points() const { return points_; }
  double min_u_a() const { return points_.front().u_a; }
  double max_u_a() const { return points_.back().u_a; }

  /// u_b on the frontier at a given u_a in [min_u_a, max_u_a].
  double u_b_at(double u_a) const {
    if (u_a <= points_.front().u_a) return points_.front().u_b;
    if (u_a >= points_.back().u_a) return points_.back().u_b;
    auto hi = std::upper_bound(points_.begin(), points_.end(), u_a,
                               [](double v, const UtilityPair& p) { return v < p.u_a; });
    auto lo = std::prev(hi);
    const double w = (u_a - lo->u_a) / (hi->u_a - lo->u_a);
    return std::max(0.0, lo->u_b + w * (hi->u_b - lo->u_b));
  }

 private:
  std::vector<UtilityPair> points_;
};

namespace swf {
struct Utilitarian {
  double weight_a = 1.0;
  double weight_b = 1.0;
};
/// Atkinson/CES family: epsilon = 0 is utilitarian, epsilon -> inf tends to
/// maximin. epsilon = 1 uses the logarithmic limit.
struct Ces {
  double epsilon = 1.0;
  double weight_a = 1.0;
  double weight_b = 1.0;
};
struct Rawlsian {};
struct Egalitarian {};
}  // namespace swf

using SwfSpec = std::variant<swf::Utilitarian, swf::Ces, swf::Rawlsian, swf::Egalitarian>;

inline void validate(const SwfSpec& spec) {
  auto check_weights = [](double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || a <= 0 || b <= 0) throw InvalidParameter("SWF weights must be > 0");
  };
  if (const auto* u = std::get_if<swf::Utilitarian>(&spec)) check_weights(u->weight_a, u->weight_b);
  if (const auto* c = std::get_if<swf::Ces>(&spec)) {
    check_weights(c->weight_a, c->weight_b);
    if (!std::isfinite(c->epsilon) || c->epsilon < 0) throw InvalidParameter("CES epsilon must be finite and >= 0");
  }
}

inline std::string_view family_name(const SwfSpec& spec) {
  constexpr std::string_view names[] = {"utilitarian", "ces", "rawlsian", "egalitarian"};
  return names[spec.index()];
}

struct WelfareValue {
  double value = 0.0;
  /// Set for the egalitarian family: the value is only meaningful on the
  /// u_a == u_b line and the caller must check that.
  bool equal_required = false;
};

inline WelfareValue swf_value(const SwfSpec& spec, const UtilityPair& pair) {
  validate(spec);
  validate(pair);
  return std::visit(
      [&](const auto& f) -> WelfareValue {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, swf::Utilitarian>) {
          return {f.weight_a * pair.u_a + f.weight_b * pair.u_b, false};
        } else if constexpr (std::is_same_v<F, swf::Ces>) {
          if (f.epsilon >= 1.0 && (pair.u_a == 0 || pair.u_b == 0)) {
            throw InvalidParameter("CES welfare undefined for a zero utility when epsilon >= 1");
          }
          if (f.epsilon == 1.0) return {f.weight_a * std::log(pair.u_a) + f.weight_b * std::log(pair.u_b), false};
          const double e = 1.0 - f.epsilon;
          return {(f.weight_a * std::pow(pair.u_a, e) + f.weight_b * std::pow(pair.u_b, e)) / e, false};
        } else if constexpr (std::is_same_v<F, swf::Rawlsian>) {
          return {std::min(pair.u_a, pair.u_b), false};
        } else {
          return {std::min(pair.u_a, pair.u_b), true};
        }
      },
      spec);
}

namespace detail {

// Objective for the optimizer; points where CES is undefined score -inf,
// which is the limit of the function there.
inline double swf_score(const SwfSpec& spec, UtilityPair p) {
  if (const auto* c = std::get_if<swf::Ces>(&spec); c && c->epsilon >= 1.0 && (p.u_a == 0 || p.u_b == 0)) {
    return -std::numeric_limits<double>::infinity();
  }
  const double v = swf_value(spec, p).value;
  return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
}

inline UtilityPair egalitarian_point(const UtilityFrontier& frontier) {
  // u_a - u_b is strictly increasing along the frontier.
  const auto pts = frontier.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double g = pts[i].u_a - pts[i].u_b;
    if (g == 0) return pts[i];
    if (g > 0) {
      if (i == 0) break;
      const double g0 = pts[i - 1].u_a - pts[i - 1].u_b;
      const double w = -g0 / (g - g0);
      const double u = pts[i - 1].u_a + w * (pts[i].u_a - pts[i - 1].u_a);
      return {u, u};
    }
  }
  throw NoSignChange("frontier does not cross the equality line u_a = u_b");
}

}  // namespace detail

/// Point on the frontier maximizing the welfare function: a dense grid scan
/// followed by ternary refinement between the winner's neighbours. Ties go
/// to the smaller u_a. Egalitarian returns the crossing with u_a = u_b.
inline UtilityPair optimal_point(const UtilityFrontier& frontier, const SwfSpec& spec) {
  validate(spec);
  if (std::holds_alternative<swf::Egalitarian>(spec)) return detail::egalitarian_point(frontier);

  auto f = [&](double u_a) { return detail::swf_score(spec, {u_a, frontier.u_b_at(u_a)}); };
  const double lo = frontier.min_u_a();
  const double hi = frontier.max_u_a();
  const std::size_t samples = std::max<std::size_t>(10000, 20 * frontier.points().size());
  auto grid = [&](std::size_t i) { return i == samples ? hi : lo + (hi - lo) * static_cast<double>(i) / samples; };

  std::size_t best = 0;
  double best_value = f(grid(0));
  for (std::size_t i = 1; i <= samples; ++i) {
    const double v = f(grid(i));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  double a = grid(best == 0 ? 0 : best - 1);
  double b = grid(std::min(best + 1, samples));
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    const double m1 = a + (b - a) / 3;
    const double m2 = b - (b - a) / 3;
    if (f(m1) >= f(m2)) {
      b = m2;
    } else {
      a = m1;
    }
  }
  double u_a = grid(best);
  const double refined = a + (b - a) / 2;
  const double refined_value = f(refined);
  if (refined_value > best_value || (refined_value == best_value && refined < u_a)) u_a = refined;
  return {u_a, frontier.u_b_at(u_a)};
}

// ---------------------------------------------------------------------------
// Rate-to-regime classification

/// Ordered from most equity-leaning to most efficiency-leaning.
enum class Regime {
  RawlsianLeaning,
  BetweenWeightedUtilitarianAndRawlsian,
  BetweenLibertarianAndEgalitarian,
  Libertarian,
};

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::RawlsianLeaning: return "Rawlsian-leaning";
    case Regime::BetweenWeightedUtilitarianAndRawlsian: return "between-weighted-utilitarian-and-Rawlsian";
    case Regime::BetweenLibertarianAndEgalitarian: return "between-libertarian-and-egalitarian";
    case Regime::Libertarian: return "libertarian";
  }
  return "?";
}

inline Regime parse_regime(std::string_view s) {
  for (auto r : {Regime::RawlsianLeaning, Regime::BetweenWeightedUtilitarianAndRawlsian,
                 Regime::BetweenLibertarianAndEgalitarian, Regime::Libertarian}) {
    if (to_string(r) == s) return r;
  }
  throw ParseError("unknown regime label '" + std::string(s) + "'");
}

class RegimeMapping {
 public:
  struct Threshold {
    double min_rate = 0.0;  // inclusive
    Regime label = Regime::RawlsianLeaning;

    friend bool operator==(const Threshold&, const Threshold&) = default;
  };

  explicit RegimeMapping(std::vector<Threshold> thresholds) : thresholds_(std::move(thresholds)) {
    if (thresholds_.empty()) throw InvalidParameter("regime mapping needs at least one threshold");
    for (std::size_t i = 0; i < thresholds_.size(); ++i) {
      if (!std::isfinite(thresholds_[i].min_rate)) throw InvalidParameter("threshold rates must be finite");
      if (i > 0 && !(thresholds_[i].min_rate > thresholds_[i - 1].min_rate)) {
        throw InvalidParameter("thresholds must be sorted strictly ascending by min_rate");
      }
    }
  }

  /// Anchored on 3.5% (between W and R), 5-6% (between L and E) and 8-10%
  /// (libertarian); the 2%, 4.5% and 7% cut points are a convention.
  static RegimeMapping default_mapping() {
    return RegimeMapping({{0.0, Regime::RawlsianLeaning},
                          {0.02, Regime::BetweenWeightedUtilitarianAndRawlsian},
                          {0.045, Regime::BetweenLibertarianAndEgalitarian},
                          {0.07, Regime::Libertarian}});
  }

  std::span<const Threshold> thresholds() const { return thresholds_; }

  friend bool operator==(const RegimeMapping&, const RegimeMapping&) = default;

 private:
  std::vector<Threshold> thresholds_;
};

inline Regime classify_rate(double rate, const RegimeMapping& mapping = RegimeMapping::default_mapping()) {
  if (!std::isfinite(rate) || rate < 0) throw InvalidParameter("rate must be finite and >= 0");
  const auto t = mapping.thresholds();
  auto it = std::upper_bound(t.begin(), t.end(), rate,
                             [](double v, const RegimeMapping::Threshold& th) { return v < th.min_rate; });
  if (it == t.begin()) throw InvalidParameter("rate is below the lowest mapping threshold");
  return std::prev(it)->label;
}

}  // namespace sdrkit
