// Acceptance suite: one PASS/FAIL line per criterion.
// usage: acceptance <path-to-sdrkit-cli> <fixtures-dir>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sdrkit/sdrkit.hpp"

using namespace sdrkit;

namespace {

// Pinned tolerances.
constexpr double kBroome6Low = 2.4e9, kBroome6High = 2.6e9;
constexpr double kBroome14Low = 2.44e11, kBroome14High = 2.50e11;
constexpr long double kBreakevenNpvTol = 1e-4L;  // GBP millions
constexpr double kBreakevenSearchTol = 1e-10;
constexpr double kAnalyticRootTol = 1e-6;
constexpr double kMuWeightLow = 0.345, kMuWeightHigh = 0.360;
constexpr double kGiniOracleTol = 1e-12;
constexpr double kFrontierTol = 1e-3;

struct Result {
  bool ok = true;
  std::string detail;

  void check(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

std::string fmt(long double v) {
  std::ostringstream s;
  s.precision(15);
  s << v;
  return s.str();
}

Result criterion1() {
  Result r;
  const double got = stpr({0.005, 0.01, 1.0, 0.02});
  r.check(got == 0.035, "stpr = " + fmt(got));
  return r;
}

Result criterion2() {
  Result r;
  const CashFlowSeries trillion("USD", {{100, Fixed4::parse("1000000000000"), {}}});
  const double at6 = npv(trillion, RateSchedule::flat(0.06), Compounding::Continuous).amount.to_double();
  const double at14 = npv(trillion, RateSchedule::flat(0.014), Compounding::Continuous).amount.to_double();
  r.check(at6 >= kBroome6Low && at6 <= kBroome6High, "6% npv = " + fmt(at6));
  r.check(at14 >= kBroome14Low && at14 <= kBroome14High, "1.4% npv = " + fmt(at14));
  return r;
}

Result criterion3() {
  Result r;
  const auto table = table1_carlisle();
  const std::array<const char*, 6> expected = {"1.2", "-0.9", "-3.2", "-5.6", "-8.1", "-13.6"};
  r.check(table.size() == expected.size(), "row count");
  for (std::size_t i = 0; i < std::min(table.size(), expected.size()); ++i) {
    const auto& diff = table[i].difference_in_favour_of_pfi().amount;
    r.check(diff == Fixed4::parse(expected[i]), "difference row " + std::to_string(i) + " = " + diff.to_string());
    const auto want = i == 0 ? Selection::Pfi : Selection::Psc;
    r.check(verdict(table[i]).selected == want, "verdict row " + std::to_string(i));
    if (i > 0) {
      r.check(table[i].rate() < table[i - 1].rate(), "rates descending");
      r.check(diff < table[i - 1].difference_in_favour_of_pfi().amount, "difference not strictly monotone");
    }
  }
  return r;
}

Result criterion4() {
  Result r;
  const auto [pfi, psc] = carlisle_fitted();
  auto diff = [&](double rate) {
    const auto s = RateSchedule::flat(rate);
    return npv_unrounded(psc.series, s, Compounding::DiscreteAnnual) - npv_unrounded(pfi.series, s, Compounding::DiscreteAnnual);
  };
  r.check(diff(0.055) < 0 && diff(0.06) > 0, "reconstruction signs differ from the table");
  const double root = breakeven_rate(pfi, psc, {0.055, 0.06}, Compounding::DiscreteAnnual, {kBreakevenSearchTol});
  r.check(root > 0.055 && root < 0.06, "root " + fmt(root) + " outside (0.055, 0.06)");
  r.check(std::fabs(diff(root)) <= kBreakevenNpvTol, "|difference at root| = " + fmt(std::fabs(diff(root))));

  const ProcurementOption a{"a", OptionKind::Pfi, CashFlowSeries("GBP", {{1, Fixed4::parse("110"), {}}}), std::nullopt};
  const ProcurementOption b{"b", OptionKind::Psc, CashFlowSeries("GBP", {{0, Fixed4::parse("104.7619"), {}}}), std::nullopt};
  const double closed_form = 110.0 / 104.7619 - 1.0;
  const double found = breakeven_rate(a, b, {0.01, 0.10}, Compounding::DiscreteAnnual);
  r.check(std::fabs(found - closed_form) <= kAnalyticRootTol, "analytic root " + fmt(found) + " vs " + fmt(closed_form));
  return r;
}

Result criterion5() {
  Result r;
  const double w = mu_weight(2.0, 1.5);
  r.check(w >= kMuWeightLow && w <= kMuWeightHigh, "mu_weight = " + fmt(w));
  return r;
}

Result criterion6() {
  Result r;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_real_distribution<double> value(0.0, 1000.0), scale(0.001, 1000.0), frac(0.0, 1.0);
  for (int n = 1; n <= 8; ++n) r.check(gini(std::vector<double>(n, 7.25)) == 0.0, "equality vector");
  for (int i = 0; i < 500; ++i) {
    std::vector<double> x(size(rng));
    for (auto& v : x) v = value(rng);
    const double g = gini(x);
    r.check(std::fabs(g - oracle::gini_double_sum(x)) <= kGiniOracleTol, "oracle mismatch on sample " + std::to_string(i));
    auto scaled = x;
    const double k = scale(rng);
    for (auto& v : scaled) v *= k;
    r.check(std::fabs(gini(scaled) - g) <= kGiniOracleTol, "scale invariance on sample " + std::to_string(i));
    if (x.size() >= 2) {
      const auto rich = std::max_element(x.begin(), x.end()) - x.begin();
      const auto poor = std::min_element(x.begin(), x.end()) - x.begin();
      auto moved = x;
      const double amount = frac(rng) * (x[rich] - x[poor]) / 2;
      moved[rich] -= amount;
      moved[poor] += amount;
      r.check(gini(moved) <= g + kGiniOracleTol, "Pigou-Dalton on sample " + std::to_string(i));
    }
  }
  return r;
}

Result criterion7() {
  Result r;
  std::vector<UtilityPair> pts;
  for (const auto& [a, b] : oracle::quarter_circle(1000)) pts.push_back({a, b});
  const UtilityFrontier f(pts);
  auto near = [&](UtilityPair p, double ua, double ub, const char* name) {
    r.check(std::fabs(p.u_a - ua) <= kFrontierTol && std::fabs(p.u_b - ub) <= kFrontierTol,
            std::string(name) + " at (" + fmt(p.u_a) + ", " + fmt(p.u_b) + ")");
  };
  const double h = std::sqrt(0.5);
  near(optimal_point(f, swf::Utilitarian{1, 1}), h, h, "utilitarian(1,1)");
  near(optimal_point(f, swf::Utilitarian{2, 1}), 2 / std::sqrt(5.0), 1 / std::sqrt(5.0), "utilitarian(2,1)");
  near(optimal_point(f, swf::Rawlsian{}), h, h, "rawlsian");
  double previous = HUGE_VAL;
  for (double eps : {5.0, 20.0, 100.0}) {
    const auto p = optimal_point(f, swf::Ces{eps, 2, 1});
    const double gap = std::fabs(p.u_a - p.u_b);
    r.check(gap <= previous, "ces gap grew at epsilon " + fmt(eps));
    previous = gap;
  }
  return r;
}

Result criterion8() {
  Result r;
  for (double x : {0.08, 0.10}) r.check(classify_rate(x) == Regime::Libertarian, "rate " + fmt(x));
  for (double x : {0.05, 0.055, 0.06}) r.check(classify_rate(x) == Regime::BetweenLibertarianAndEgalitarian, "rate " + fmt(x));
  r.check(classify_rate(0.035) == Regime::BetweenWeightedUtilitarianAndRawlsian, "rate 0.035");
  return r;
}

Result criterion9() {
  Result r;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> count(1, 10), day(0, 364), coin(0, 1);
  std::uniform_int_distribution<std::int64_t> units(0, 100'000'000'000LL);
  const auto jan1 = std::chrono::sys_days{std::chrono::year{2007} / 1 / 1};
  const Date as_of = parse_date("2007-12-31");
  for (int i = 0; i < 200; ++i) {
    std::vector<LedgerEntry> entries;
    const int n = count(rng);
    for (int k = 0; k < n; ++k) {
      LedgerEntry e{"e" + std::to_string(k), Fixed4::from_units(units(rng)), Date{jan1 + std::chrono::days{day(rng)}},
                    coin(rng) ? BalanceSheet::On : BalanceSheet::Off, coin(rng) == 1, {}};
      if (coin(rng)) e.payments.push_back({e.incurred, Fixed4::from_units(e.amount.units() / 3)});
      entries.push_back(std::move(e));
    }
    const DebtRegister reg("GBP", std::move(entries));
    const GdpObservation gdp{as_of, {Fixed4::from_units(1 + units(rng)), "GBP"}};
    for (auto basis : {Basis::Cash, Basis::Accrual}) {
      const double all = debt_to_gdp(reg, gdp, Scope::IncludeOffBalance, basis, as_of);
      const double on = debt_to_gdp(reg, gdp, Scope::OnBalanceOnly, basis, as_of);
      r.check(all >= on, "scope monotonicity on register " + std::to_string(i));
    }
  }
  r.check(danger_alert(1.851) == DangerStatus::Alert, "1.851");
  r.check(danger_alert(1.552) == DangerStatus::Alert, "1.552");
  r.check(danger_alert(0.015) == DangerStatus::Clear, "0.015");
  r.check(danger_alert(1.50) == DangerStatus::Clear, "1.50");
  return r;
}

std::string capture(const std::string& command, int& status) {
  std::string out;
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  status = pclose(pipe);
  return out;
}

Result criterion10(const std::string& cli, const std::string& dir) {
  Result r;
  auto f = [&](const char* name) { return "'" + dir + "/" + name + "'"; };
  const std::vector<std::string> commands = {
      "rate stpr --delta 0.005 --hazard 0.01 --mu 1.0 --growth 0.02",
      "rate stpr --params " + f("stpr.json"),
      "rate soc --return 0.06",
      "rate lookup --jurisdiction UK --year 1967",
      "rate hazard --deaths 644600 --population 58600000",
      "rate at --schedule " + f("schedule.json") + " --t 45",
      "npv --cashflows " + f("trillion.csv") + " --rate 0.06 --compounding continuous --currency USD",
      "npv --cashflows " + f("carlisle_pfi.csv") + " --schedule " + f("schedule.json"),
      "compare --pfi " + f("carlisle_pfi.csv") + " --psc " + f("carlisle_psc.csv") + " --rates 0.06,0.055,0.05,0.045,0.04,0.03",
      "compare --pfi " + f("a.csv") + " --psc " + f("b.csv") + " --rates 0.03,0.05 --format csv",
      "breakeven --pfi " + f("carlisle_pfi.csv") + " --psc " + f("carlisle_psc.csv") + " --bracket 0.055,0.06 --tol 1e-10",
      "breakeven --pfi " + f("a.csv") + " --psc " + f("a.csv") + " --bracket 0.03,0.06",
      "swf value --spec " + f("swf_ces2.json") + " --ua 2 --ub 4",
      "swf optimal --frontier " + f("frontier.csv") + " --spec " + f("swf_utilitarian_2_1.json"),
      "swf optimal --frontier " + f("frontier.csv") + " --spec " + f("swf_egalitarian.json"),
      "swf classify --rate 0.055 --mapping " + f("mapping.json"),
      "equity gini --holdings " + f("holdings.txt"),
      "equity topshare --holdings " + f("holdings.txt") + " --fraction 0.1",
      "equity muweight --ratio 2 --mu 1.5",
      "fiscal recognize --register " + f("register.json") + " --basis cash --as-of 2007-12-31",
      "fiscal ratio --register " + f("register_ratio.json") + " --gdp 1000 --gdp-date 2007-12-31 --as-of 2007-12-31",
      "fiscal alert --ratio 1.552",
      "report --fixture carlisle --format table",
      "report --input " + f("carlisle_table.csv") + " --format csv",
  };
  for (const auto& args : commands) {
    const std::string command = "'" + cli + "' " + args;
    int s1 = 0, s2 = 0;
    const auto first = capture(command, s1);
    const auto second = capture(command, s2);
    r.check(s1 != -1 && !first.empty(), "no output from: " + args);
    r.check(first == second && s1 == s2, "output differs for: " + args);
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <sdrkit-cli> <fixtures-dir>\n";
    return 2;
  }
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria = {
      {"UK STPR reproduction", criterion1},
      {"Broome discounting check", criterion2},
      {"Carlisle table reproduction", criterion3},
      {"Breakeven bracketing", criterion4},
      {"mu-weight check", criterion5},
      {"Gini property suite", criterion6},
      {"Welfare-optimizer oracle equivalence", criterion7},
      {"Regime classification", criterion8},
      {"Fiscal scope monotonicity and alerts", criterion9},
      {"Determinism", [&] { return criterion10(argv[1], argv[2]); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.ok = false;
      r.detail = std::string("exception: ") + e.what();
    }
    std::cout << (r.ok ? "[PASS] " : "[FAIL] ") << (i + 1) << ". " << criteria[i].first;
    if (!r.ok) std::cout << " -- " << r.detail;
    std::cout << "\n";
    failures += r.ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
