#include <random>

#include <gtest/gtest.h>

#include "sdrkit/appraisal.hpp"

using namespace sdrkit;

namespace {

Money gbp(const char* s) { return {Fixed4::parse(s), "GBP"}; }

ProcurementOption option(OptionKind kind, std::vector<CashFlowSeries::Entry> e) {
  return {kind == OptionKind::Pfi ? "pfi" : "psc", kind, CashFlowSeries("GBP", std::move(e)), std::nullopt};
}

const std::vector<double> kCarlisleRates = {0.06, 0.055, 0.05, 0.045, 0.04, 0.03};

}  // namespace

TEST(ComparisonRow, DifferenceIsPscMinusPfi) {
  EXPECT_EQ(ComparisonRow(0.06, gbp("173.1"), gbp("174.3")).difference_in_favour_of_pfi(), gbp("1.2"));
  EXPECT_EQ(ComparisonRow(0.055, gbp("186.7"), gbp("185.8")).difference_in_favour_of_pfi(), gbp("-0.9"));
  EXPECT_THROW(ComparisonRow(0.05, gbp("1"), Money{Fixed4::parse("1"), "USD"}), InvalidParameter);
}

TEST(CarlisleTable, DifferenceColumnAndVerdicts) {
  const auto table = table1_carlisle();
  const char* diffs[] = {"1.2", "-0.9", "-3.2", "-5.6", "-8.1", "-13.6"};
  ASSERT_EQ(table.size(), 6u);
  for (std::size_t i = 0; i < table.size(); ++i) {
    EXPECT_EQ(table[i].rate(), kCarlisleRates[i]);
    EXPECT_EQ(table[i].difference_in_favour_of_pfi(), gbp(diffs[i]));
    EXPECT_EQ(verdict(table[i]).selected, i == 0 ? Selection::Pfi : Selection::Psc);
    if (i > 0) {
      EXPECT_LT(table[i].difference_in_favour_of_pfi().amount, table[i - 1].difference_in_favour_of_pfi().amount);
    }
  }
}

TEST(Verdict, Cases) {
  EXPECT_EQ(verdict(ComparisonRow(0.06, gbp("173.1"), gbp("174.3"))), (VfmVerdict{Selection::Pfi, gbp("1.2")}));
  EXPECT_EQ(verdict(ComparisonRow(0.055, gbp("186.7"), gbp("185.8"))), (VfmVerdict{Selection::Psc, gbp("0.9")}));
  EXPECT_EQ(verdict(ComparisonRow(0.05, gbp("10"), gbp("10"))), (VfmVerdict{Selection::Tie, gbp("0")}));
  EXPECT_EQ(verdict(ComparisonRow(0.05, gbp("10.0000"), gbp("10.0001"))).selected, Selection::Pfi);
}

TEST(Compare, IdenticalSeriesGiveZeroDifference) {
  const auto pfi = option(OptionKind::Pfi, {{1, Fixed4::parse("50"), {}}, {7, Fixed4::parse("80"), {}}});
  auto psc = pfi;
  psc.kind = OptionKind::Psc;
  for (const auto& row : compare(pfi, psc, kCarlisleRates, Compounding::DiscreteAnnual)) {
    EXPECT_EQ(row.difference_in_favour_of_pfi().amount, Fixed4{});
    EXPECT_EQ(verdict(row).selected, Selection::Tie);
  }
}

TEST(Compare, RowsInInputOrderAndRiskAdjustmentIncluded) {
  const auto pfi = option(OptionKind::Pfi, {{1, Fixed4::parse("110"), {}}});
  auto psc = option(OptionKind::Psc, {{0, Fixed4::parse("100"), {}}});
  psc.risk_adjustment = CashFlowSeries("GBP", {{0, Fixed4::parse("5"), {}}});
  const std::vector<double> rates = {0.03, 0.10, 0.0};
  const auto table = compare(pfi, psc, rates, Compounding::DiscreteAnnual);
  ASSERT_EQ(table.size(), 3u);
  EXPECT_EQ(table[0].rate(), 0.03);
  EXPECT_EQ(table[1].rate(), 0.10);
  EXPECT_EQ(table[2].npv_psc(), gbp("105"));
  EXPECT_EQ(table[2].npv_pfi(), gbp("110"));
  EXPECT_EQ(table[1].npv_pfi(), gbp("100"));
}

TEST(Compare, Errors) {
  const auto pfi = option(OptionKind::Pfi, {{1, Fixed4::parse("1"), {}}});
  const auto psc = option(OptionKind::Psc, {{1, Fixed4::parse("1"), {}}});
  EXPECT_THROW(compare(psc, pfi, kCarlisleRates, Compounding::DiscreteAnnual), InvalidParameter);
  EXPECT_THROW(compare(pfi, psc, std::vector<double>{}, Compounding::DiscreteAnnual), InvalidParameter);
  EXPECT_THROW(compare(pfi, psc, std::vector<double>{-0.01}, Compounding::DiscreteAnnual), InvalidParameter);
  ProcurementOption usd = psc;
  usd.series = CashFlowSeries("USD", {{1, Fixed4::parse("1"), {}}});
  EXPECT_THROW(compare(pfi, usd, kCarlisleRates, Compounding::DiscreteAnnual), InvalidParameter);
  auto risky_pfi = pfi;
  risky_pfi.risk_adjustment = CashFlowSeries("GBP", {{0, Fixed4::parse("1"), {}}});
  EXPECT_THROW(compare(risky_pfi, psc, kCarlisleRates, Compounding::DiscreteAnnual), InvalidParameter);
}

TEST(Compare, AntisymmetryProperty) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> t(0, 30);
  std::uniform_int_distribution<std::int64_t> units(0, 2'000'000'000);
  for (int i = 0; i < 100; ++i) {
    std::vector<CashFlowSeries::Entry> a, b;
    for (int k = 0; k < 5; ++k) a.push_back({double(t(rng)), Fixed4::from_units(units(rng)), {}});
    for (int k = 0; k < 5; ++k) b.push_back({double(t(rng)), Fixed4::from_units(units(rng)), {}});
    auto by_t = [](const auto& x, const auto& y) { return x.t < y.t; };
    std::sort(a.begin(), a.end(), by_t);
    std::sort(b.begin(), b.end(), by_t);
    const auto forward = compare(option(OptionKind::Pfi, a), option(OptionKind::Psc, b), kCarlisleRates, Compounding::Continuous);
    const auto swapped = compare(option(OptionKind::Pfi, b), option(OptionKind::Psc, a), kCarlisleRates, Compounding::Continuous);
    for (std::size_t r = 0; r < forward.size(); ++r) {
      EXPECT_EQ(forward[r].difference_in_favour_of_pfi().amount, -swapped[r].difference_in_favour_of_pfi().amount);
    }
  }
}

TEST(Breakeven, AnalyticSingleFlows) {
  // 110 / (1 + r) = 104.7619  =>  r = 110 / 104.7619 - 1.
  const double closed_form = 110.0L / 104.7619L - 1.0L;
  const auto pfi = option(OptionKind::Pfi, {{1, Fixed4::parse("110"), {}}});
  const auto psc = option(OptionKind::Psc, {{0, Fixed4::parse("104.7619"), {}}});
  const double r = breakeven_rate(pfi, psc, {0.01, 0.10}, Compounding::DiscreteAnnual);
  EXPECT_NEAR(r, 0.05, 1e-6);
  EXPECT_NEAR(r, closed_form, 1e-6);
  EXPECT_GT(r, 0.01);
  EXPECT_LT(r, 0.10);
}

TEST(Breakeven, NoSignChangeForIdenticalSeries) {
  const auto pfi = option(OptionKind::Pfi, {{1, Fixed4::parse("110"), {}}});
  auto psc = pfi;
  psc.kind = OptionKind::Psc;
  EXPECT_THROW(breakeven_rate(pfi, psc, {0.01, 0.10}, Compounding::DiscreteAnnual), NoSignChange);
}

TEST(Breakeven, NoSignChangeWhenBracketMissesRoot) {
  const auto pfi = option(OptionKind::Pfi, {{1, Fixed4::parse("110"), {}}});
  const auto psc = option(OptionKind::Psc, {{0, Fixed4::parse("104.7619"), {}}});
  EXPECT_THROW(breakeven_rate(pfi, psc, {0.06, 0.10}, Compounding::DiscreteAnnual), NoSignChange);
}

TEST(Breakeven, NoConvergenceWhenIterationsExhausted) {
  const auto pfi = option(OptionKind::Pfi, {{1, Fixed4::parse("110"), {}}});
  const auto psc = option(OptionKind::Psc, {{0, Fixed4::parse("104.7619"), {}}});
  EXPECT_THROW(breakeven_rate(pfi, psc, {0.01, 0.10}, Compounding::DiscreteAnnual, {1e-12, 5}), NoConvergence);
}

TEST(Breakeven, InvalidArguments) {
  const auto pfi = option(OptionKind::Pfi, {{1, Fixed4::parse("110"), {}}});
  const auto psc = option(OptionKind::Psc, {{0, Fixed4::parse("104.7619"), {}}});
  EXPECT_THROW(breakeven_rate(pfi, psc, {0.10, 0.01}, Compounding::DiscreteAnnual), InvalidParameter);
  EXPECT_THROW(breakeven_rate(pfi, psc, {0.01, 0.10}, Compounding::DiscreteAnnual, {0.0}), InvalidParameter);
}

TEST(Breakeven, CarlisleFittedRootInsideTableFlip) {
  const auto [pfi, psc] = carlisle_fitted();
  const std::vector<double> ends = {0.055, 0.06};
  const auto rows = compare(pfi, psc, ends, Compounding::DiscreteAnnual);
  EXPECT_EQ(verdict(rows[0]).selected, Selection::Psc);
  EXPECT_EQ(verdict(rows[1]).selected, Selection::Pfi);
  EXPECT_EQ(rows[1].npv_pfi(), gbp("173.1"));
  EXPECT_EQ(rows[1].npv_psc(), gbp("174.3"));

  const double r = breakeven_rate(pfi, psc, {0.055, 0.06}, Compounding::DiscreteAnnual, {1e-10});
  EXPECT_GT(r, 0.055);
  EXPECT_LT(r, 0.06);
  // mpmath root of the rounded fitted profiles. Bisection may stop once the
  // difference is under half a unit, about 1e-7 in rate here.
  EXPECT_NEAR(r, 0.0573683147717537, 1e-7);
}

TEST(Breakeven, BisectionGuaranteeProperty) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> late(10, 40);
  std::uniform_int_distribution<std::int64_t> units(1'000'000, 500'000'000);
  for (int i = 0; i < 50; ++i) {
    // PFI pays later and more in nominal terms; a sign flip exists in (0, 0.5).
    const double t = late(rng);
    const auto pv = Fixed4::from_units(units(rng));
    const auto pfi = option(OptionKind::Pfi, {{t, Fixed4::round(pv.to_long_double() * std::pow(1.07L, t)), {}}});
    const auto psc = option(OptionKind::Psc, {{0, pv, {}}});
    const double tol = 1e-8;
    const double r = breakeven_rate(pfi, psc, {0.0, 0.5}, Compounding::DiscreteAnnual, {tol});
    EXPECT_GT(r, 0.0);
    EXPECT_LT(r, 0.5);
    EXPECT_NEAR(r, 0.07, 1e-6);
  }
}

TEST(FitAnnuity, ZeroRateIsEqualSplit) {
  const auto s = fit_annuity(gbp("100"), 0.0, 4, Compounding::DiscreteAnnual);
  ASSERT_EQ(s.entries().size(), 4u);
  for (int t = 0; t < 4; ++t) {
    EXPECT_EQ(s.entries()[t].t, t + 1.0);
    EXPECT_EQ(s.entries()[t].amount, Fixed4::parse("25"));
  }
}

TEST(FitAnnuity, ZeroTargetGivesZeroPayments) {
  for (auto s : {fit_annuity(gbp("0"), 0.05, 7, Compounding::Continuous), fit_annuity(gbp("0"), 0.0, 1, Compounding::DiscreteAnnual)}) {
    for (const auto& e : s.entries()) EXPECT_EQ(e.amount, Fixed4{});
  }
}

TEST(FitAnnuity, Carlisle30YearRoundTrip) {
  const auto s = fit_annuity(gbp("173.1"), 0.06, 30, Compounding::DiscreteAnnual);
  EXPECT_EQ(s.entries().size(), 30u);
  // Level payment 173.1 / a(30, 6%) = 12.57552657..., mpmath.
  EXPECT_EQ(s.entries().front().amount, Fixed4::parse("12.5755"));
  const auto back = npv(s, RateSchedule::flat(0.06), Compounding::DiscreteAnnual);
  EXPECT_LE(std::llabs((back.amount - Fixed4::parse("173.1")).units()), 1);
}

TEST(FitAnnuity, RoundTripProperty) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::int64_t> units(0, 50'000'000'000LL);
  std::uniform_int_distribution<int> horizon(1, 60), r_bp(0, 1500);
  for (int i = 0; i < 300; ++i) {
    const Money target{Fixed4::from_units(units(rng)), "GBP"};
    const double rate = r_bp(rng) / 10000.0;
    const int h = horizon(rng);
    for (auto mode : {Compounding::DiscreteAnnual, Compounding::Continuous}) {
      const auto s = fit_annuity(target, rate, h, mode);
      const auto back = npv(s, RateSchedule::flat(rate), mode);
      EXPECT_LE(std::llabs((back.amount - target.amount).units()), 1) << "rate " << rate << " h " << h;
    }
  }
}

TEST(FitAnnuity, Errors) {
  EXPECT_THROW(fit_annuity(gbp("1"), 0.05, 0, Compounding::DiscreteAnnual), InvalidParameter);
  EXPECT_THROW(fit_annuity(gbp("1"), -0.05, 3, Compounding::DiscreteAnnual), InvalidParameter);
}
