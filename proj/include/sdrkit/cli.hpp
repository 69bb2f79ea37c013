#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// it can be exercised in-process by tests.

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdrkit/appraisal.hpp"
#include "sdrkit/cashflow.hpp"
#include "sdrkit/decimal.hpp"
#include "sdrkit/error.hpp"
#include "sdrkit/fiscal.hpp"
#include "sdrkit/rates.hpp"
#include "sdrkit/report.hpp"
#include "sdrkit/serialize.hpp"
#include "sdrkit/welfare.hpp"

namespace sdrkit::cli {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (auto field : detail::split(text, ',', static_cast<std::size_t>(-1))) out.push_back(parse_double(detail::trim(field)));
  if (out.empty()) throw ParseError("empty number list");
  return out;
}

/// Breakeven tolerance: explicit flag, then SDRKIT_TOL, then 1e-6.
inline double resolve_tolerance(const std::string& flag) {
  if (!flag.empty()) return parse_double(flag);
  if (const char* env = std::getenv("SDRKIT_TOL"); env && *env) return parse_double(env);
  return BreakevenOptions{}.tol;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Social discount rate toolkit: rates, appraisal, welfare and fiscal diagnostics", "sdrkit"};
  app.require_subcommand(1);
  std::string result;

  // Shared option storage. Numbers are taken as text and parsed strictly so
  // that "3.5%" or locale-formatted input is rejected.
  std::string delta, hazard, mu = "1.0", growth, params_path;
  std::string value_a, value_b, year;
  std::string jurisdiction, schedule_path, rate_text, t_text;
  std::string cashflows_path, currency = "GBP", compounding_text = "discrete";
  std::string pfi_path, psc_path, psc_risk_path, rates_text, format_text = "table", divisor_text = "1";
  std::string bracket_text, tol_text;
  std::string spec_path, frontier_path, mapping_path;
  std::string holdings_path, values_text, fraction_text;
  std::string register_path, basis_text = "accrual", scope_text = "include_off_balance", as_of_text, gdp_text,
      gdp_date_text, threshold_text = "1.5";
  std::string input_path, fixture_name;

  auto load_option = [&](const std::string& path, OptionKind kind, const std::string& risk_path) {
    ProcurementOption o{path, kind, parse_cashflow_csv(read_file(path), currency), std::nullopt};
    if (!risk_path.empty()) o.risk_adjustment = parse_cashflow_csv(read_file(risk_path), currency);
    return o;
  };
  auto load_holdings = [&] {
    if (!values_text.empty()) return parse_number_list(values_text);
    if (!holdings_path.empty()) return parse_holdings(read_file(holdings_path));
    throw ValidationError("one of --holdings or --values is required");
  };

  // rate ------------------------------------------------------------------
  auto* rate = app.add_subcommand("rate", "Construct and look up social discount rates");
  rate->require_subcommand(1);

  auto* stpr_cmd = rate->add_subcommand("stpr", "Ramsey rule: (delta + hazard) + mu * growth");
  stpr_cmd->add_option("--delta", delta, "pure time preference");
  stpr_cmd->add_option("--hazard", hazard, "systemic/mortality hazard L");
  stpr_cmd->add_option("--mu", mu, "elasticity of marginal utility (default 1.0)");
  stpr_cmd->add_option("--growth", growth, "per-capita consumption growth g");
  stpr_cmd->add_option("--params", params_path, "JSON {delta, hazard, mu, growth}");
  stpr_cmd->callback([&] {
    StprParams p;
    if (!params_path.empty()) {
      p = parse_stpr_params(read_file(params_path));
    } else {
      if (delta.empty() || hazard.empty() || growth.empty()) {
        throw ValidationError("--delta, --hazard and --growth are required without --params");
      }
      p = {parse_double(delta), parse_double(hazard), parse_double(mu), parse_double(growth)};
    }
    const double r = stpr(p);
    if (!delta_in_recommended_band(p)) err << "warning: delta outside the recommended band [0, 0.01]\n";
    result += format_fixed(r, 6) + "\n";
  });

  auto* soc_cmd = rate->add_subcommand("soc", "Social opportunity cost rate");
  soc_cmd->add_option("--return", rate_text, "marginal pre-tax return on safe private investment")->required();
  soc_cmd->callback([&] {
    const auto tagged = soc_rate(parse_double(rate_text));
    result += format_fixed(tagged.rate, 6) + " " + std::string(to_string(tagged.method)) + "\n";
  });

  auto* lookup_cmd = rate->add_subcommand("lookup", "Published reference rate");
  lookup_cmd->add_option("--jurisdiction", jurisdiction)->required();
  lookup_cmd->add_option("--year", year)->required();
  lookup_cmd->callback([&] {
    const double y = parse_double(year);
    if (y != static_cast<int>(y)) throw ParseError("year must be an integer");
    const auto rec = lookup_reference_rate(jurisdiction, static_cast<int>(y));
    result += rec.jurisdiction + "," + std::to_string(rec.year) + "," + format_fixed(rec.rate, 6) + "," +
              std::string(to_string(rec.method)) + "\n";
  });

  auto* hazard_cmd = rate->add_subcommand("hazard", "Mortality hazard: deaths / population");
  hazard_cmd->add_option("--deaths", value_a)->required();
  hazard_cmd->add_option("--population", value_b)->required();
  hazard_cmd->callback([&] { result += format_fixed(mortality_hazard(parse_double(value_a), parse_double(value_b)), 6) + "\n"; });

  auto* at_cmd = rate->add_subcommand("at", "Rate in force at time t under a schedule");
  at_cmd->add_option("--schedule", schedule_path)->required();
  at_cmd->add_option("--t", t_text)->required();
  at_cmd->callback([&] {
    result += format_fixed(parse_rate_schedule(read_file(schedule_path)).rate_at(parse_double(t_text)), 6) + "\n";
  });

  // npv -------------------------------------------------------------------
  auto* npv_cmd = app.add_subcommand("npv", "Net present value of a cash-flow CSV");
  npv_cmd->add_option("--cashflows", cashflows_path)->required();
  auto* npv_rate = npv_cmd->add_option("--rate", rate_text, "flat annual rate");
  auto* npv_sched = npv_cmd->add_option("--schedule", schedule_path, "JSON rate schedule");
  npv_rate->excludes(npv_sched);
  npv_cmd->add_option("--compounding", compounding_text, "discrete | continuous");
  npv_cmd->add_option("--currency", currency);
  npv_cmd->callback([&] {
    const auto series = parse_cashflow_csv(read_file(cashflows_path), currency);
    if (rate_text.empty() && schedule_path.empty()) throw ValidationError("one of --rate or --schedule is required");
    const auto schedule = schedule_path.empty() ? RateSchedule::flat(parse_double(rate_text))
                                                : parse_rate_schedule(read_file(schedule_path));
    const Money m = npv(series, schedule, parse_compounding(compounding_text));
    result += m.currency + " " + m.amount.to_string() + "\n";
  });

  // compare ---------------------------------------------------------------
  auto* compare_cmd = app.add_subcommand("compare", "PFI vs PSC cost NPVs across rates");
  compare_cmd->add_option("--pfi", pfi_path)->required();
  compare_cmd->add_option("--psc", psc_path)->required();
  compare_cmd->add_option("--psc-risk", psc_risk_path, "risk adjustment added to the PSC");
  compare_cmd->add_option("--rates", rates_text, "comma-separated decimal rates")->required();
  compare_cmd->add_option("--compounding", compounding_text);
  compare_cmd->add_option("--format", format_text, "table | csv");
  compare_cmd->add_option("--unit-divisor", divisor_text, "table amounts are divided by this");
  compare_cmd->add_option("--currency", currency);
  compare_cmd->callback([&] {
    const auto format = parse_report_format(format_text);
    const auto rates = parse_number_list(rates_text);
    const auto table = compare(load_option(pfi_path, OptionKind::Pfi, {}), load_option(psc_path, OptionKind::Psc, psc_risk_path),
                               rates, parse_compounding(compounding_text));
    result += render_report(table, format, {parse_double(divisor_text)});
  });

  // breakeven -------------------------------------------------------------
  auto* breakeven_cmd = app.add_subcommand("breakeven", "Rate at which PFI and PSC cost NPVs coincide");
  breakeven_cmd->add_option("--pfi", pfi_path)->required();
  breakeven_cmd->add_option("--psc", psc_path)->required();
  breakeven_cmd->add_option("--psc-risk", psc_risk_path);
  breakeven_cmd->add_option("--bracket", bracket_text, "low,high")->required();
  breakeven_cmd->add_option("--compounding", compounding_text);
  breakeven_cmd->add_option("--tol", tol_text, "bracket-width tolerance (default $SDRKIT_TOL or 1e-6)");
  breakeven_cmd->add_option("--currency", currency);
  breakeven_cmd->callback([&] {
    const auto bracket = parse_number_list(bracket_text);
    if (bracket.size() != 2) throw ParseError("--bracket expects exactly two rates");
    const double r = breakeven_rate(load_option(pfi_path, OptionKind::Pfi, {}), load_option(psc_path, OptionKind::Psc, psc_risk_path),
                                    {bracket[0], bracket[1]}, parse_compounding(compounding_text),
                                    {resolve_tolerance(tol_text)});
    result += format_fixed(r, 10) + "\n";
  });

  // swf -------------------------------------------------------------------
  auto* swf_cmd = app.add_subcommand("swf", "Social welfare functions over a utility frontier");
  swf_cmd->require_subcommand(1);

  auto* value_cmd = swf_cmd->add_subcommand("value", "Welfare of one utility pair");
  value_cmd->add_option("--spec", spec_path, "JSON SWF spec")->required();
  value_cmd->add_option("--ua", value_a)->required();
  value_cmd->add_option("--ub", value_b)->required();
  value_cmd->callback([&] {
    const auto w = swf_value(parse_swf_spec(read_file(spec_path)), {parse_double(value_a), parse_double(value_b)});
    result += "value,equal_required\n" + format_fixed(w.value, 6) + "," + (w.equal_required ? "true" : "false") + "\n";
  });

  auto* optimal_cmd = swf_cmd->add_subcommand("optimal", "Welfare-maximizing frontier point (CSV)");
  optimal_cmd->add_option("--frontier", frontier_path, "CSV u_a,u_b")->required();
  optimal_cmd->add_option("--spec", spec_path)->required();
  optimal_cmd->callback([&] {
    const auto p = optimal_point(parse_frontier_csv(read_file(frontier_path)), parse_swf_spec(read_file(spec_path)));
    result += "u_a,u_b\n" + format_fixed(p.u_a, 6) + "," + format_fixed(p.u_b, 6) + "\n";
  });

  auto* classify_cmd = swf_cmd->add_subcommand("classify", "Regime label for a discount rate");
  classify_cmd->add_option("--rate", rate_text)->required();
  classify_cmd->add_option("--mapping", mapping_path, "JSON regime mapping (default built in)");
  classify_cmd->callback([&] {
    const auto mapping = mapping_path.empty() ? RegimeMapping::default_mapping() : parse_regime_mapping(read_file(mapping_path));
    result += std::string(to_string(classify_rate(parse_double(rate_text), mapping))) + "\n";
  });

  // equity ----------------------------------------------------------------
  auto* equity_cmd = app.add_subcommand("equity", "Inequality statistics and income weights");
  equity_cmd->require_subcommand(1);

  auto* gini_cmd = equity_cmd->add_subcommand("gini", "Gini coefficient");
  gini_cmd->add_option("--holdings", holdings_path, "one amount per line");
  gini_cmd->add_option("--values", values_text, "comma-separated amounts");
  gini_cmd->callback([&] { result += format_fixed(gini(load_holdings()), 6) + "\n"; });

  auto* top_cmd = equity_cmd->add_subcommand("topshare", "Share held by the richest fraction");
  top_cmd->add_option("--holdings", holdings_path);
  top_cmd->add_option("--values", values_text);
  top_cmd->add_option("--fraction", fraction_text)->required();
  top_cmd->callback([&] { result += format_fixed(top_share(load_holdings(), parse_double(fraction_text)), 6) + "\n"; });

  auto* muw_cmd = equity_cmd->add_subcommand("muweight", "Relative value of a unit to the richer party");
  muw_cmd->add_option("--ratio", value_a, "rich-to-poor income ratio")->required();
  muw_cmd->add_option("--mu", mu);
  muw_cmd->callback([&] { result += format_fixed(mu_weight(parse_double(value_a), parse_double(mu)), 6) + "\n"; });

  // fiscal ----------------------------------------------------------------
  auto* fiscal_cmd = app.add_subcommand("fiscal", "Debt recognition, debt-to-GDP and danger alerts");
  fiscal_cmd->require_subcommand(1);

  auto* recognize_cmd = fiscal_cmd->add_subcommand("recognize", "Recognized liabilities as of a date");
  recognize_cmd->add_option("--register", register_path)->required();
  recognize_cmd->add_option("--basis", basis_text, "cash | accrual");
  recognize_cmd->add_option("--scope", scope_text, "on_balance_only | include_off_balance");
  recognize_cmd->add_option("--as-of", as_of_text)->required();
  recognize_cmd->callback([&] {
    const Money m = recognized_liabilities(parse_debt_register(read_file(register_path)), parse_basis(basis_text),
                                           parse_date(as_of_text), parse_scope(scope_text));
    result += m.currency + " " + m.amount.to_string() + "\n";
  });

  auto* ratio_cmd = fiscal_cmd->add_subcommand("ratio", "Debt-to-GDP ratio");
  ratio_cmd->add_option("--register", register_path)->required();
  ratio_cmd->add_option("--gdp", gdp_text)->required();
  ratio_cmd->add_option("--gdp-date", gdp_date_text)->required();
  ratio_cmd->add_option("--basis", basis_text);
  ratio_cmd->add_option("--scope", scope_text);
  ratio_cmd->add_option("--as-of", as_of_text)->required();
  ratio_cmd->callback([&] {
    const auto reg = parse_debt_register(read_file(register_path));
    const GdpObservation gdp{parse_date(gdp_date_text), {Fixed4::parse(gdp_text), reg.currency()}};
    result += format_fixed(debt_to_gdp(reg, gdp, parse_scope(scope_text), parse_basis(basis_text), parse_date(as_of_text)), 6) + "\n";
  });

  auto* alert_cmd = fiscal_cmd->add_subcommand("alert", "Danger-zone check (strictly above threshold)");
  alert_cmd->add_option("--ratio", value_a)->required();
  alert_cmd->add_option("--threshold", threshold_text);
  alert_cmd->callback([&] { result += std::string(to_string(danger_alert(parse_double(value_a), parse_double(threshold_text)))) + "\n"; });

  // report ----------------------------------------------------------------
  auto* report_cmd = app.add_subcommand("report", "Render a comparison table");
  auto* report_in = report_cmd->add_option("--input", input_path, "comparison CSV");
  auto* report_fx = report_cmd->add_option("--fixture", fixture_name, "built-in table: carlisle");
  report_in->excludes(report_fx);
  report_cmd->add_option("--format", format_text);
  report_cmd->add_option("--unit-divisor", divisor_text);
  report_cmd->add_option("--currency", currency);
  report_cmd->callback([&] {
    ComparisonTable table;
    if (!fixture_name.empty()) {
      if (fixture_name != "carlisle") throw NotFound("unknown fixture '" + fixture_name + "'");
      table = table1_carlisle();
    } else if (!input_path.empty()) {
      table = parse_comparison_csv(read_file(input_path), currency);
    } else {
      throw ValidationError("one of --input or --fixture is required");
    }
    result += render_report(table, parse_report_format(format_text), {parse_double(divisor_text)});
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "E_PARSE: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << e.code() << ": " << e.what() << "\n";
    return e.computational() ? 2 : 1;
  } catch (const std::exception& e) {
    err << "E_VALIDATE: " << e.what() << "\n";
    return 1;
  }
  out << result;
  return 0;
}

}  // namespace sdrkit::cli
