#pragma once

// Structured-text (JSON) documents and the CSV formats that are not tied to
// a single module's parsing operation.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sdrkit/appraisal.hpp"
#include "sdrkit/cashflow.hpp"
#include "sdrkit/decimal.hpp"
#include "sdrkit/error.hpp"
#include "sdrkit/fiscal.hpp"
#include "sdrkit/rates.hpp"
#include "sdrkit/welfare.hpp"

namespace sdrkit {

using Json = nlohmann::ordered_json;

namespace detail {

template <class F>
auto with_json(std::string_view text, F&& f) {
  try {
    return f(Json::parse(text));
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  } catch (const Json::type_error& e) {
    throw ParseError(std::string("unexpected JSON type: ") + e.what());
  } catch (const Json::out_of_range& e) {
    throw ParseError(std::string("missing JSON field: ") + e.what());
  }
}

inline double number_field(const Json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

// Amounts may be written as JSON strings ("100.25") or numbers (100.25); both
// are converted through their decimal text so no binary rounding leaks in.
inline Fixed4 amount_field(const Json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_string()) return Fixed4::parse(v.get<std::string>());
  if (v.is_number()) return Fixed4::parse(v.dump());
  throw ParseError(std::string("field '") + key + "' must be a decimal string or number");
}

}  // namespace detail

// --- rate schedule: {"segments": [{"start_year": 0, "rate": 0.035}, ...]}

inline Json to_json(const RateSchedule& s) {
  Json segments = Json::array();
  for (const auto& seg : s.segments()) segments.push_back({{"start_year", seg.start_year}, {"rate", seg.rate}});
  return {{"segments", segments}};
}

/// Accepts the documented object form or a bare array of segments.
inline RateSchedule parse_rate_schedule(std::string_view text) {
  return detail::with_json(text, [](const Json& j) {
    const Json& arr = j.is_array() ? j : j.at("segments");
    if (!arr.is_array()) throw ParseError("'segments' must be an array");
    std::vector<RateSchedule::Segment> segs;
    for (const auto& e : arr) segs.push_back({detail::number_field(e, "start_year"), detail::number_field(e, "rate")});
    return RateSchedule(std::move(segs));
  });
}

// --- STPR parameters: {"delta", "hazard", "mu", "growth"}; mu defaults to 1.0

inline Json to_json(const StprParams& p) {
  return {{"delta", p.delta}, {"hazard", p.hazard}, {"mu", p.mu}, {"growth", p.growth}};
}

inline StprParams parse_stpr_params(std::string_view text) {
  return detail::with_json(text, [](const Json& j) {
    StprParams p;
    p.delta = detail::number_field(j, "delta");
    p.hazard = detail::number_field(j, "hazard");
    if (j.contains("mu")) p.mu = detail::number_field(j, "mu");
    p.growth = detail::number_field(j, "growth");
    validate(p);
    return p;
  });
}

// --- SWF spec: {"family": "utilitarian"|"ces"|"rawlsian"|"egalitarian",
//               "epsilon", "weight_a", "weight_b"}

inline Json to_json(const SwfSpec& spec) {
  Json j = {{"family", family_name(spec)}};
  if (const auto* u = std::get_if<swf::Utilitarian>(&spec)) {
    j["weight_a"] = u->weight_a;
    j["weight_b"] = u->weight_b;
  } else if (const auto* c = std::get_if<swf::Ces>(&spec)) {
    j["epsilon"] = c->epsilon;
    j["weight_a"] = c->weight_a;
    j["weight_b"] = c->weight_b;
  }
  return j;
}

inline SwfSpec parse_swf_spec(std::string_view text) {
  return detail::with_json(text, [](const Json& j) -> SwfSpec {
    const auto family = j.at("family").get<std::string>();
    auto weight = [&](const char* key) { return j.contains(key) ? detail::number_field(j, key) : 1.0; };
    SwfSpec spec;
    if (family == "utilitarian") {
      spec = swf::Utilitarian{weight("weight_a"), weight("weight_b")};
    } else if (family == "ces") {
      spec = swf::Ces{detail::number_field(j, "epsilon"), weight("weight_a"), weight("weight_b")};
    } else if (family == "rawlsian") {
      spec = swf::Rawlsian{};
    } else if (family == "egalitarian") {
      spec = swf::Egalitarian{};
    } else {
      throw ParseError("unknown SWF family '" + family + "'");
    }
    validate(spec);
    return spec;
  });
}

// --- regime mapping: {"thresholds": [{"min_rate": 0, "label": "..."}, ...]}

inline Json to_json(const RegimeMapping& m) {
  Json arr = Json::array();
  for (const auto& t : m.thresholds()) arr.push_back({{"min_rate", t.min_rate}, {"label", to_string(t.label)}});
  return {{"thresholds", arr}};
}

inline RegimeMapping parse_regime_mapping(std::string_view text) {
  return detail::with_json(text, [](const Json& j) {
    std::vector<RegimeMapping::Threshold> ts;
    for (const auto& t : j.at("thresholds")) {
      ts.push_back({detail::number_field(t, "min_rate"), parse_regime(t.at("label").get<std::string>())});
    }
    return RegimeMapping(std::move(ts));
  });
}

// --- debt register

inline Json to_json(const DebtRegister& reg) {
  Json entries = Json::array();
  for (const auto& e : reg.entries()) {
    Json payments = Json::array();
    for (const auto& p : e.payments) payments.push_back({{"date", format_date(p.date)}, {"amount", p.amount.to_string()}});
    entries.push_back({{"id", e.id},
                       {"amount", e.amount.to_string()},
                       {"incurred", format_date(e.incurred)},
                       {"balance_sheet", to_string(e.balance_sheet)},
                       {"contingent", e.contingent},
                       {"payments", payments}});
  }
  return {{"currency", reg.currency()}, {"entries", entries}};
}

inline DebtRegister parse_debt_register(std::string_view text) {
  return detail::with_json(text, [](const Json& j) {
    std::string currency = j.contains("currency") ? j.at("currency").get<std::string>() : "GBP";
    std::vector<LedgerEntry> entries;
    for (const auto& e : j.at("entries")) {
      LedgerEntry le;
      le.id = e.at("id").get<std::string>();
      le.amount = detail::amount_field(e, "amount");
      le.incurred = parse_date(e.at("incurred").get<std::string>());
      le.balance_sheet = parse_balance_sheet(e.at("balance_sheet").get<std::string>());
      le.contingent = e.contains("contingent") ? e.at("contingent").get<bool>() : false;
      if (e.contains("payments")) {
        for (const auto& p : e.at("payments")) {
          le.payments.push_back({parse_date(p.at("date").get<std::string>()), detail::amount_field(p, "amount")});
        }
      }
      entries.push_back(std::move(le));
    }
    return DebtRegister(std::move(currency), std::move(entries));
  });
}

// --- frontier CSV: header `u_a,u_b`

inline UtilityFrontier parse_frontier_csv(std::string_view text) {
  bool have_header = false;
  std::vector<UtilityPair> points;
  detail::for_each_data_line(text, [&](std::size_t line_no, std::string_view line) {
    if (!have_header) {
      if (line != "u_a,u_b") throw ParseError("expected header 'u_a,u_b'", line_no);
      have_header = true;
      return;
    }
    const auto fields = detail::split(line, ',', 3);
    if (fields.size() != 2) throw ParseError("expected 2 fields", line_no);
    try {
      points.push_back({parse_double(detail::trim(fields[0])), parse_double(detail::trim(fields[1]))});
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  });
  if (!have_header) throw ParseError("missing header 'u_a,u_b'", 1);
  return UtilityFrontier(std::move(points));
}

inline std::string to_csv(const UtilityFrontier& f) {
  std::string out = "u_a,u_b\n";
  for (const auto& p : f.points()) out += format_shortest(p.u_a) + "," + format_shortest(p.u_b) + "\n";
  return out;
}

// --- holdings: one non-negative number per line, optional `holding` header

inline std::vector<double> parse_holdings(std::string_view text) {
  std::vector<double> out;
  bool first = true;
  detail::for_each_data_line(text, [&](std::size_t line_no, std::string_view line) {
    if (first && (line == "holding" || line == "amount")) {
      first = false;
      return;
    }
    first = false;
    try {
      out.push_back(parse_double(line));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  });
  return out;
}

// --- comparison table CSV: header `rate,npv_pfi,npv_psc,difference_in_favour_of_pfi`

inline constexpr std::string_view kComparisonCsvHeader = "rate,npv_pfi,npv_psc,difference_in_favour_of_pfi";

/// Reads a comparison table back. The difference column is recomputed and
/// must match the file exactly.
inline ComparisonTable parse_comparison_csv(std::string_view text, const std::string& currency = "GBP") {
  bool have_header = false;
  ComparisonTable table;
  detail::for_each_data_line(text, [&](std::size_t line_no, std::string_view line) {
    if (!have_header) {
      if (line != kComparisonCsvHeader) throw ParseError("expected header '" + std::string(kComparisonCsvHeader) + "'", line_no);
      have_header = true;
      return;
    }
    const auto f = detail::split(line, ',', 5);
    if (f.size() < 3 || f.size() > 4) throw ParseError("expected 3 or 4 fields", line_no);
    double rate = 0;
    Fixed4 pfi, psc;
    try {
      rate = parse_double(detail::trim(f[0]));
      pfi = Fixed4::parse(detail::trim(f[1]));
      psc = Fixed4::parse(detail::trim(f[2]));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    ComparisonRow row(rate, {pfi, currency}, {psc, currency});
    if (f.size() == 4) {
      Fixed4 diff;
      try {
        diff = Fixed4::parse(detail::trim(f[3]));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), line_no);
      }
      if (diff != row.difference_in_favour_of_pfi().amount) {
        throw ValidationError("line " + std::to_string(line_no) + ": difference must equal npv_psc - npv_pfi");
      }
    }
    table.push_back(std::move(row));
  });
  if (!have_header) throw ParseError("missing comparison table header", 1);
  return table;
}

}  // namespace sdrkit
