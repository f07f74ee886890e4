#pragma once

// JSON renderings of verdicts, probes, region maps and bound tables.
// Keys keep insertion order; non-finite numbers become "inf" / "-inf" / "nan".

#include <cmath>
#include <string>

#include "json.hpp"
#include "osorder/bounds.hpp"
#include "osorder/conditions.hpp"
#include "osorder/oracle.hpp"
#include "osorder/ssverify.hpp"

namespace osorder::json {

using ordered_json = nlohmann::ordered_json;

inline ordered_json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline ordered_json spec(const OrderStatSpec& s) { return {{"i", s.i()}, {"n", s.n()}}; }

inline ordered_json verdict(const OrderVerdict& v) {
  return {{"order", std::string(to_string(v.order))},
          {"status", std::string(to_string(v.status))},
          {"condition", v.condition_name},
          {"lhs_witness", number(v.lhs_witness)},
          {"rhs_witness", number(v.rhs_witness)},
          {"note", v.note}};
}

inline ordered_json probe(const OrderProbe& p, bool with_grid = true) {
  ordered_json j = {{"order", std::string(to_string(p.order))},
                    {"verdict", std::string(to_string(p.verdict))},
                    {"min_margin", number(p.min_margin)},
                    {"argmin", number(p.argmin)},
                    {"grid_size", p.x_grid.size()}};
  if (with_grid) {
    ordered_json grid = ordered_json::array(), margins = ordered_json::array();
    for (double x : p.x_grid) grid.push_back(number(x));
    for (double m : p.margins) margins.push_back(number(m));
    j["x_grid"] = std::move(grid);
    j["margins"] = std::move(margins);
  }
  return j;
}

inline ordered_json roots(const RootSet& r) {
  ordered_json j = {{"a", number(r.a)}, {"b", number(r.b)}, {"c", number(r.c)},
                    {"regime", std::string(to_string(r.regime))}};
  ordered_json xs = ordered_json::array();
  for (double x : r.roots) xs.push_back(number(x));
  j["roots"] = std::move(xs);
  return j;
}

inline ordered_json ss_report(const SsReport& r) {
  ordered_json cands = ordered_json::array();
  for (const auto& c : r.candidates) cands.push_back({{"u", number(c.u)}, {"z", number(c.z)}, {"source", c.source}});
  ordered_json j = {{"a", spec(r.a)},
                    {"b", spec(r.b)},
                    {"critical_roots", roots(r.primary_roots)}};
  if (r.alternative_roots) j["alternative_roots"] = roots(*r.alternative_roots);
  j["candidates"] = std::move(cands);
  j["candidate_min"] = number(r.candidate_min);
  j["candidate_argmin"] = number(r.candidate_argmin);
  j["grid_min"] = number(r.grid_min);
  j["grid_argmin"] = number(r.grid_argmin);
  j["cross_check_agrees"] = r.cross_check_agrees;
  j["verdict"] = verdict(r.verdict);
  return j;
}

inline ordered_json region(const RegionMap& r) {
  ordered_json cells = ordered_json::array();
  for (const auto& c : r.cells) cells.push_back({{"i", c.i}, {"j", c.j}, {"class", std::string(to_string(c.cls))}});
  return {{"frame", std::string(to_string(r.frame))}, {"n", r.n}, {"m", r.m}, {"cells", std::move(cells)}};
}

inline ordered_json bound_table(const BoundTable& t) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < t.gs.size(); ++r) {
    ordered_json vals = ordered_json::array();
    for (double p : t.rows[r]) vals.push_back(number(p));
    rows.push_back({{"G", std::string(short_name(t.gs[r]))}, {"p", std::move(vals)}});
  }
  return {{"n", t.n}, {"rows", std::move(rows)}};
}

}  // namespace osorder::json
