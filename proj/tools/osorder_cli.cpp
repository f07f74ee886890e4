// osorder: compare order statistics under shape classes, map SS regions,
// tabulate exceedance bounds and probe orders numerically.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "osorder/osorder.hpp"

using namespace osorder;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitHolds = 0;
constexpr int kExitError = 1;
constexpr int kExitUndetermined = 2;
constexpr int kExitUsage = 64;

class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Format { Csv, Json };

struct RunConfig {
  std::string format;
  std::string output;
  double quadrature_tol = 1e-12;
  double root_tol = 1e-12;
  double probe_tol = 1e-9;
  std::uint64_t seed = 1;

  Format fmt(Format fallback) const {
    if (format.empty()) return fallback;
    return format == "json" ? Format::Json : Format::Csv;
  }
};

OrderStatSpec parse_spec(const std::string& text, const char* flag) {
  const auto comma = text.find(',');
  auto bad = [&] { return usage_error(std::string(flag) + ": expected i,n with 1 <= i <= n, got '" + text + "'"); };
  if (comma == std::string::npos) throw bad();
  int i = 0, n = 0;
  const char* s = text.data();
  const char* e = s + text.size();
  auto r1 = std::from_chars(s, s + comma, i);
  auto r2 = std::from_chars(s + comma + 1, e, n);
  if (r1.ec != std::errc() || r1.ptr != s + comma || r2.ec != std::errc() || r2.ptr != e) throw bad();
  if (n < 1 || i < 1 || i > n) throw bad();
  return {i, n};
}

const ShapeClass& parse_class(const std::string& s) {
  try {
    return parse_shape_class(s);
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
}

Reference parse_ref(const std::string& s) {
  try {
    return parse_reference(s);
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
}

StochasticOrder parse_ord(const std::string& s) {
  try {
    return parse_order(s);
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) out += ',';
    out += csv_field(fields[k]);
  }
  return out + '\n';
}

std::string dump(const ordered_json& j) { return j.dump(2) + '\n'; }

/// Writes to stdout, or to `path` through a sibling temp file and a rename.
void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text << std::flush;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(cfg.output);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << text;
    out.close();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at '" + target.string() + "'");
  }
}

// compare

struct CompareArgs {
  std::string cls, a, b, order;
  bool with_oracle = false;
  int grid = 200;
};

int cmd_compare(const RunConfig& cfg, const CompareArgs& args) {
  const auto& c = parse_class(args.cls);
  const auto a = parse_spec(args.a, "--a"), b = parse_spec(args.b, "--b");
  const auto order = parse_ord(args.order);
  if (args.with_oracle && args.grid < 50) throw usage_error("--grid must be at least 50");
  SsOptions ss;
  ss.tolerance = cfg.root_tol;

  OrderVerdict v;
  try {
    switch (order) {
      case StochasticOrder::ICV: v = check_icv(c, a, b); break;
      case StochasticOrder::ICX: v = check_icx(c, a, b); break;
      case StochasticOrder::SS:
        if (c.name == ShapeName::DDA) {
          v = check_ss_dda(a, b, ss);
        } else if (c.name == ShapeName::DHRA) {
          v = check_ss_dhra(a, b, ss);
        } else {
          throw unsupported_class("SS check is only available for DDA and DHRA");
        }
        break;
      case StochasticOrder::ST: throw unsupported_class("no class-based check for the usual stochastic order");
    }
  } catch (const unsupported_class& e) {
    throw usage_error(e.what());
  }

  std::optional<OrderProbe> p;
  if (args.with_oracle) {
    ProbeOptions po;
    po.tolerance = cfg.probe_tol;
    po.quadrature_tol = cfg.quadrature_tol;
    p = probe(order, {c.reference, a}, {c.reference, b}, args.grid, po);
  }

  if (cfg.fmt(Format::Json) == Format::Json) {
    ordered_json j = {{"class", std::string(to_string(c.name))},
                      {"reference", std::string(short_name(c.reference))},
                      {"a", json::spec(a)},
                      {"b", json::spec(b)},
                      {"verdict", json::verdict(v)}};
    if (p) j["oracle"] = json::probe(*p);
    emit(cfg, dump(j));
  } else {
    std::vector<std::string> head = {"class", "order", "a", "b", "status", "lhs_witness", "rhs_witness", "condition", "note"};
    std::vector<std::string> row = {std::string(to_string(c.name)), std::string(to_string(order)), to_string(a),
                                    to_string(b), std::string(to_string(v.status)), num(v.lhs_witness),
                                    num(v.rhs_witness), v.condition_name, v.note};
    if (p) {
      head.insert(head.end(), {"oracle_verdict", "oracle_min_margin", "oracle_argmin"});
      row.insert(row.end(), {std::string(to_string(p->verdict)), num(p->min_margin), num(p->argmin)});
    }
    emit(cfg, csv_row(head) + csv_row(row));
  }
  return v.holds() ? kExitHolds : kExitUndetermined;
}

// region

struct RegionArgs {
  std::string cls;
  int n = 0, m = 0;
  bool plot_data = false;
};

int cmd_region(const RunConfig& cfg, const RegionArgs& args) {
  SsFrame frame;
  if (args.cls == "DDA") {
    frame = SsFrame::DDA;
  } else if (args.cls == "DHRA") {
    frame = SsFrame::DHRA;
  } else {
    throw usage_error("region: --class must be DDA or DHRA");
  }
  if (args.n < 1 || args.m < 1) throw usage_error("region: --n and --m must be positive");
  if (args.n > args.m) throw usage_error("region: requires n <= m");
  SsOptions ss;
  ss.tolerance = cfg.root_tol;
  const auto map = region_map(frame, args.n, args.m, ss);
  const int n = args.n, m = args.m;
  const double slope = static_cast<double>(m + 1) / (n + 1);

  if (cfg.fmt(Format::Csv) == Format::Json) {
    auto j = json::region(map);
    if (args.plot_data) {
      ordered_json st = {{"name", "st_boundary"}, {"equation", "j = i + m - n"}};
      st["points"] = ordered_json::array({ordered_json::array({0, m - n}), ordered_json::array({n, m})});
      ordered_json mean = {{"name", "mean_line"}, {"equation", "j = (m+1)/(n+1) i"}};
      mean["points"] = ordered_json::array({ordered_json::array({0.0, 0.0}), ordered_json::array({n, slope * n})});
      j["lines"] = ordered_json::array({std::move(st), std::move(mean)});
    }
    emit(cfg, dump(j));
    return kExitHolds;
  }
  if (!args.plot_data) {
    emit(cfg, region_map_csv(map));
    return kExitHolds;
  }
  // Long format: one series per cell class plus the two boundary lines.
  std::string out = "series,x,y\n";
  for (const auto& c : map.cells) out += csv_row({std::string(to_string(c.cls)), std::to_string(c.i), std::to_string(c.j)});
  for (int i = 0; i <= n; ++i) out += csv_row({"st_boundary", std::to_string(i), std::to_string(i + m - n)});
  for (int i = 0; i <= n; ++i) out += csv_row({"mean_line", std::to_string(i), num(slope * i)});
  emit(cfg, out);
  return kExitHolds;
}

// bounds-table

struct BoundsArgs {
  int n = 0;
  std::vector<std::string> gs;
};

int cmd_bounds_table(const RunConfig& cfg, const BoundsArgs& args) {
  if (args.n < 1) throw usage_error("bounds-table: --n must be at least 1");
  std::vector<Reference> gs;
  if (args.gs.empty()) {
    gs.assign(kTableReferences.begin(), kTableReferences.end());
  } else {
    for (const auto& s : args.gs) gs.push_back(parse_ref(s));
  }
  const auto t = bound_table(args.n, gs);
  emit(cfg, cfg.fmt(Format::Csv) == Format::Json ? dump(json::bound_table(t)) : bound_table_csv(t));
  return kExitHolds;
}

// verify-ss

struct VerifyArgs {
  std::string frame, a, b;
  int grid_points = 10000;
};

int cmd_verify_ss(const RunConfig& cfg, const VerifyArgs& args) {
  const auto a = parse_spec(args.a, "--a"), b = parse_spec(args.b, "--b");
  if (args.frame != "DDA" && args.frame != "DHRA") throw usage_error("verify-ss: --class must be DDA or DHRA");
  if (args.grid_points < 100) throw usage_error("verify-ss: --grid-points must be at least 100");
  SsOptions ss;
  ss.tolerance = cfg.root_tol;
  ss.grid_points = args.grid_points;
  const auto rep = args.frame == "DDA" ? check_ss_dda_report(a, b, ss) : check_ss_dhra_report(a, b, ss);
  if (cfg.fmt(Format::Json) == Format::Json) {
    ordered_json j = {{"class", args.frame}};
    j.update(json::ss_report(rep));
    emit(cfg, dump(j));
  } else {
    std::string out = "u,z,source\n";
    for (const auto& c : rep.candidates) out += csv_row({num(c.u), num(c.z), c.source});
    emit(cfg, out);
  }
  return rep.verdict.holds() ? kExitHolds : kExitUndetermined;
}

// data-interval

struct DataArgs {
  std::string path, lower, upper;
  int i = 0;
};

int cmd_data_interval(const RunConfig& cfg, const DataArgs& args) {
  const auto& lo = parse_class(args.lower);
  const auto& hi = parse_class(args.upper);
  if (args.i < 1) throw usage_error("data-interval: --i must be positive");
  std::ifstream in(args.path);
  if (!in) throw std::runtime_error("cannot read '" + args.path + "'");
  const auto d = read_sample_csv(in);
  if (static_cast<std::size_t>(args.i) > d.size()) {
    throw usage_error("data-interval: --i exceeds the sample size " + std::to_string(d.size()));
  }
  const OrderStatSpec s(args.i, static_cast<int>(d.size()));
  PluginInterval iv;
  try {
    iv = ecdf_plugin_interval(d, s, lo, hi);
  } catch (const infeasible_pair&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
  if (cfg.fmt(Format::Json) == Format::Json) {
    emit(cfg, dump({{"n", s.n()},
                    {"i", s.i()},
                    {"lower_class", std::string(to_string(lo.name))},
                    {"upper_class", std::string(to_string(hi.name))},
                    {"p_lower", json::number(iv.p_lo)},
                    {"p_upper", json::number(iv.p_hi)},
                    {"lo", json::number(iv.lo)},
                    {"hi", json::number(iv.hi)}}));
  } else {
    emit(cfg, csv_row({"n", "i", "lower_class", "upper_class", "p_lower", "p_upper", "lo", "hi"}) +
                  csv_row({std::to_string(s.n()), std::to_string(s.i()), std::string(to_string(lo.name)),
                           std::string(to_string(hi.name)), num(iv.p_lo), num(iv.p_hi), num(iv.lo), num(iv.hi)}));
  }
  return kExitHolds;
}

// probe

struct ProbeArgs {
  std::string g, a, b, order;
  int grid = 200;
  bool mc = false;
  std::size_t samples = 200000;
  std::vector<double> thresholds = {0.5, 1.0, 2.0};
};

int cmd_probe(const RunConfig& cfg, const ProbeArgs& args) {
  const auto g = parse_ref(args.g);
  const auto a = parse_spec(args.a, "--a"), b = parse_spec(args.b, "--b");
  const auto order = parse_ord(args.order);
  if (args.grid < 50) throw usage_error("probe: --grid must be at least 50");
  if (order == StochasticOrder::SS && !has_nonnegative_support(g)) {
    throw usage_error("probe: the SS probe needs a reference with nonnegative support");
  }
  if (args.mc && (order != StochasticOrder::SS || args.samples < 100000)) {
    throw usage_error("probe: --mc applies to --order ss with --samples >= 100000");
  }
  ProbeOptions po;
  po.tolerance = cfg.probe_tol;
  po.quadrature_tol = cfg.quadrature_tol;
  const TransformedOrderStat ta{g, a}, tb{g, b};
  const auto p = probe(order, ta, tb, args.grid, po);
  std::vector<McEstimate> mc;
  std::vector<StarShapedFn> fns;
  if (args.mc) {
    fns = default_star_family(args.thresholds);
    mc = mc_expect_starshaped(ta, tb, fns, args.samples, cfg.seed);
  }
  if (cfg.fmt(Format::Json) == Format::Json) {
    ordered_json j = {{"reference", std::string(short_name(g))}, {"a", json::spec(a)}, {"b", json::spec(b)}};
    j.update(json::probe(p));
    if (args.mc) {
      ordered_json rows = ordered_json::array();
      for (std::size_t k = 0; k < mc.size(); ++k) {
        rows.push_back({{"function", fns[k].label()},
                        {"lhs", json::number(mc[k].lhs)},
                        {"rhs", json::number(mc[k].rhs)},
                        {"se_diff", json::number(mc[k].se_diff)},
                        {"flagged", mc[k].flagged}});
      }
      j["monte_carlo"] = {{"seed", cfg.seed}, {"samples", args.samples}, {"estimates", std::move(rows)}};
    }
    emit(cfg, dump(j));
  } else {
    std::string out = "x,margin\n";
    for (std::size_t k = 0; k < p.x_grid.size(); ++k) out += csv_row({num(p.x_grid[k]), num(p.margins[k])});
    emit(cfg, out);
  }
  return p.verdict == ProbeVerdict::ConsistentWithHolds ? kExitHolds : kExitUndetermined;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic comparison of order statistics under shape classes"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto positive = CLI::PositiveNumber;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output,-o", cfg.output, "Write to this file instead of stdout");
    sub->add_option("--quadrature-tol", cfg.quadrature_tol)->check(positive);
    sub->add_option("--root-tol", cfg.root_tol, "Z >= -root-tol counts as nonnegative")->check(positive);
    sub->add_option("--probe-tol", cfg.probe_tol, "Probe violation threshold")->check(positive);
    sub->add_option("--seed", cfg.seed, "Monte Carlo seed");
  };

  CompareArgs ca;
  auto* compare = app.add_subcommand("compare", "Closed-form order check for X_{i:n} vs X_{j:m}");
  compare->add_option("--class", ca.cls, "Shape class")->required();
  compare->add_option("--a", ca.a, "i,n")->required();
  compare->add_option("--b", ca.b, "j,m")->required();
  compare->add_option("--order", ca.order, "icv, icx or ss")->required();
  compare->add_flag("--with-oracle", ca.with_oracle, "Add the quadrature probe");
  compare->add_option("--grid", ca.grid, "Probe grid size");
  common(compare);

  RegionArgs ra;
  auto* region = app.add_subcommand("region", "Classify every (i, j) cell for fixed n <= m");
  region->add_option("--class", ra.cls, "DDA or DHRA")->required();
  region->add_option("--n", ra.n)->required();
  region->add_option("--m", ra.m)->required();
  region->add_flag("--plot-data", ra.plot_data, "Emit cells and boundary lines as plot series");
  common(region);

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds-table", "Table of p_{i:n}^G");
  bounds->add_option("--n", ba.n)->required();
  bounds->add_option("--g", ba.gs, "References (U, E, L, LL, E-, LL-)")->delimiter(',');
  common(bounds);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify-ss", "Critical-point report for the SS check");
  verify->add_option("--class", va.frame, "DDA or DHRA")->required();
  verify->add_option("--a", va.a, "i,n")->required();
  verify->add_option("--b", va.b, "j,m")->required();
  verify->add_option("--grid-points", va.grid_points, "Dense cross-check grid");
  common(verify);

  DataArgs da;
  auto* data = app.add_subcommand("data-interval", "Plug-in interval for E X_{i:n} from a sample");
  data->add_option("data", da.path, "One-column CSV")->required();
  data->add_option("--i", da.i)->required();
  data->add_option("--lower", da.lower, "Convex-generated class")->required();
  data->add_option("--upper", da.upper, "Concave-generated class")->required();
  common(data);

  ProbeArgs pa;
  auto* probe_cmd = app.add_subcommand("probe", "Quadrature probe of an order between two order statistics");
  probe_cmd->add_option("--g", pa.g, "Reference")->required();
  probe_cmd->add_option("--a", pa.a, "i,n")->required();
  probe_cmd->add_option("--b", pa.b, "j,m")->required();
  probe_cmd->add_option("--order", pa.order, "st, icv, icx or ss")->required();
  probe_cmd->add_option("--grid", pa.grid, "Grid size");
  probe_cmd->add_flag("--mc", pa.mc, "Monte Carlo star-shaped expectations");
  probe_cmd->add_option("--samples", pa.samples);
  probe_cmd->add_option("--thresholds", pa.thresholds)->delimiter(',');
  common(probe_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*compare) return cmd_compare(cfg, ca);
    if (*region) return cmd_region(cfg, ra);
    if (*bounds) return cmd_bounds_table(cfg, ba);
    if (*verify) return cmd_verify_ss(cfg, va);
    if (*data) return cmd_data_interval(cfg, da);
    if (*probe_cmd) return cmd_probe(cfg, pa);
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
