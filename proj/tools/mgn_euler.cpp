// mgn-euler: exact Euler characteristics of the moduli spaces M_g^n and their
// stable-curve compactifications. Every value is computed in exact rational
// arithmetic and, where two independent routes exist, cross-checked.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mgn/chi.hpp"
#include "mgn/numbers.hpp"
#include "mgn/ordinary_closed.hpp"
#include "mgn/ordinary_open.hpp"
#include "mgn/report.hpp"
#include "mgn/stable_graph.hpp"

using namespace mgn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConsistency = 3;

struct GlobalOpts {
  int xmax = 10, hmax = 6, lmax = 12, ymax = 8;
  int jobs = 0;  // 0 = hardware
  std::string cache_dir;
  bool timings = false;
};

long now_ms() {
  return (long)std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string config_echo(const GlobalOpts& o) {
  return "xmax=" + std::to_string(o.xmax) + " hmax=" + std::to_string(o.hmax) +
         " lmax=" + std::to_string(o.lmax) + " ymax=" + std::to_string(o.ymax);
}

int effective_jobs(const GlobalOpts& o) { return o.jobs > 0 ? o.jobs : 0; }

struct RouteValue {
  std::string route;
  std::string value;
};

std::vector<RouteValue> compute_value(const GlobalOpts& opt, const std::string& kind, int g, int n,
                                      const std::string& route) {
  std::vector<RouteValue> out;
  int jobs = effective_jobs(opt);
  if (jobs == 0) jobs = 2;
  bool all = route == "all";
  if (kind == "chi-open") {
    out.push_back({"formula", chi_open(g, n).str()});
  } else if (kind == "chi-bar") {
    if (all || route == "graphsum") out.push_back({"graphsum", chi_bar_graphsum(g, n, jobs).str()});
    if (all || route == "wick")
      out.push_back({"wick", chi_bar_wick(g, n, opt.xmax, opt.hmax).str()});
    if (route == "default") out.push_back({"graphsum", chi_bar_graphsum(g, n, jobs).str()});
  } else if (kind == "e-open") {
    out.push_back({"branch-data", e_open(g, n + 1).get_str()});
  } else if (kind == "e-bar") {
    if (all || route == "direct") out.push_back({"direct", e_bar_direct(g, n).get_str()});
    if (all || route == "genfun") {
      if (n == 0) {
        out.push_back({"genfun", u_g_resolve(g, opt.lmax).e_bar.at(g).get_str()});
      } else {
        out.push_back({"genfun", e_bar_genfun(g, n, opt.lmax, opt.ymax).get_str()});
      }
    }
    if (route == "default") {
      int W = 2 * g - 2 + n;
      if (n >= 1 && W <= opt.lmax && n <= opt.ymax && W > 8)
        out.push_back({"genfun", e_bar_genfun(g, n, opt.lmax, opt.ymax).get_str()});
      else
        out.push_back({"direct", e_bar_direct(g, n).get_str()});
    }
  } else {
    throw std::invalid_argument("unknown kind: " + kind);
  }
  return out;
}

int cmd_value(const GlobalOpts& opt, const std::string& kind, int g, int n,
              const std::string& route) {
  auto values = compute_value(opt, kind, g, n, route);
  for (const auto& rv : values) {
    if (values.size() > 1)
      std::cout << rv.route << ": " << rv.value << "\n";
    else
      std::cout << rv.value << "\n";
  }
  for (size_t i = 1; i < values.size(); ++i)
    if (values[i].value != values[0].value) {
      std::cerr << "route mismatch for " << kind << " " << g << " " << n << "\n";
      return kExitConsistency;
    }
  return kExitOk;
}

int cmd_table(const GlobalOpts& opt, const std::string& which, const std::string& format,
              const std::string& out_path, int direct_max_weight) {
  int jobs = effective_jobs(opt);
  if (jobs == 0) jobs = 2;
  ReportDocument doc;
  doc.config = config_echo(opt);
  const TableFixture& fix = (which == "table1") ? table1_fixture() : table2_fixture();
  fix.verify_checksum();

  ResultCache cache(ResultCache::resolve_dir(opt.cache_dir));
  int mismatches = 0;
  auto add_cell = [&](int g, int n, const std::string& kind, const std::string& value,
                      const std::string& route, long ms) {
    doc.cells.push_back({g, n, kind, value, route, opt.timings ? ms : 0});
    const std::string& want = fix.at(g, n);
    bool ok = (want.find('E') != std::string::npos)
                  ? sci5(Integer(value)) == want
                  : value == want;
    if (!ok) {
      std::cerr << "fixture mismatch at (" << g << "," << n << "): computed " << value
                << ", paper prints " << want << "\n";
      ++mismatches;
    }
  };

  if (which == "table1") {
    long t0 = now_ms();
    Table1 t = table1_compute(jobs);
    long ms = now_ms() - t0;
    for (int g = 3; g <= 10; ++g)
      for (int n = 1; n <= 8; ++n)
        add_cell(g, n, "e-open", t.values[g - 3][n - 1].get_str(), "branch-data", ms);
  } else if (which == "table2") {
    for (int g = 2; g <= 4; ++g)
      for (int n = 0; n <= 6; ++n) {
        std::string route = (n == 0) ? "direct+ledger" : "genfun";
        if (n >= 1 && 2 * g - 2 + n <= direct_max_weight) route = "genfun+direct";
        if (auto hit = cache.get("e-bar", g, n, route)) {
          add_cell(g, n, "e-bar", *hit, route, 0);
          continue;
        }
        long t0 = now_ms();
        Integer v;
        if (n == 0) {
          v = u_g_resolve(g, opt.lmax).e_bar.at(g);
        } else {
          v = e_bar_genfun(g, n, opt.lmax, std::max(opt.ymax, 6));
          if (2 * g - 2 + n <= direct_max_weight) {
            Integer dv = e_bar_direct(g, n);
            if (dv != v) throw consistency_error("table2 route mismatch");
          }
        }
        long ms = now_ms() - t0;
        cache.put("e-bar", g, n, route, v.get_str());
        add_cell(g, n, "e-bar", v.get_str(), route, ms);
      }
    cache.save();
  } else {
    std::cerr << "unknown table: " << which << "\n";
    return kExitUsage;
  }

  std::string rendered;
  if (format == "csv") rendered = render_csv(doc);
  else if (format == "json") rendered = render_json(doc);
  else if (format == "md") rendered = render_markdown(doc);
  else {
    std::cerr << "unknown format: " << format << "\n";
    return kExitUsage;
  }
  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(out_path);
    out << rendered;
  }
  if (mismatches > 0) {
    std::cerr << which << ": " << mismatches << " cell(s) differ from the embedded paper table\n";
    return kExitConsistency;
  }
  return kExitOk;
}

int cmd_verify(const GlobalOpts& opt, const std::string& level) {
  VerifyOptions vo;
  vo.full = (level == "full");
  vo.jobs = effective_jobs(opt) == 0 ? 2 : effective_jobs(opt);
  vo.progress = true;
  VerifyResult res = run_verify(vo);
  std::cout << (vo.full ? "verify full: " : "verify quick: ") << res.passed.size() << " passed, "
            << res.failures.size() << " failed\n";
  for (const auto& f : res.failures) std::cout << "FAILED: " << f << "\n";
  return res.ok ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Euler characteristics of moduli of curves"};
  app.set_version_flag("--version", std::string(kEngineVersion));
  GlobalOpts opt;
  app.add_option("--xmax", opt.xmax, "x-window for the bivariate series");
  app.add_option("--hmax", opt.hmax, "hbar-window for the bivariate series");
  app.add_option("--lmax", opt.lmax, "lambda-window for the weighted series");
  app.add_option("--ymax", opt.ymax, "y-window for the weighted series");
  app.add_option("--jobs", opt.jobs, "worker threads (0 = hardware)");
  app.add_option("--cache-dir", opt.cache_dir, "result cache directory (or MGN_EULER_CACHE)");
  app.add_flag("--timings", opt.timings, "include wall times in reports");

  std::string kind, route = "default";
  int g = 0, n = 0;
  auto* value = app.add_subcommand("value", "compute a single value");
  value->add_option("kind", kind, "chi-open | chi-bar | e-open | e-bar")->required();
  value->add_option("g", g)->required();
  value->add_option("n", n)->required();
  value->add_option("--route", route, "route: default | graphsum | wick | direct | genfun | all");
  bool all_routes = false;
  value->add_flag("--all-routes", all_routes, "compute every route and fail on mismatch");

  std::string format = "csv", out_path;
  int direct_cap = 8;
  auto* table1 = app.add_subcommand("table1", "reproduce the open-moduli table (g 3..10, n 1..8)");
  table1->add_option("--format", format, "csv | json | md");
  table1->add_option("--out", out_path, "write to file instead of stdout");
  auto* table2 = app.add_subcommand("table2", "reproduce the compactified table (g 2..4, n 0..6)");
  table2->add_option("--format", format, "csv | json | md");
  table2->add_option("--out", out_path, "write to file instead of stdout");
  table2->add_option("--direct-max-weight", direct_cap,
                     "run the direct route on cells with 2g-2+n up to this");

  std::string level = "quick";
  auto* verify = app.add_subcommand("verify", "run the verification gate");
  verify->add_option("level", level, "quick | full");

  int gg = 0, gn = 0, gbetti = kAllBetti;
  std::string emit_path;
  auto* graphs = app.add_subcommand("graphs", "emit the stable-graph catalog as JSON");
  graphs->add_option("g", gg)->required();
  graphs->add_option("n", gn)->required();
  graphs->add_option("--betti", gbetti, "restrict to classes with this first Betti number");
  graphs->add_option("--out", emit_path, "write to file instead of stdout");

  int cg = 0, cn = 0;
  std::string cover_path;
  auto* covers = app.add_subcommand("cover-data", "emit the orbifold cover data audit dump");
  covers->add_option("g", cg)->required();
  covers->add_option("n", cn)->required();
  covers->add_option("--out", cover_path, "write to file instead of stdout");

  app.require_subcommand(1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (value->parsed()) {
      if (all_routes) route = "all";
      return cmd_value(opt, kind, g, n, route);
    }
    if (table1->parsed()) return cmd_table(opt, "table1", format, out_path, direct_cap);
    if (table2->parsed()) return cmd_table(opt, "table2", format, out_path, direct_cap);
    if (verify->parsed()) {
      if (level != "quick" && level != "full") {
        std::cerr << "verify level must be quick or full\n";
        return kExitUsage;
      }
      return cmd_verify(opt, level);
    }
    if (graphs->parsed()) {
      std::string json = graph_catalog_json(gg, gn, gbetti);
      if (emit_path.empty()) std::cout << json << "\n";
      else std::ofstream(emit_path) << json << "\n";
      return kExitOk;
    }
    if (covers->parsed()) {
      std::string json = cover_data_json(cg, cn);
      if (cover_path.empty()) std::cout << json << "\n";
      else std::ofstream(cover_path) << json << "\n";
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return kExitUsage;
  } catch (const consistency_error& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return kExitConsistency;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConsistency;
  }
  return kExitUsage;
}
