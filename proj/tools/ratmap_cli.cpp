// ratmap: parameter relations, fixed-point oracle and stability-region atlas
// for R(z) = z^n + a/z^n + c.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ratmap/atlas.hpp"
#include "ratmap/io.hpp"
#include "ratmap/oracle.hpp"
#include "ratmap/render.hpp"
#include "ratmap/verify.hpp"

using namespace ratmap;
using json = nlohmann::ordered_json;

namespace {

enum Exit : int {
  kOk = 0,
  kFailed = 1,
  kUsage = 2,
  kUnsupported = 3,
  kValidity = 4,
  kOracleMismatch = 5,
  kIo = 6,
  kBudget = 7,
};

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_argument:
    case ErrorKind::non_finite: return kUsage;
    case ErrorKind::unsupported: return kUnsupported;
    case ErrorKind::validity_gate: return kValidity;
    case ErrorKind::oracle_mismatch: return kOracleMismatch;
    case ErrorKind::io: return kIo;
    case ErrorKind::budget: return kBudget;
    case ErrorKind::pole:
    case ErrorKind::domain:
    case ErrorKind::non_convergence: return kFailed;
  }
  return kFailed;
}

bool parse_doubles(const std::string& text, std::size_t count, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end != item.c_str() + item.size() || !std::isfinite(v)) return false;
    out.push_back(v);
  }
  return out.size() == count && (text.empty() || text.back() != ',');
}

Complex parse_complex(const std::string& text, const char* what) {
  std::vector<double> v;
  if (!parse_doubles(text, 2, v))
    throw Error(ErrorKind::invalid_argument, std::string(what) + ": expected re,im but got '" + text + "'");
  return {v[0], v[1]};
}

Window parse_window(const std::string& text) {
  std::vector<double> v;
  if (!parse_doubles(text, 4, v))
    throw Error(ErrorKind::invalid_argument, "window: expected re0,re1,im0,im1 but got '" + text + "'");
  const Window w{v[0], v[1], v[2], v[3]};
  if (!w.valid()) throw Error(ErrorKind::invalid_argument, "window: empty or inverted bounds");
  return w;
}

std::pair<int, int> parse_resolution(const std::string& text) {
  const auto x = text.find('x');
  int w = 0, h = 0;
  try {
    std::size_t p1 = 0, p2 = 0;
    if (x == std::string::npos) throw std::invalid_argument("missing x");
    const std::string ws = text.substr(0, x), hs = text.substr(x + 1);
    w = std::stoi(ws, &p1);
    h = std::stoi(hs, &p2);
    if (p1 != ws.size() || p2 != hs.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorKind::invalid_argument, "resolution: expected WxH but got '" + text + "'");
  }
  if (w < 1 || h < 1) throw Error(ErrorKind::invalid_argument, "resolution: must be at least 1x1");
  return {w, h};
}

std::string fmt(Complex z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real(), z.imag());
  return buf;
}

json jz(Complex z) { return json::array({z.real(), z.imag()}); }

LocusMode require_mode(const std::string& s) {
  const auto m = parse_locus_mode(s);
  if (!m) throw Error(ErrorKind::invalid_argument, "unknown mode '" + s + "'");
  return *m;
}

// The parameters of the map produced by one relation branch.
MapParams map_for(int n, LocusMode mode, Complex fixed, Complex value) {
  switch (mode) {
    case LocusMode::a_from_c: return MapParams::unchecked(n, value, fixed);
    case LocusMode::c_from_a: return MapParams::unchecked(n, fixed, value);
    case LocusMode::a_zero: return MapParams::unchecked(n, 0.0, value);
    case LocusMode::c_zero: return MapParams::unchecked(n, value, 0.0);
  }
  return MapParams::unchecked(n, 0.0, 0.0);
}

struct Globals {
  bool json = false;
  int threads = 0;
  double classify_tol = 1e-9;
  double oracle_tol = 1e-6;
  double large_min = 10.0;
  double small_max = 0.1;
  double stitch_factor = 10.0;
  std::size_t budget = 4096u * 4096u;
};

struct RelationArgs {
  int n = 0;
  std::string mode;
  std::string fixed = "0,0";
  std::string lambda;
  std::string approx;
  bool numeric = false;
};

struct LocusArgs {
  int n = 0;
  std::string mode;
  std::string fixed = "0,0";
  int samples = 4096;
  int disk_rings = 0;
  int disk_samples = 256;
  std::string out, disk_out, image, window;
  std::string approx;
  bool numeric = false;
  int width = 512, height = 512;
};

struct ScanArgs {
  int n = 0;
  std::string free, fixed = "0,0", window, res = "512x512", out, image;
};

struct VerifyArgs {
  std::vector<int> ns{1, 2, 3, 4};
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
};

RelationOptions relation_options(const Globals& g, const std::string& approx, bool numeric) {
  RelationOptions r;
  r.approx.large_min = g.large_min;
  r.approx.small_max = g.small_max;
  r.allow_numeric = numeric;
  if (!approx.empty()) {
    const auto regime = parse_approx_regime(approx);
    if (!regime) throw Error(ErrorKind::invalid_argument, "--approx: expected large, small or auto");
    r.allow_approx = true;
    r.regime = *regime;
  }
  return r;
}

int cmd_relation(const Globals& g, const RelationArgs& a) {
  const LocusMode mode = require_mode(a.mode);
  const Complex fixed = parse_complex(a.fixed, "--fixed");
  const Complex lambda = parse_complex(a.lambda, "--lambda");
  if (a.n < 1) throw Error(ErrorKind::invalid_argument, "--n must be >= 1");
  RelationOptions opt = relation_options(g, a.approx, a.numeric);
  // c-from-a at n = 4 has no closed form; numeric inversion stands in.
  if (mode == LocusMode::c_from_a && a.n == 4 && !opt.allow_approx) opt.allow_numeric = true;

  const auto eval = evaluate_relation(a.n, mode, fixed, lambda, opt);
  OracleConfig oc;
  oc.classify_tol = g.classify_tol;

  bool mismatch = false;
  json rows = json::array();
  std::ostringstream table;
  table << "n=" << a.n << " mode=" << to_string(mode) << " fixed=" << fmt(fixed)
        << " lambda=" << fmt(lambda) << " route=" << to_string(eval.route) << "\n";
  for (const auto& b : eval.branches) {
    const MapParams p = map_for(a.n, mode, fixed, b.value);
    json row;
    row["k"] = b.k;
    row["xi"] = jz(b.xi);
    row["value"] = jz(b.value);
    row["residual_c_side"] = b.residual_c_side;
    row["residual_a_side"] = b.residual_a_side;
    row["approximate"] = b.approximate;
    std::string status;
    try {
      const auto fps = fixed_points(p, oc);
      const FixedPointRecord* best = nullptr;
      for (const auto& r : fps.points) {
        if (!best) {
          best = &r;
          continue;
        }
        // xi is the fixed point the branch was built around.
        const double d = std::abs(r.z - b.xi), bd = std::abs(best->z - b.xi);
        if (d < bd || (d == bd && std::abs(r.lambda - lambda) < std::abs(best->lambda - lambda))) best = &r;
      }
      if (!best) {
        status = "mismatch: no finite fixed points";
        row["oracle"] = {{"verified", false}};
        if (!b.approximate) mismatch = true;
      } else {
        const double gap = std::abs(best->lambda - lambda);
        const bool ok = gap <= g.oracle_tol * std::max(1.0, std::abs(lambda));
        row["oracle"] = {{"verified", ok},
                         {"z", jz(best->z)},
                         {"lambda", jz(best->lambda)},
                         {"gap", gap},
                         {"classification", to_string(best->classification)}};
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s z=%s lambda=%s gap=%.3g", ok ? "verified" : b.approximate ? "approx-deviation" : "MISMATCH",
                      fmt(best->z).c_str(), fmt(best->lambda).c_str(), gap);
        status = buf;
        if (!ok && !b.approximate) mismatch = true;
      }
    } catch (const Error& e) {
      status = std::string("oracle failed: ") + e.what();
      row["oracle"] = {{"verified", false}, {"error", e.what()}};
      if (!b.approximate) mismatch = true;
    }
    char line[512];
    std::snprintf(line, sizeof line, "  k=%d xi=%s value=%s res_c=%.3g res_a=%.3g%s  %s\n", b.k,
                  fmt(b.xi).c_str(), fmt(b.value).c_str(), b.residual_c_side, b.residual_a_side,
                  b.approximate ? " (approximate)" : "", status.c_str());
    table << line;
    rows.push_back(std::move(row));
  }
  if (g.json) {
    json doc{{"command", "relation"},      {"n", a.n},
             {"mode", to_string(mode)},    {"fixed", jz(fixed)},
             {"lambda", jz(lambda)},       {"route", to_string(eval.route)},
             {"branches", std::move(rows)}, {"oracle_mismatch", mismatch}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << table.str();
  }
  if (mismatch) {
    std::cerr << "ratmap: oracle multiplier mismatch beyond tolerance " << g.oracle_tol << "\n";
    return kOracleMismatch;
  }
  return kOk;
}

int cmd_locus(const Globals& g, const LocusArgs& a) {
  const LocusMode mode = require_mode(a.mode);
  const Complex fixed = parse_complex(a.fixed, "--fixed");
  std::optional<Window> window;
  if (!a.window.empty()) window = parse_window(a.window);
  if (a.n < 1) throw Error(ErrorKind::invalid_argument, "--n must be >= 1");
  if (a.samples < 8) throw Error(ErrorKind::invalid_argument, "--samples must be >= 8");
  if (a.disk_rings < 0) throw Error(ErrorKind::invalid_argument, "--disk-rings must be >= 0");
  if (a.width < 1 || a.height < 1) throw Error(ErrorKind::invalid_argument, "image size must be positive");

  LocusOptions lo;
  lo.relation = relation_options(g, a.approx, a.numeric);
  if (mode == LocusMode::c_from_a && a.n == 4 && !lo.relation.allow_approx) lo.relation.allow_numeric = true;
  lo.stitch_factor = g.stitch_factor;
  lo.window = window;
  lo.threads = g.threads;
  const auto res = boundary_locus(a.n, mode, fixed, a.samples, lo);

  std::vector<PushforwardPoint> disk;
  if (a.disk_rings > 0) {
    PushforwardOptions po;
    po.relation = lo.relation;
    po.threads = g.threads;
    disk = pushforward_disk(a.n, mode, fixed, a.disk_rings, a.disk_samples, po);
  }

  std::vector<Complex> all;
  for (const auto& c : res.curves)
    for (const auto& s : c.samples) all.push_back(s.value);
  for (const auto& p : disk) all.push_back(p.value);
  const Window view = window ? *window : bounding_window(all);

  OutputBatch batch;
  if (!a.out.empty()) batch.stage(a.out, locus_csv(res.curves));
  if (!a.disk_out.empty()) {
    std::map<int, LocusCurve> by_branch;
    for (const auto& p : disk) {
      auto& c = by_branch[p.branch_k];
      c.branch_k = p.branch_k;
      c.samples.push_back({p.lambda, p.value});
    }
    std::vector<LocusCurve> as_curves;
    for (auto& [k, c] : by_branch) as_curves.push_back(std::move(c));
    batch.stage(a.disk_out, locus_csv(as_curves));
  }
  if (!a.image.empty()) {
    Canvas canvas(a.width, a.height, view);
    canvas.axes();
    draw_scatter(canvas, disk);
    draw_curves(canvas, res.curves);
    batch.stage(a.image, canvas.to_ppm());
  }
  batch.commit();

  int closed = 0, exits = 0;
  for (const auto& c : res.curves) {
    closed += c.closed;
    exits += c.window_exits;
  }
  if (g.json) {
    json curves = json::array();
    for (const auto& c : res.curves)
      curves.push_back({{"branch", c.branch_k},
                        {"samples", c.samples.size()},
                        {"closed", c.closed},
                        {"window_exits", c.window_exits}});
    json doc{{"command", "locus"},
             {"n", a.n},
             {"mode", to_string(mode)},
             {"fixed", jz(fixed)},
             {"samples", a.samples},
             {"route", to_string(res.route)},
             {"mixed_routes", res.mixed_routes},
             {"branches", res.curves.size()},
             {"gaps", res.gaps.size()},
             {"stitches", res.stitches},
             {"curves", std::move(curves)},
             {"disk_points", disk.size()},
             {"window", {view.re_min, view.re_max, view.im_min, view.im_max}}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::printf("branches=%zu gaps=%zu stitches=%d closed=%d route=%s disk_points=%zu window=%.6g,%.6g,%.6g,%.6g%s\n",
                res.curves.size(), res.gaps.size(), res.stitches, closed, to_string(res.route),
                disk.size(), view.re_min, view.re_max, view.im_min, view.im_max,
                window && exits > 0 ? (" window_exits=" + std::to_string(exits)).c_str() : "");
  }
  return kOk;
}

int cmd_scan(const Globals& g, const ScanArgs& a) {
  if (a.free != "a" && a.free != "c") throw Error(ErrorKind::invalid_argument, "--free must be a or c");
  const Complex fixed = parse_complex(a.fixed, "--fixed");
  const Window window = parse_window(a.window);
  const auto [w, h] = parse_resolution(a.res);
  if (a.n < 1) throw Error(ErrorKind::invalid_argument, "--n must be >= 1");

  ScanOptions so;
  so.budget = g.budget;
  so.threads = g.threads;
  so.oracle.classify_tol = g.classify_tol;
  const ScanTemplate tmpl{a.n, a.free == "a" ? FreeSlot::a : FreeSlot::c, fixed};
  const auto r = region_scan(tmpl, window, w, h, so);

  const json params{{"n", a.n},
                    {"free", a.free},
                    {"fixed", jz(fixed)},
                    {"classify_tol", g.classify_tol},
                    {"spurious_zero", so.oracle.spurious_zero},
                    {"dedupe_radius", so.oracle.dedupe_radius}};
  OutputBatch batch;
  if (!a.out.empty()) batch.stage(a.out, region_json(r, params).dump() + "\n");
  if (!a.image.empty()) batch.stage(a.image, render_region(r).to_ppm());
  batch.commit();

  const auto inside = r.count(Cell::inside), boundary = r.count(Cell::boundary);
  if (g.json) {
    std::cout << json{{"command", "scan"},
                      {"params", params},
                      {"width", w},
                      {"height", h},
                      {"inside", inside},
                      {"boundary", boundary},
                      {"excluded", r.excluded}}
                     .dump(2)
              << "\n";
  } else {
    std::printf("inside=%zu boundary=%zu excluded=%d cells=%zu\n", inside, boundary, r.excluded, r.cells.size());
  }
  return kOk;
}

int cmd_verify(const Globals& g, const VerifyArgs& a) {
  VerifyConfig cfg;
  cfg.ns = a.ns;
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.threads = g.threads;
  cfg.multiplier_tol = g.oracle_tol;
  const auto suites = verify_all(cfg);
  bool all = true;
  json arr = json::array();
  for (const auto& s : suites) {
    all = all && s.passed;
    if (g.json) {
      arr.push_back({{"suite", s.name},
                     {"passed", s.passed},
                     {"cases", s.cases},
                     {"failures", s.failures},
                     {"worst", s.worst},
                     {"tolerance", s.tolerance},
                     {"detail", s.detail}});
    } else {
      std::printf("%-20s %s  cases=%zu failures=%zu worst=%.3e tol=%.1e%s%s\n", s.name.c_str(),
                  s.passed ? "PASS" : "FAIL", s.cases, s.failures, s.worst, s.tolerance,
                  s.detail.empty() ? "" : "  first failure: ", s.detail.c_str());
    }
  }
  if (g.json) std::cout << json{{"command", "verify"}, {"seed", a.seed}, {"passed", all}, {"suites", arr}}.dump(2) << "\n";
  return all ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameter relations and stability regions for R(z) = z^n + a/z^n + c"};
  app.require_subcommand(1);
  app.fallthrough();
  app.allow_config_extras(false);
  app.set_config("--config", "", "key = value file presetting tolerances and defaults");

  Globals g;
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_option("--threads", g.threads, "worker threads (default: hardware concurrency)")
      ->envname("RATMAP_THREADS")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--classify-tol", g.classify_tol, "band around |lambda| = 1 and 0 for classification")
      ->check(CLI::PositiveNumber);
  app.add_option("--oracle-tol", g.oracle_tol, "relative multiplier tolerance for oracle checks")
      ->check(CLI::PositiveNumber);
  app.add_option("--large-min", g.large_min, "validity ratio required by the large-parameter approximation");
  app.add_option("--small-max", g.small_max, "validity ratio allowed by the small-parameter approximation");
  app.add_option("--stitch-factor", g.stitch_factor, "jump / median step that triggers branch re-stitching")
      ->check(CLI::PositiveNumber);
  app.add_option("--budget", g.budget, "maximum cells per scan");

  RelationArgs ra;
  auto* rel = app.add_subcommand("relation", "parameter values with a fixed point of multiplier lambda");
  rel->add_option("--n", ra.n, "degree n >= 1")->required();
  rel->add_option("--mode", ra.mode, "a-from-c | c-from-a | a-zero | c-zero")->required();
  rel->add_option("--fixed", ra.fixed, "fixed parameter as re,im");
  rel->add_option("--lambda", ra.lambda, "multiplier as re,im")->required();
  rel->add_option("--approx", ra.approx, "asymptotic formulas: large (bare flag), small or auto")
      ->expected(0, 1)
      ->default_str("large");
  rel->add_flag("--numeric", ra.numeric, "numeric inversion where no closed form exists");

  LocusArgs la;
  auto* loc = app.add_subcommand("locus", "boundary curves: image of the unit lambda-circle");
  loc->add_option("--n", la.n, "degree n >= 1")->required();
  loc->add_option("--mode", la.mode, "a-from-c | c-from-a | a-zero | c-zero")->required();
  loc->add_option("--fixed", la.fixed, "fixed parameter as re,im");
  loc->add_option("--samples", la.samples, "boundary samples M >= 8");
  loc->add_option("--disk-rings", la.disk_rings, "also push forward this many lambda-disk rings");
  loc->add_option("--disk-samples", la.disk_samples, "angles per disk ring");
  loc->add_option("--out", la.out, "locus CSV path");
  loc->add_option("--disk-out", la.disk_out, "disk pushforward CSV path");
  loc->add_option("--image,--png-like", la.image, "P6 image path");
  loc->add_option("--window", la.window, "image window re0,re1,im0,im1 (default: fit)");
  loc->add_option("--width", la.width, "image width");
  loc->add_option("--height", la.height, "image height");
  loc->add_option("--approx", la.approx, "asymptotic formulas: large (bare flag), small or auto")
      ->expected(0, 1)
      ->default_str("large");
  loc->add_flag("--numeric", la.numeric, "numeric inversion where no closed form exists");

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "oracle membership raster over a parameter window");
  scan->add_option("--n", sa.n, "degree n >= 1")->required();
  scan->add_option("--free", sa.free, "free parameter: a or c")->required();
  scan->add_option("--fixed", sa.fixed, "the other parameter as re,im");
  scan->add_option("--window", sa.window, "re0,re1,im0,im1")->required();
  scan->add_option("--res", sa.res, "WxH");
  scan->add_option("--out", sa.out, "region JSON path");
  scan->add_option("--image,--png-like", sa.image, "P6 image path");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "run the property suites");
  ver->add_option("--n", va.ns, "degrees to test, e.g. 1,2,3,4")->delimiter(',');
  ver->add_option("--trials", va.trials, "trials per suite");
  ver->add_option("--seed", va.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  // A bare --approx arrives as the default string.
  if (rel->count("--approx") && ra.approx.empty()) ra.approx = "large";
  if (loc->count("--approx") && la.approx.empty()) la.approx = "large";

  try {
    if (*rel) return cmd_relation(g, ra);
    if (*loc) return cmd_locus(g, la);
    if (*scan) return cmd_scan(g, sa);
    if (*ver) return cmd_verify(g, va);
  } catch (const ValidityError& e) {
    std::cerr << "ratmap: " << e.what() << "\n";
    return kValidity;
  } catch (const Error& e) {
    std::cerr << "ratmap: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "ratmap: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
