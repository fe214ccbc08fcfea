#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ratmap/complex.hpp"
#include "ratmap/oracle.hpp"
#include "ratmap/parallel.hpp"
#include "ratmap/relations.hpp"

// Parameter-plane pictures of the stability regions: boundary curves as the
// image of the unit lambda-circle, filled regions as the image of the disk,
// and an independent membership raster from the fixed-point oracle.

namespace ratmap {

enum class LocusMode { a_from_c, c_from_a, a_zero, c_zero };

inline const char* to_string(LocusMode m) {
  switch (m) {
    case LocusMode::a_from_c: return "a-from-c";
    case LocusMode::c_from_a: return "c-from-a";
    case LocusMode::a_zero: return "a-zero";
    case LocusMode::c_zero: return "c-zero";
  }
  return "unknown";
}

inline std::optional<LocusMode> parse_locus_mode(const std::string& s) {
  if (s == "a-from-c") return LocusMode::a_from_c;
  if (s == "c-from-a") return LocusMode::c_from_a;
  if (s == "a-zero") return LocusMode::a_zero;
  if (s == "c-zero") return LocusMode::c_zero;
  return std::nullopt;
}

/// How a relation was evaluated.
enum class Route { exact, approx_large, approx_small, numeric };

inline const char* to_string(Route r) {
  switch (r) {
    case Route::exact: return "exact";
    case Route::approx_large: return "approx-large";
    case Route::approx_small: return "approx-small";
    case Route::numeric: return "numeric";
  }
  return "unknown";
}

struct Window {
  double re_min = -1.0, re_max = 1.0, im_min = -1.0, im_max = 1.0;

  bool valid() const {
    return std::isfinite(re_min) && std::isfinite(re_max) && std::isfinite(im_min) &&
           std::isfinite(im_max) && re_max > re_min && im_max > im_min;
  }
  bool contains(Complex z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
};

/// Which asymptotic formulas --approx uses. automatic picks by validity ratio.
enum class ApproxRegime { automatic, large, small };

inline std::optional<ApproxRegime> parse_approx_regime(const std::string& s) {
  if (s == "auto") return ApproxRegime::automatic;
  if (s == "large") return ApproxRegime::large;
  if (s == "small") return ApproxRegime::small;
  return std::nullopt;
}

struct RelationOptions {
  bool allow_approx = false;
  ApproxRegime regime = ApproxRegime::automatic;
  bool allow_numeric = false;
  ApproxConfig approx{};
};

struct RelationEval {
  std::vector<BranchedParameter> branches;
  Route route = Route::exact;
};

/// Dispatches (n, mode) to the closed form, the asymptotic formulas or the
/// numeric inversion. `fixed` is c for a_from_c, a for c_from_a, ignored otherwise.
inline RelationEval evaluate_relation(int n, LocusMode mode, Complex fixed, Complex lambda,
                                      const RelationOptions& opt = {}) {
  RelationEval out;
  switch (mode) {
    case LocusMode::a_zero:
      out.branches = special_a_zero(n, lambda);
      return out;
    case LocusMode::c_zero:
      out.branches = special_c_zero(n, lambda);
      return out;
    case LocusMode::a_from_c:
      if (n >= 1 && n <= 4) {
        out.branches = a_from_c(n, fixed, lambda);
        return out;
      }
      if (opt.allow_approx && n >= 5) {
        const double ratio = c_validity_ratio(n, fixed, lambda);
        const bool small = opt.regime == ApproxRegime::automatic ? ratio <= opt.approx.small_max
                                                                 : opt.regime == ApproxRegime::small;
        if (small) {
          out.branches = {approx_a_from_c_small(n, fixed, lambda, opt.approx)};
          out.route = Route::approx_small;
        } else {
          out.branches = approx_a_from_c_large(n, fixed, lambda, opt.approx);
          out.route = Route::approx_large;
        }
        return out;
      }
      if (opt.allow_numeric) {
        out.branches = a_from_c_numeric(n, fixed, lambda);
        out.route = Route::numeric;
        return out;
      }
      throw Error(ErrorKind::unsupported,
                  "a-from-c has no closed form for n = " + std::to_string(n) + " (use --approx)");
    case LocusMode::c_from_a:
      if (n >= 1 && n <= 3) {
        out.branches = c_from_a(n, fixed, lambda);
        return out;
      }
      if (opt.allow_approx && n >= 4) {
        const double ratio = a_validity_ratio(n, fixed, lambda);
        const bool small = opt.regime == ApproxRegime::automatic
                               ? ratio <= opt.approx.small_max && lambda != Complex{0.0, 0.0}
                               : opt.regime == ApproxRegime::small;
        if (small) {
          out.branches = {approx_c_from_a_small(n, fixed, lambda, opt.approx)};
          out.route = Route::approx_small;
        } else {
          out.branches = approx_c_from_a_large(n, fixed, lambda, opt.approx);
          out.route = Route::approx_large;
        }
        return out;
      }
      if (opt.allow_numeric) {
        out.branches = c_from_a_numeric(n, fixed, lambda);
        out.route = Route::numeric;
        return out;
      }
      throw Error(ErrorKind::unsupported,
                  "c-from-a has no closed form for n = " + std::to_string(n) + " (use --approx)");
  }
  throw Error(ErrorKind::unsupported, "unknown mode");
}

struct LocusSample {
  Complex lambda;
  Complex value;
};

struct LocusCurve {
  int branch_k = 0;
  std::vector<LocusSample> samples;
  bool closed = false;
  int window_exits = 0;  // samples outside the requested window, if any
};

struct LocusResult {
  std::vector<LocusCurve> curves;
  std::vector<int> gaps;  // sample indices j that produced no usable values
  int stitches = 0;       // samples where the solver order was permuted to keep curves continuous
  Route route = Route::exact;
  bool mixed_routes = false;
};

struct LocusOptions {
  RelationOptions relation{};
  double stitch_factor = 10.0;
  std::optional<Window> window;
  int threads = 0;
};

namespace detail {

// Permutation perm minimizing sum |cur[perm[k]] - prev[k]|.
inline std::vector<int> best_assignment(const std::vector<Complex>& prev,
                                        const std::vector<Complex>& cur) {
  const int m = static_cast<int>(prev.size());
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  auto cost = [&](const std::vector<int>& p) {
    double s = 0.0;
    for (int k = 0; k < m; ++k) s += std::abs(cur[p[k]] - prev[k]);
    return s;
  };
  if (m <= 7) {
    std::vector<int> best = perm;
    double best_cost = cost(perm);
    while (std::next_permutation(perm.begin(), perm.end())) {
      const double c = cost(perm);
      if (c < best_cost) {
        best_cost = c;
        best = perm;
      }
    }
    return best;
  }
  // Greedy on globally sorted pair distances for larger branch counts.
  std::vector<std::tuple<double, int, int>> pairs;
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) pairs.emplace_back(std::abs(cur[j] - prev[k]), k, j);
  std::sort(pairs.begin(), pairs.end());
  std::vector<bool> used_prev(m, false), used_cur(m, false);
  for (auto [d, k, j] : pairs) {
    if (used_prev[k] || used_cur[j]) continue;
    perm[k] = j;
    used_prev[k] = used_cur[j] = true;
  }
  return perm;
}

class StepMedian {
 public:
  void push(double step) {
    if (window_.size() < kCap) {
      window_.push_back(step);
    } else {
      window_[next_] = step;
      next_ = (next_ + 1) % kCap;
    }
  }
  bool ready(std::size_t min_count) const { return window_.size() >= min_count; }
  double median() const {
    std::vector<double> tmp = window_;
    auto mid = tmp.begin() + static_cast<std::ptrdiff_t>(tmp.size() / 2);
    std::nth_element(tmp.begin(), mid, tmp.end());
    return *mid;
  }

 private:
  static constexpr std::size_t kCap = 256;
  std::vector<double> window_;
  std::size_t next_ = 0;
};

inline bool is_identity(const std::vector<int>& perm) {
  for (std::size_t k = 0; k < perm.size(); ++k)
    if (perm[k] != static_cast<int>(k)) return false;
  return true;
}

}  // namespace detail

/// Image of the lambda-circle |lambda| = radius under the selected relation,
/// sampled at lambda_j = radius e^{i 2 pi j / samples}, grouped into
/// continuous per-branch curves.
///
/// Closed-form branch order is not continuous in lambda, so whenever some
/// branch jumps by more than stitch_factor times the running median step, the
/// new values are reassigned to curves by nearest-neighbour matching. A curve is
/// closed when continuing past the last sample leads back to its own start.
inline LocusResult trace_locus(int n, LocusMode mode, Complex fixed, int samples, double radius,
                               const LocusOptions& opt = {}) {
  if (samples < 8) throw Error(ErrorKind::invalid_argument, "locus: at least 8 samples required");
  std::vector<std::optional<RelationEval>> evals(static_cast<std::size_t>(samples));
  std::vector<Complex> lambdas(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j)
    lambdas[j] = std::polar(radius, 2.0 * std::numbers::pi * j / samples);

  // Unsupported combinations fail up front rather than as all-gaps.
  if (mode == LocusMode::a_from_c && n > 4 && !opt.relation.allow_approx &&
      !opt.relation.allow_numeric)
    evaluate_relation(n, mode, fixed, lambdas[0], opt.relation);
  if (mode == LocusMode::c_from_a && n > 3 && !opt.relation.allow_approx &&
      !opt.relation.allow_numeric)
    evaluate_relation(n, mode, fixed, lambdas[0], opt.relation);
  if ((mode == LocusMode::a_zero || mode == LocusMode::c_zero) && n < 2)
    evaluate_relation(n, mode, fixed, lambdas[0], opt.relation);
  if (mode == LocusMode::a_from_c && fixed == Complex{0.0, 0.0})
    throw Error(ErrorKind::invalid_argument, "a-from-c with c = 0: use mode c-zero");
  if (mode == LocusMode::c_from_a && fixed == Complex{0.0, 0.0})
    throw Error(ErrorKind::invalid_argument, "c-from-a with a = 0: use mode a-zero");

  parallel_for(evals.size(), opt.threads, [&](std::size_t j) {
    try {
      auto e = evaluate_relation(n, mode, fixed, lambdas[j], opt.relation);
      bool finite = true;
      for (const auto& b : e.branches) finite = finite && is_finite(b.value);
      if (finite) evals[j] = std::move(e);
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::unsupported || err.kind() == ErrorKind::invalid_argument)
        throw;
    }
  });

  LocusResult out;
  std::size_t branch_count = 0;
  for (const auto& e : evals) {
    if (e) {
      branch_count = e->branches.size();
      out.route = e->route;
      break;
    }
  }
  if (branch_count == 0) {
    // Surface the underlying reason (validity gate, pole) when it is uniform.
    evaluate_relation(n, mode, fixed, lambdas[0], opt.relation);
    throw Error(ErrorKind::domain, "locus: every sample failed");
  }

  out.curves.resize(branch_count);
  for (std::size_t k = 0; k < branch_count; ++k) out.curves[k].branch_k = static_cast<int>(k);

  std::vector<Complex> prev;
  std::vector<Complex> first;
  detail::StepMedian steps;
  for (int j = 0; j < samples; ++j) {
    const auto& e = evals[j];
    if (!e || e->branches.size() != branch_count) {
      out.gaps.push_back(j);
      continue;
    }
    if (e->route != out.route) out.mixed_routes = true;
    std::vector<Complex> cur;
    for (const auto& b : e->branches) cur.push_back(b.value);

    std::vector<int> perm(branch_count);
    std::iota(perm.begin(), perm.end(), 0);
    if (!prev.empty()) {
      double worst = 0.0;
      for (std::size_t k = 0; k < branch_count; ++k) worst = std::max(worst, std::abs(cur[k] - prev[k]));
      const bool trigger =
          !steps.ready(branch_count) || worst > opt.stitch_factor * steps.median();
      if (trigger && branch_count > 1) {
        perm = detail::best_assignment(prev, cur);
        if (!detail::is_identity(perm)) ++out.stitches;
      }
      for (std::size_t k = 0; k < branch_count; ++k) steps.push(std::abs(cur[perm[k]] - prev[k]));
    }
    std::vector<Complex> ordered(branch_count);
    for (std::size_t k = 0; k < branch_count; ++k) {
      ordered[k] = cur[perm[k]];
      out.curves[k].samples.push_back({lambdas[j], ordered[k]});
      if (opt.window && !opt.window->contains(ordered[k])) ++out.curves[k].window_exits;
    }
    if (first.empty()) first = ordered;
    prev = std::move(ordered);
  }

  if (!prev.empty()) {
    const auto wrap = branch_count > 1 ? detail::best_assignment(prev, first)
                                       : std::vector<int>{0};
    const double typical = steps.ready(1) ? steps.median() : 0.0;
    for (std::size_t k = 0; k < branch_count; ++k) {
      const double closing = std::abs(first[wrap[k]] - prev[k]);
      out.curves[k].closed =
          wrap[k] == static_cast<int>(k) &&
          (closing <= opt.stitch_factor * typical || closing < 1e-6 * (1.0 + std::abs(prev[k])));
    }
  }
  return out;
}

/// Boundary curves: the image of the unit lambda-circle.
inline LocusResult boundary_locus(int n, LocusMode mode, Complex fixed, int samples,
                                  const LocusOptions& opt = {}) {
  return trace_locus(n, mode, fixed, samples, 1.0, opt);
}

struct PushforwardPoint {
  Complex lambda;
  Complex value;
  int branch_k;
};

struct PushforwardOptions {
  RelationOptions relation{};
  double max_radius = 1.0 - 1e-3;
  int threads = 0;
};

/// Image of the sampled lambda-disk: rings at radii (i / rings) * max_radius,
/// i = 1..rings, each with `samples` equally spaced angles. Failed samples are skipped.
inline std::vector<PushforwardPoint> pushforward_disk(int n, LocusMode mode, Complex fixed,
                                                      int rings, int samples,
                                                      const PushforwardOptions& opt = {}) {
  if (rings < 1) throw Error(ErrorKind::invalid_argument, "pushforward: rings must be >= 1");
  if (samples < 1) throw Error(ErrorKind::invalid_argument, "pushforward: samples must be >= 1");
  const std::size_t total = static_cast<std::size_t>(rings) * static_cast<std::size_t>(samples);
  std::vector<std::vector<PushforwardPoint>> per(total);
  // Surface unsupported combinations before the parallel sweep.
  evaluate_relation(n, mode, fixed, Complex{0.5 * opt.max_radius / rings, 0.0}, opt.relation);
  parallel_for(total, opt.threads, [&](std::size_t idx) {
    const int i = static_cast<int>(idx / samples) + 1;
    const int j = static_cast<int>(idx % samples);
    const Complex lambda =
        std::polar(opt.max_radius * i / rings, 2.0 * std::numbers::pi * j / samples);
    try {
      for (const auto& b : evaluate_relation(n, mode, fixed, lambda, opt.relation).branches)
        if (is_finite(b.value)) per[idx].push_back({lambda, b.value, b.k});
    } catch (const Error&) {
    }
  });
  std::vector<PushforwardPoint> out;
  for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
  return out;
}

// ---------------------------------------------------------------------------
// Membership raster.

enum class Cell : unsigned char { outside = 0, inside = 1, boundary = 2, excluded = 3 };

enum class FreeSlot { a, c };

struct ScanTemplate {
  int n = 2;
  FreeSlot free = FreeSlot::c;
  Complex fixed{0.0, 0.0};

  MapParams instantiate(Complex value) const {
    return free == FreeSlot::a ? MapParams(n, value, fixed) : MapParams(n, fixed, value);
  }
};

struct RegionRaster {
  Window bounds;
  int width = 0;
  int height = 0;
  std::vector<Cell> cells;  // row-major, row 0 at im_max
  int excluded = 0;

  Cell at(int col, int row) const { return cells[static_cast<std::size_t>(row) * width + col]; }

  Complex center(int col, int row) const {
    const double dx = (bounds.re_max - bounds.re_min) / width;
    const double dy = (bounds.im_max - bounds.im_min) / height;
    return {bounds.re_min + (col + 0.5) * dx, bounds.im_max - (row + 0.5) * dy};
  }

  /// Cell containing z, if z lies inside the bounds.
  std::optional<std::pair<int, int>> locate(Complex z) const {
    if (!bounds.contains(z)) return std::nullopt;
    const double fx = (z.real() - bounds.re_min) / (bounds.re_max - bounds.re_min);
    const double fy = (bounds.im_max - z.imag()) / (bounds.im_max - bounds.im_min);
    const int col = std::min(width - 1, static_cast<int>(fx * width));
    const int row = std::min(height - 1, static_cast<int>(fy * height));
    return std::make_pair(col, row);
  }

  std::size_t count(Cell c) const { return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), c)); }
};

struct ScanOptions {
  std::size_t budget = 4096u * 4096u;
  int threads = 0;
  OracleConfig oracle{};
};

/// Oracle membership per pixel centre: inside iff the instantiated map has an
/// attracting fixed point. Inside cells with an outside 4-neighbour become
/// boundary; cells whose parameters are invalid or whose root finding fails
/// are excluded.
inline RegionRaster region_scan(const ScanTemplate& tmpl, const Window& bounds, int width,
                                int height, const ScanOptions& opt = {}) {
  if (!bounds.valid()) throw Error(ErrorKind::invalid_argument, "scan: degenerate window");
  if (width < 1 || height < 1) throw Error(ErrorKind::invalid_argument, "scan: empty raster");
  if (tmpl.n < 1) throw Error(ErrorKind::invalid_argument, "scan: n must be >= 1");
  require_finite(tmpl.fixed, "scan fixed value");
  if (static_cast<std::size_t>(width) * static_cast<std::size_t>(height) > opt.budget)
    throw Error(ErrorKind::budget, "scan: raster exceeds cell budget");

  RegionRaster r;
  r.bounds = bounds;
  r.width = width;
  r.height = height;
  r.cells.assign(static_cast<std::size_t>(width) * height, Cell::outside);
  parallel_for(r.cells.size(), opt.threads, [&](std::size_t idx) {
    const int col = static_cast<int>(idx % width);
    const int row = static_cast<int>(idx / width);
    try {
      const auto params = tmpl.instantiate(r.center(col, row));
      r.cells[idx] = has_attracting_fixed_point(params, opt.oracle).attracting ? Cell::inside
                                                                               : Cell::outside;
    } catch (const Error&) {
      r.cells[idx] = Cell::excluded;
    }
  });

  std::vector<Cell> marked = r.cells;
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      if (r.at(col, row) != Cell::inside) continue;
      const int dc[4] = {1, -1, 0, 0};
      const int dr[4] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        const int c2 = col + dc[d], r2 = row + dr[d];
        if (c2 < 0 || r2 < 0 || c2 >= width || r2 >= height) continue;
        if (r.at(c2, r2) == Cell::outside) {
          marked[static_cast<std::size_t>(row) * width + col] = Cell::boundary;
          break;
        }
      }
    }
  }
  r.cells = std::move(marked);
  r.excluded = static_cast<int>(r.count(Cell::excluded));
  return r;
}

/// Bounding window of a set of values, padded by `margin` of its extent on each side.
inline Window bounding_window(const std::vector<Complex>& pts, double margin = 0.05) {
  Window w{INFINITY, -INFINITY, INFINITY, -INFINITY};
  for (auto z : pts) {
    w.re_min = std::min(w.re_min, z.real());
    w.re_max = std::max(w.re_max, z.real());
    w.im_min = std::min(w.im_min, z.imag());
    w.im_max = std::max(w.im_max, z.imag());
  }
  if (pts.empty()) return Window{};
  const double span = std::max({w.re_max - w.re_min, w.im_max - w.im_min, 1e-12});
  const double pad = margin * span;
  // Square window centred on the data so shapes are not distorted.
  const double cx = 0.5 * (w.re_min + w.re_max), cy = 0.5 * (w.im_min + w.im_max);
  const double half = 0.5 * span + pad;
  return Window{cx - half, cx + half, cy - half, cy + half};
}

}  // namespace ratmap
