#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "ratmap/error.hpp"

namespace ratmap {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline Complex require_finite(Complex z, const char* what) {
  if (!is_finite(z))
    throw Error(ErrorKind::non_finite, std::string("non-finite value: ") + what);
  return z;
}

/// Argument on (-pi, pi]. std::arg maps a negative real with a -0.0
/// imaginary part to -pi; fold that back onto +pi.
inline double principal_arg(Complex w) {
  double t = std::arg(w);
  if (t <= -std::numbers::pi) t = std::numbers::pi;
  return t;
}

/// w^(1/m) on the principal branch. principal_root(0, m) == 0.
inline Complex principal_root(Complex w, int m) {
  require_finite(w, "principal_root input");
  if (m < 1) throw Error(ErrorKind::invalid_argument, "principal_root: m must be >= 1");
  if (m == 1) return w;
  const double r = std::abs(w);
  if (r == 0.0) return Complex{0.0, 0.0};
  if (m == 2) {
    // std::sqrt keeps exactness on perfect squares; fix the -0.0 branch case.
    Complex s = std::sqrt(Complex{w.real(), w.imag() == 0.0 ? 0.0 : w.imag()});
    return s;
  }
  return std::polar(std::pow(r, 1.0 / m), principal_arg(w) / m);
}

/// The m-th roots principal_root(w, m) * e^{i 2 pi k / m}, k = 0..m-1.
inline std::vector<Complex> all_roots(Complex w, int m) {
  const Complex base = principal_root(w, m);
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    if (k == 0) {
      out.push_back(base);
    } else {
      out.push_back(base * std::polar(1.0, 2.0 * std::numbers::pi * k / m));
    }
  }
  return out;
}

/// z^k for integer k >= 0 by repeated squaring.
inline Complex ipow(Complex z, int k) {
  Complex result{1.0, 0.0};
  Complex base = z;
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

/// Cluster points closer than `radius` (single linkage, input order) and
/// return the centroid of each cluster together with its size.
struct Cluster {
  Complex center;
  int count;
};

inline std::vector<Cluster> cluster_points(const std::vector<Complex>& pts, double radius = 1e-7) {
  std::vector<int> label(pts.size(), -1);
  std::vector<Cluster> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (label[i] >= 0) continue;
    const int id = static_cast<int>(out.size());
    label[i] = id;
    std::vector<std::size_t> members{i};
    for (std::size_t m = 0; m < members.size(); ++m) {
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (label[j] < 0 && std::abs(pts[j] - pts[members[m]]) < radius) {
          label[j] = id;
          members.push_back(j);
        }
      }
    }
    Complex sum{0.0, 0.0};
    for (auto j : members) sum += pts[j];
    out.push_back({sum / static_cast<double>(members.size()), static_cast<int>(members.size())});
  }
  return out;
}

/// Symmetric Hausdorff distance between two finite point sets.
inline double hausdorff_distance(const std::vector<Complex>& x, const std::vector<Complex>& y) {
  if (x.empty() || y.empty()) return x.empty() && y.empty() ? 0.0 : INFINITY;
  auto directed = [](const std::vector<Complex>& from, const std::vector<Complex>& to) {
    double worst = 0.0;
    for (auto p : from) {
      double best = INFINITY;
      for (auto q : to) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(x, y), directed(y, x));
}

}  // namespace ratmap
