#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ratmap/atlas.hpp"

namespace ratmap {

struct Rgb {
  std::uint8_t r = 255, g = 255, b = 255;
  bool operator==(const Rgb&) const = default;
};

inline constexpr std::array<Rgb, 8> kBranchPalette{{
    {31, 119, 180},
    {214, 39, 40},
    {44, 160, 44},
    {148, 103, 189},
    {255, 127, 14},
    {23, 190, 207},
    {140, 86, 75},
    {227, 119, 194},
}};

inline Rgb branch_color(int k) { return kBranchPalette[static_cast<std::size_t>(k) % kBranchPalette.size()]; }

inline Rgb lighten(Rgb c, double t) {
  auto mix = [t](std::uint8_t v) {
    return static_cast<std::uint8_t>(std::lround(v + (255.0 - v) * t));
  };
  return {mix(c.r), mix(c.g), mix(c.b)};
}

/// 8-bit RGB image with a world-to-pixel mapping for a complex-plane window.
class Canvas {
 public:
  Canvas(int width, int height, Window view, Rgb background = {})
      : width_(width), height_(height), view_(view) {
    if (width < 1 || height < 1) throw Error(ErrorKind::invalid_argument, "image: empty size");
    if (!view.valid()) throw Error(ErrorKind::invalid_argument, "image: degenerate window");
    pixels_.assign(static_cast<std::size_t>(width) * height, background);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  const Window& view() const { return view_; }
  const std::vector<Rgb>& pixels() const { return pixels_; }
  Rgb at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

  void set(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
    pixels_[static_cast<std::size_t>(y) * width_ + x] = c;
  }

  /// Pixel coordinates of z; may lie outside the image.
  std::pair<double, double> to_pixel(Complex z) const {
    const double fx = (z.real() - view_.re_min) / (view_.re_max - view_.re_min);
    const double fy = (view_.im_max - z.imag()) / (view_.im_max - view_.im_min);
    return {fx * width_, fy * height_};
  }

  void plot(Complex z, Rgb c) {
    const auto [x, y] = to_pixel(z);
    set(static_cast<int>(std::floor(x)), static_cast<int>(std::floor(y)), c);
  }

  void line(Complex from, Complex to, Rgb c) {
    auto [x0f, y0f] = to_pixel(from);
    auto [x1f, y1f] = to_pixel(to);
    // Segments far outside the image are skipped rather than walked pixel by pixel.
    const double lim = 4.0 * (width_ + height_);
    if (std::abs(x0f) > lim || std::abs(y0f) > lim || std::abs(x1f) > lim || std::abs(y1f) > lim)
      return;
    int x0 = static_cast<int>(std::floor(x0f)), y0 = static_cast<int>(std::floor(y0f));
    const int x1 = static_cast<int>(std::floor(x1f)), y1 = static_cast<int>(std::floor(y1f));
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
      set(x0, y0, c);
      if (x0 == x1 && y0 == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }

  void axes(Rgb c = {200, 200, 200}) {
    if (view_.re_min < 0.0 && view_.re_max > 0.0)
      line({0.0, view_.im_min}, {0.0, view_.im_max}, c);
    if (view_.im_min < 0.0 && view_.im_max > 0.0)
      line({view_.re_min, 0.0}, {view_.re_max, 0.0}, c);
  }

  std::string to_ppm() const {
    std::string out = "P6\n" + std::to_string(width_) + " " + std::to_string(height_) + "\n255\n";
    out.reserve(out.size() + pixels_.size() * 3);
    for (const auto& p : pixels_) {
      out.push_back(static_cast<char>(p.r));
      out.push_back(static_cast<char>(p.g));
      out.push_back(static_cast<char>(p.b));
    }
    return out;
  }

 private:
  int width_, height_;
  Window view_;
  std::vector<Rgb> pixels_;
};

/// Polylines in branch colours. Closed curves get their closing segment.
inline void draw_curves(Canvas& canvas, const std::vector<LocusCurve>& curves) {
  for (const auto& curve : curves) {
    const Rgb col = branch_color(curve.branch_k);
    const auto& s = curve.samples;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) canvas.line(s[i].value, s[i + 1].value, col);
    if (s.size() == 1) canvas.plot(s[0].value, col);
    if (curve.closed && s.size() > 2) canvas.line(s.back().value, s.front().value, col);
  }
}

inline void draw_scatter(Canvas& canvas, const std::vector<PushforwardPoint>& pts) {
  for (const auto& p : pts) canvas.plot(p.value, lighten(branch_color(p.branch_k), 0.55));
}

/// One canvas pixel per raster cell: inside filled, boundary darker, excluded grey.
inline Canvas render_region(const RegionRaster& r) {
  Canvas canvas(r.width, r.height, r.bounds);
  const Rgb fill = lighten(kBranchPalette[0], 0.45);
  const Rgb edge = {20, 60, 110};
  const Rgb excluded = {160, 160, 160};
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      switch (r.at(x, y)) {
        case Cell::inside: canvas.set(x, y, fill); break;
        case Cell::boundary: canvas.set(x, y, edge); break;
        case Cell::excluded: canvas.set(x, y, excluded); break;
        case Cell::outside: break;
      }
    }
  }
  return canvas;
}

}  // namespace ratmap
