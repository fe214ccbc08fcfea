#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "json.hpp"

#include "ratmap/atlas.hpp"

namespace ratmap {

/// Output files staged as hidden temp siblings and renamed into place only
/// on commit, so a failed run leaves no partial outputs behind. Uncommitted
/// temps are removed on destruction.
class OutputBatch {
 public:
  OutputBatch() = default;
  OutputBatch(const OutputBatch&) = delete;
  OutputBatch& operator=(const OutputBatch&) = delete;
  ~OutputBatch() {
    std::error_code ec;
    for (const auto& s : staged_) std::filesystem::remove(s.tmp, ec);
  }

  void stage(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
      throw Error(ErrorKind::io, "output directory does not exist: " + dir.string());
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()) +
                                "_" + std::to_string(staged_.size()));
    staged_.push_back({tmp, path});
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::io, "write failed: " + tmp.string());
  }

  void commit() {
    std::error_code ec;
    for (auto it = staged_.begin(); it != staged_.end();) {
      std::filesystem::rename(it->tmp, it->target, ec);
      if (ec) throw Error(ErrorKind::io, "cannot move output into place: " + it->target.string());
      it = staged_.erase(it);
    }
  }

 private:
  struct Staged {
    std::filesystem::path tmp, target;
  };
  std::vector<Staged> staged_;
};

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  OutputBatch batch;
  batch.stage(path, content);
  batch.commit();
}

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Branch-major CSV, samples in increasing arg(lambda).
inline std::string locus_csv(const std::vector<LocusCurve>& curves) {
  std::string out = "branch,lambda_re,lambda_im,value_re,value_im\n";
  for (const auto& curve : curves) {
    for (const auto& s : curve.samples) {
      out += std::to_string(curve.branch_k);
      for (double v : {s.lambda.real(), s.lambda.imag(), s.value.real(), s.value.imag()}) {
        out += ',';
        out += format_g17(v);
      }
      out += '\n';
    }
  }
  return out;
}

/// Region document: bounds, dimensions, caller-supplied run parameters and
/// row-major cell codes with row 0 at im_max.
inline nlohmann::ordered_json region_json(const RegionRaster& r, nlohmann::ordered_json params) {
  nlohmann::ordered_json j;
  j["bounds"] = {{"re_min", r.bounds.re_min},
                 {"re_max", r.bounds.re_max},
                 {"im_min", r.bounds.im_min},
                 {"im_max", r.bounds.im_max}};
  j["width"] = r.width;
  j["height"] = r.height;
  j["row_order"] = "row 0 at im_max";
  j["params"] = std::move(params);
  j["counts"] = {{"outside", r.count(Cell::outside)},
                 {"inside", r.count(Cell::inside)},
                 {"boundary", r.count(Cell::boundary)},
                 {"excluded", r.count(Cell::excluded)}};
  std::vector<int> codes;
  codes.reserve(r.cells.size());
  for (auto c : r.cells) codes.push_back(static_cast<int>(c));
  j["cells"] = std::move(codes);
  return j;
}

}  // namespace ratmap
