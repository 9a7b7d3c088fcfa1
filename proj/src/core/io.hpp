// Copyright 2026 The omegaturn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Deterministic CSV and SVG writers. Every file starts with a provenance
// line carrying the tool version and the config hash; no timestamps, so
// identical inputs produce byte-identical outputs.

#ifndef OMEGATURN_CORE_IO_HPP_
#define OMEGATURN_CORE_IO_HPP_

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

namespace omegaturn {

inline constexpr const char* kToolVersion = "0.1.0";

struct Provenance {
  std::string config_hash;  // 16 hex chars
  std::string comment() const;
};

class CsvWriter {
 public:
  CsvWriter(Provenance prov, std::vector<std::string> header);

  void row(const std::vector<std::string>& cells);
  // Formats doubles with %.12g.
  void row_values(const std::vector<double>& values);

  const std::string& text() const { return text_; }
  void save(const std::filesystem::path& path) const;

  static std::string format(double v);

 private:
  std::string text_;
  size_t columns_;
};

// Minimal SVG 1.1 document builder.
class SvgWriter {
 public:
  SvgWriter(double width, double height, Provenance prov);

  // Maps data coordinates to pixels: y grows upward in data space.
  void set_view(double x0, double y0, double x1, double y1);

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "none", double stroke_width = 0.0,
            double opacity = 1.0);
  void circle(double cx, double cy, double r, const std::string& fill,
              const std::string& stroke = "none", double stroke_width = 0.0);
  void polyline(const std::vector<Eigen::Vector2d>& pts, const std::string& stroke,
                double stroke_width, double opacity = 1.0);
  void polygon(const std::vector<Eigen::Vector2d>& pts, const std::string& fill,
               double opacity = 1.0);
  void text(double x, double y, const std::string& content, double size_px,
            const std::string& fill = "#333333");

  std::string finish() const;
  void save(const std::filesystem::path& path) const;

  Eigen::Vector2d to_px(const Eigen::Vector2d& data) const;
  double scale_px(double len) const;

 private:
  double width_, height_;
  double x0_ = 0.0, y0_ = 0.0, x1_ = 1.0, y1_ = 1.0;
  std::string body_;
  std::string header_comment_;
};

// Diverging palette for signed fields: negative blue, positive red.
std::string diverging_color(double value, double max_abs);

// FNV-1a 64-bit hash as 16 hex characters.
std::string fnv1a_hex(const std::string& data);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace omegaturn

#endif  // OMEGATURN_CORE_IO_HPP_
