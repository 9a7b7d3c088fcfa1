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

#include "core/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "core/errors.hpp"

namespace omegaturn {

std::string Provenance::comment() const {
  return std::string("omegaturn ") + kToolVersion + "; config_hash=" + config_hash;
}

CsvWriter::CsvWriter(Provenance prov, std::vector<std::string> header)
    : columns_(header.size()) {
  text_ = "# " + prov.comment() + "\n";
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

std::string CsvWriter::format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw std::invalid_argument("csv row width mismatch");
  }
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

void CsvWriter::row_values(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format(v));
  row(cells);
}

void CsvWriter::save(const std::filesystem::path& path) const {
  write_text_file(path, text_);
}

SvgWriter::SvgWriter(double width, double height, Provenance prov)
    : width_(width), height_(height) {
  header_comment_ = "<!-- " + prov.comment() + " -->\n";
}

void SvgWriter::set_view(double x0, double y0, double x1, double y1) {
  x0_ = x0;
  y0_ = y0;
  x1_ = x1;
  y1_ = y1;
}

Eigen::Vector2d SvgWriter::to_px(const Eigen::Vector2d& data) const {
  const double sx = width_ / (x1_ - x0_);
  const double sy = height_ / (y1_ - y0_);
  return {(data.x() - x0_) * sx, height_ - (data.y() - y0_) * sy};
}

double SvgWriter::scale_px(double len) const {
  return len * width_ / (x1_ - x0_);
}

namespace {
std::string num(double v) { return CsvWriter::format(v); }
}  // namespace

void SvgWriter::rect(double x, double y, double w, double h,
                     const std::string& fill, const std::string& stroke,
                     double stroke_width, double opacity) {
  const Eigen::Vector2d tl = to_px({x, y + h});
  body_ += "<rect x=\"" + num(tl.x()) + "\" y=\"" + num(tl.y()) + "\" width=\"" +
           num(scale_px(w)) + "\" height=\"" +
           num(h * height_ / (y1_ - y0_)) + "\" fill=\"" + fill + "\"";
  if (stroke != "none") {
    body_ += " stroke=\"" + stroke + "\" stroke-width=\"" + num(stroke_width) + "\"";
  }
  if (opacity != 1.0) body_ += " opacity=\"" + num(opacity) + "\"";
  body_ += "/>\n";
}

void SvgWriter::circle(double cx, double cy, double r, const std::string& fill,
                       const std::string& stroke, double stroke_width) {
  const Eigen::Vector2d c = to_px({cx, cy});
  body_ += "<circle cx=\"" + num(c.x()) + "\" cy=\"" + num(c.y()) + "\" r=\"" +
           num(scale_px(r)) + "\" fill=\"" + fill + "\"";
  if (stroke != "none") {
    body_ += " stroke=\"" + stroke + "\" stroke-width=\"" + num(stroke_width) + "\"";
  }
  body_ += "/>\n";
}

void SvgWriter::polyline(const std::vector<Eigen::Vector2d>& pts,
                         const std::string& stroke, double stroke_width,
                         double opacity) {
  if (pts.size() < 2) return;
  body_ += "<polyline points=\"";
  for (const auto& p : pts) {
    const Eigen::Vector2d px = to_px(p);
    body_ += num(px.x()) + "," + num(px.y()) + " ";
  }
  body_ += "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
           num(stroke_width) + "\"";
  if (opacity != 1.0) body_ += " opacity=\"" + num(opacity) + "\"";
  body_ += "/>\n";
}

void SvgWriter::polygon(const std::vector<Eigen::Vector2d>& pts,
                        const std::string& fill, double opacity) {
  if (pts.size() < 3) return;
  body_ += "<polygon points=\"";
  for (const auto& p : pts) {
    const Eigen::Vector2d px = to_px(p);
    body_ += num(px.x()) + "," + num(px.y()) + " ";
  }
  body_ += "\" fill=\"" + fill + "\"";
  if (opacity != 1.0) body_ += " opacity=\"" + num(opacity) + "\"";
  body_ += "/>\n";
}

void SvgWriter::text(double x, double y, const std::string& content,
                     double size_px, const std::string& fill) {
  const Eigen::Vector2d p = to_px({x, y});
  body_ += "<text x=\"" + num(p.x()) + "\" y=\"" + num(p.y()) +
           "\" font-family=\"sans-serif\" font-size=\"" + num(size_px) +
           "\" fill=\"" + fill + "\">" + content + "</text>\n";
}

std::string SvgWriter::finish() const {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n" + header_comment_ +
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) +
         "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " +
         num(height_) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n" +
         body_ + "</svg>\n";
}

void SvgWriter::save(const std::filesystem::path& path) const {
  write_text_file(path, finish());
}

std::string diverging_color(double value, double max_abs) {
  if (max_abs <= 0.0) max_abs = 1.0;
  double t = std::clamp(value / max_abs, -1.0, 1.0);
  int r, g, b;
  if (t >= 0.0) {
    r = 255;
    g = int(255 * (1.0 - t * 0.85));
    b = int(255 * (1.0 - t));
  } else {
    r = int(255 * (1.0 + t));
    g = int(255 * (1.0 + t * 0.85));
    b = 255;
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string fnv1a_hex(const std::string& data) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace omegaturn
