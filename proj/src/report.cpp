// Copyright 2026 The qmem Authors
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

#include "qmem/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "qmem/errors.hpp"

namespace qmem {

std::size_t Table::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidParameter("table has no column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::optional<std::string> Table::meta(std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::optional<double> Table::number(std::size_t row, std::size_t col) const {
  const std::string& s = rows.at(row).at(col);
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return used == s.size() ? std::optional<double>(v) : std::nullopt;
}

std::string format_number(std::optional<double> v) {
  if (!v) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void append_record(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k > 0) out += ',';
    out += quote(fields[k]);
  }
  out += "\r\n";
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (const auto& [k, v] : t.metadata) out += "# " + k + ": " + v + "\r\n";
  append_record(out, t.columns);
  for (const auto& r : t.rows) append_record(out, r);
  return out;
}

Table parse_csv(std::string_view text) {
  Table t;
  std::size_t pos = 0;
  // Metadata lines.
  while (pos < text.size() && text[pos] == '#') {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t colon = line.find(": ");
    if (line.size() < 2 || colon == std::string::npos) throw IoError("malformed CSV metadata line: " + line);
    t.metadata.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
    pos = end + 1;
  }
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field += '"';
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      rec.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
      rec.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(rec));
      rec.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw IoError("unterminated quoted CSV field");
  if (any || !field.empty()) {
    rec.push_back(std::move(field));
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw IoError("CSV has no header row");
  t.columns = std::move(records.front());
  for (std::size_t k = 1; k < records.size(); ++k) {
    if (records[k].size() != t.columns.size()) {
      throw IoError("CSV record " + std::to_string(k) + " has " + std::to_string(records[k].size()) +
                    " fields, header has " + std::to_string(t.columns.size()));
    }
    t.rows.push_back(std::move(records[k]));
  }
  return t;
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v, int prec = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool valid() const { return lo <= hi; }
  void pad() {
    if (!valid()) {
      lo = 0.0;
      hi = 1.0;
    } else if (hi - lo < 1e-300 * std::max(1.0, std::abs(lo))) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

void header(std::ostringstream& o, const std::string& title) {
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(kWidth, 0) << "\" height=\""
    << fmt(kHeight, 0) << "\" viewBox=\"0 0 " << fmt(kWidth, 0) << ' ' << fmt(kHeight, 0) << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"15\">" << escape(title) << "</text>\n";
}

void axis_labels(std::ostringstream& o, const std::string& xl, const std::string& yl) {
  o << "<text x=\"" << fmt(kLeft + (kWidth - kLeft - kRight) / 2) << "\" y=\"" << fmt(kHeight - 12)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(xl) << "</text>\n"
    << "<text x=\"16\" y=\"" << fmt(kTop + (kHeight - kTop - kBottom) / 2)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 "
    << fmt(kTop + (kHeight - kTop - kBottom) / 2) << ")\">" << escape(yl) << "</text>\n";
}

std::string lines_svg(const Table& t, const PlotSpec& spec) {
  const std::size_t xc = t.column(spec.x_column);
  std::vector<std::size_t> ycs;
  for (const auto& c : spec.y_columns) ycs.push_back(t.column(c));
  auto xmap = [&](double x) { return spec.log_x ? std::log10(x) : x; };

  Range xr, yr;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto x = t.number(r, xc);
    if (!x || (spec.log_x && *x <= 0.0)) continue;
    xr.add(xmap(*x));
    for (auto yc : ycs) {
      if (auto y = t.number(r, yc)) yr.add(*y);
    }
  }
  xr.pad();
  yr.pad();
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (xmap(x) - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * ph; };

  std::ostringstream o;
  header(o, spec.title);
  o << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = xr.lo + (xr.hi - xr.lo) * k / 4.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * k / 4.0;
    const double sx = kLeft + pw * k / 4.0;
    const double sy = kTop + ph * (1.0 - k / 4.0);
    o << "<text x=\"" << fmt(sx) << "\" y=\"" << fmt(kTop + ph + 16)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
      << tick_label(spec.log_x ? std::pow(10.0, fx) : fx) << "</text>\n";
    o << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(sy + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(fy) << "</text>\n";
  }
  axis_labels(o, spec.x_label.empty() ? spec.x_column : spec.x_label, spec.y_label);

  for (std::size_t s = 0; s < ycs.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    std::string path;
    bool pen_down = false;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto x = t.number(r, xc);
      const auto y = t.number(r, ycs[s]);
      if (!x || !y || (spec.log_x && *x <= 0.0)) {
        pen_down = false;  // gaps stay visible
        continue;
      }
      path += (pen_down ? " L" : " M") + fmt(px(*x)) + ' ' + fmt(py(*y));
      pen_down = true;
    }
    o << "<path d=\"" << path.substr(path.empty() ? 0 : 1) << "\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\"/>\n";
    o << "<text x=\"" << fmt(kLeft + 8) << "\" y=\"" << fmt(kTop + 16 + 14.0 * static_cast<double>(s))
      << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">" << escape(spec.y_columns[s])
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string heatmap_svg(const Table& t, const PlotSpec& spec) {
  const std::size_t xc = t.column(spec.x_column);
  const std::size_t yc = t.column(spec.y_column);
  const std::size_t vc = t.column(spec.value_column);
  std::vector<double> xs, ys;
  Range vr;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (auto x = t.number(r, xc)) xs.push_back(*x);
    if (auto y = t.number(r, yc)) ys.push_back(*y);
    if (auto v = t.number(r, vc)) vr.add(*v);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  vr.pad();

  const double pw = kWidth - kLeft - kRight - 60.0;
  const double ph = kHeight - kTop - kBottom;
  const double cw = xs.empty() ? pw : pw / static_cast<double>(xs.size());
  const double chh = ys.empty() ? ph : ph / static_cast<double>(ys.size());
  auto color = [&](double v) {
    const double f = std::clamp((v - vr.lo) / (vr.hi - vr.lo), 0.0, 1.0);
    const int rr = static_cast<int>(std::lround(255.0 * f));
    const int bb = static_cast<int>(std::lround(255.0 * (1.0 - f)));
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x40%02x", rr, bb);
    return std::string(buf);
  };

  std::ostringstream o;
  header(o, spec.title);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto x = t.number(r, xc);
    const auto y = t.number(r, yc);
    if (!x || !y) continue;
    const auto ix = static_cast<double>(std::lower_bound(xs.begin(), xs.end(), *x) - xs.begin());
    const auto iy = static_cast<double>(std::lower_bound(ys.begin(), ys.end(), *y) - ys.begin());
    const auto v = t.number(r, vc);
    o << "<rect x=\"" << fmt(kLeft + ix * cw) << "\" y=\"" << fmt(kTop + ph - (iy + 1.0) * chh) << "\" width=\""
      << fmt(cw) << "\" height=\"" << fmt(chh) << "\" fill=\"" << (v ? color(*v) : std::string("#dddddd"))
      << "\"/>\n";
  }
  const std::size_t stride_x = std::max<std::size_t>(1, xs.size() / 5);
  for (std::size_t k = 0; k < xs.size(); k += stride_x) {
    o << "<text x=\"" << fmt(kLeft + (static_cast<double>(k) + 0.5) * cw) << "\" y=\"" << fmt(kTop + ph + 16)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(xs[k]) << "</text>\n";
  }
  const std::size_t stride_y = std::max<std::size_t>(1, ys.size() / 5);
  for (std::size_t k = 0; k < ys.size(); k += stride_y) {
    o << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(kTop + ph - (static_cast<double>(k) + 0.5) * chh + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(ys[k]) << "</text>\n";
  }
  // Colour bar.
  const double bx = kLeft + pw + 20.0;
  for (int k = 0; k < 20; ++k) {
    const double v = vr.lo + (vr.hi - vr.lo) * (k + 0.5) / 20.0;
    o << "<rect x=\"" << fmt(bx) << "\" y=\"" << fmt(kTop + ph * (1.0 - (k + 1) / 20.0)) << "\" width=\"14\" height=\""
      << fmt(ph / 20.0) << "\" fill=\"" << color(v) << "\"/>\n";
  }
  o << "<text x=\"" << fmt(bx + 18) << "\" y=\"" << fmt(kTop + 10) << "\" font-family=\"sans-serif\" font-size=\"10\">"
    << tick_label(vr.hi) << "</text>\n"
    << "<text x=\"" << fmt(bx + 18) << "\" y=\"" << fmt(kTop + ph) << "\" font-family=\"sans-serif\" font-size=\"10\">"
    << tick_label(vr.lo) << "</text>\n";
  axis_labels(o, spec.x_label.empty() ? spec.x_column : spec.x_label,
              spec.y_label.empty() ? spec.y_column : spec.y_label);
  o << "</svg>\n";
  return o.str();
}

}  // namespace

std::string to_svg(const Table& t, const PlotSpec& spec) {
  return spec.kind == PlotKind::Heatmap ? heatmap_svg(t, spec) : lines_svg(t, spec);
}

PlotSpec default_plot(const Table& t) {
  PlotSpec spec;
  spec.title = t.meta("title").value_or("qmem");
  const std::string kind = t.meta("kind").value_or("");
  if (kind == "sweep-couplings") {
    spec.kind = PlotKind::Heatmap;
    spec.x_column = t.columns.at(0);
    spec.y_column = t.columns.at(1);
    spec.value_column = "fidelity";
    spec.x_label = spec.x_column;
    spec.y_label = spec.y_column;
    return spec;
  }
  if (t.columns.empty()) throw InvalidParameter("cannot plot a table without columns");
  spec.x_column = t.columns.front();
  if (kind == "sweep-intrinsic") {
    spec.y_columns = {"fidelity"};
    spec.y_label = "fidelity";
    spec.log_x = true;
  } else if (kind == "controls") {
    spec.y_columns = {"g1_ghz", "g2_ghz"};
    spec.y_label = "coupling (GHz)";
  } else if (kind == "trajectory") {
    spec.y_columns = {"alpha1", "alpha2", "beta"};
    spec.y_label = "amplitude";
  } else if (kind == "oracle") {
    spec.y_columns = {"p_b1", "p_b2", "p_dark"};
    spec.y_label = "population";
  } else {
    spec.y_columns.assign(t.columns.begin() + 1, t.columns.end());
  }
  return spec;
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace qmem
