#include "sglb/plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

#include "sglb/csv.hpp"
#include "sglb/errors.hpp"

namespace sglb {
namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 180, kTop = 40, kBottom = 60;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

std::optional<double> to_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string escape(std::string_view s) {
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

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

struct Axis {
  double lo, hi;
  bool log;

  double map(double v) const {
    const double a = log ? std::log10(v) : v;
    const double b0 = log ? std::log10(lo) : lo;
    const double b1 = log ? std::log10(hi) : hi;
    return b1 == b0 ? 0.5 : (a - b0) / (b1 - b0);
  }

  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      for (double e = std::floor(std::log10(lo)); e <= std::ceil(std::log10(hi)); e += 1.0) {
        const double v = std::pow(10.0, e);
        if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) t.push_back(v);
      }
      if (t.size() < 2) t = {lo, hi};
    } else {
      for (int i = 0; i <= 4; ++i) t.push_back(lo + (hi - lo) * i / 4.0);
    }
    return t;
  }
};

Axis make_axis(double lo, double hi, bool log) {
  if (lo == hi) {
    if (log) return {lo / 2.0, hi * 2.0, true};
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.5;
    return {lo - pad, hi + pad, false};
  }
  if (log) return {lo / 1.2, hi * 1.2, true};
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad, false};
}

}  // namespace

std::string cmd_plot(std::string_view csv_text, const PlotOptions& options) {
  const CsvTable table = parse_csv(csv_text);
  const auto xcol = table.column(options.x_column);
  if (!xcol) throw ConfigError("plot: missing x column '" + options.x_column + "'");
  if (options.y_series.empty()) throw ConfigError("plot: no y series given");
  const auto metric_col = table.column("metric");
  const auto value_col = table.column("value");

  std::vector<Series> series;
  for (const auto& name : options.y_series) {
    Series s{name, {}};
    const auto ycol = table.column(name);
    bool matched = ycol.has_value();
    for (const auto& row : table.rows) {
      std::optional<std::size_t> src = ycol;
      if (!src && metric_col && value_col && row[*metric_col] == name) {
        src = value_col;
        matched = true;
      }
      if (!src) continue;
      const auto x = to_number(row[*xcol]);
      const auto y = to_number(row[*src]);
      if (!x || !y) continue;
      if (options.log_log && (*x <= 0.0 || *y <= 0.0)) continue;
      s.points.emplace_back(*x, *y);
    }
    if (!matched) throw ConfigError("plot: missing column or metric '" + name + "'");
    std::sort(s.points.begin(), s.points.end());
    s.points.erase(std::unique(s.points.begin(), s.points.end()), s.points.end());
    series.push_back(std::move(s));
  }

  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  if (!(xlo <= xhi)) throw ConfigError("plot: no data points to plot");

  std::optional<std::pair<std::pair<double, double>, std::pair<double, double>>> reference;
  if (options.reference_slope && !series.front().points.empty()) {
    const auto [x0, y0] = series.front().points.front();
    auto ref = [&](double x) { return y0 * std::sqrt(x0 / x); };
    if (options.log_log || (x0 > 0.0 && xlo > 0.0)) {
      reference = {{xlo, ref(xlo)}, {xhi, ref(xhi)}};
      ylo = std::min({ylo, ref(xlo), ref(xhi)});
      yhi = std::max({yhi, ref(xlo), ref(xhi)});
    }
  }

  const Axis ax = make_axis(xlo, xhi, options.log_log);
  const Axis ay = make_axis(ylo, yhi, options.log_log);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + ax.map(x) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - ay.map(y)) * ph; };

  std::ostringstream os;
  os.precision(6);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  if (!options.title.empty())
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(options.title) << "</text>\n";

  // Frame, ticks, grid.
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ax.ticks()) {
    const double x = px(t);
    os << "<line x1=\"" << x << "\" y1=\"" << kTop << "\" x2=\"" << x << "\" y2=\"" << kTop + ph
       << "\" stroke=\"#dddddd\"/>\n"
       << "<text x=\"" << x << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    os << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + pw << "\" y2=\"" << y
       << "\" stroke=\"#dddddd\"/>\n"
       << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">"
     << escape(options.x_column) << (options.log_log ? " (log)" : "") << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kColors[k % std::size(kColors)];
    const auto& pts = series[k].points;
    if (pts.size() > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : pts) os << px(x) << ',' << py(y) << ' ';
      os << "\"/>\n";
    }
    for (const auto& [x, y] : pts)
      os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    const double ly = kTop + 16 + 20.0 * static_cast<double>(k);
    os << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + pw + 36 << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << kLeft + pw + 42 << "\" y=\"" << ly + 4 << "\">" << escape(series[k].name) << "</text>\n";
  }
  if (reference) {
    const auto& [a, b] = *reference;
    const double ly = kTop + 16 + 20.0 * static_cast<double>(series.size());
    os << "<line x1=\"" << px(a.first) << "\" y1=\"" << py(a.second) << "\" x2=\"" << px(b.first) << "\" y2=\""
       << py(b.second) << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n"
       << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + pw + 36 << "\" y2=\"" << ly
       << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n"
       << "<text x=\"" << kLeft + pw + 42 << "\" y=\"" << ly + 4 << "\">slope -1/2</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace sglb
