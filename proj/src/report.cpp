#include "crisisflow/report.hpp"

#include "crisisflow/csv.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace crisisflow {

std::map<int, int> growth_length_histogram(const std::vector<CrisisSegment>& segments) {
  std::map<int, int> hist;
  for (const auto& s : segments)
    if (s.status == CrisisStatus::Ended) ++hist[s.t_peak - s.t_start];
  return hist;
}

void write_growth_histogram_csv(std::ostream& out, const std::string& provenance, const std::map<int, int>& hist) {
  out << provenance << '\n' << "growth_length,count\n";
  for (const auto& [len, n] : hist) out << len << ',' << n << '\n';
}

namespace {

constexpr double kWidth = 720, kHeight = 420, kLeft = 70, kRight = 20, kTop = 30, kBottom = 40;

struct Frame {
  double x0, x1, y1;
  double x(double year) const { return kLeft + (year - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double y(double v) const { return kHeight - kBottom - v / y1 * (kHeight - kTop - kBottom); }
};

std::string num(double v) { return format_sig(v, 6); }

void band(std::ostream& out, const Frame& f, const std::vector<ProjectionRow>& rows, std::size_t lo, std::size_t hi,
          const char* fill) {
  out << "<polygon fill=\"" << fill << "\" stroke=\"none\" points=\"";
  for (const auto& r : rows) out << num(f.x(r.year)) << ',' << num(f.y(r.q[hi])) << ' ';
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) out << num(f.x(it->year)) << ',' << num(f.y(it->q[lo])) << ' ';
  out << "\"/>\n";
}

}  // namespace

void write_fan_chart_svg(std::ostream& out, const CountrySeries& series, const std::vector<ProjectionRow>& rows) {
  Frame f{static_cast<double>(series.first_year()), static_cast<double>(series.last_year()), series.r.maxCoeff()};
  for (const auto& r : rows) {
    f.x1 = std::max(f.x1, static_cast<double>(r.year));
    f.y1 = std::max(f.y1, r.q[6]);
  }
  if (f.x1 <= f.x0) f.x1 = f.x0 + 1;
  f.y1 = f.y1 > 0 ? 1.05 * f.y1 : 1.0;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kLeft << "\" y=\"18\" font-size=\"14\">" << series.country_code << "</text>\n";

  // Axes with five ticks each.
  const double ax = kHeight - kBottom;
  out << "<line x1=\"" << kLeft << "\" y1=\"" << ax << "\" x2=\"" << kWidth - kRight << "\" y2=\"" << ax
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << ax
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double yr = std::round(f.x0 + (f.x1 - f.x0) * i / 4.0);
    const double v = f.y1 * i / 4.0;
    out << "<text x=\"" << num(f.x(yr)) << "\" y=\"" << ax + 16 << "\" text-anchor=\"middle\">" << yr << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(f.y(v) + 4) << "\" text-anchor=\"end\">" << format_sig(v, 3)
        << "</text>\n";
  }

  if (!rows.empty()) {
    band(out, f, rows, 0, 6, "#c6dbef");
    band(out, f, rows, 2, 4, "#6baed6");
    out << "<polyline fill=\"none\" stroke=\"#08306b\" stroke-width=\"2\" points=\"";
    for (const auto& r : rows) out << num(f.x(r.year)) << ',' << num(f.y(r.q[3])) << ' ';
    out << "\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"#d94801\" stroke-dasharray=\"5,3\" points=\"";
    for (const auto& r : rows)
      if (std::isfinite(r.benchmark)) out << num(f.x(r.year)) << ',' << num(f.y(r.benchmark)) << ' ';
    out << "\"/>\n";
  }
  for (Index i = 0; i < series.size(); ++i)
    out << "<circle cx=\"" << num(f.x(series.years[static_cast<std::size_t>(i)])) << "\" cy=\""
        << num(f.y(series.r(i))) << "\" r=\"2.5\" fill=\"black\"/>\n";
  out << "</svg>\n";
}

}  // namespace crisisflow
