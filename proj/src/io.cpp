#include "crisisflow/io.hpp"

#include "crisisflow/csv.hpp"

#include <fstream>
#include <ostream>

namespace crisisflow {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

std::string sig(double x) { return format_sig(x, 10); }

}  // namespace

void write_series_csv(std::ostream& out, const std::string& provenance, const std::vector<CountrySeries>& series) {
  out << provenance << '\n' << "country_code,year,R,P,r\n";
  for (const auto& s : series)
    for (Index i = 0; i < s.size(); ++i) {
      const auto k = static_cast<std::size_t>(i);
      out << s.country_code << ',' << s.years[k] << ',' << s.R[k] << ',' << s.P[k] << ',' << format_double(s.r(i))
          << '\n';
    }
}

void write_segments_csv(std::ostream& out, const std::string& provenance, const std::vector<CrisisSegment>& segments) {
  out << provenance << '\n' << "crisis_id,country_code,t_start,t_peak,t_end,t_last,status\n";
  for (const auto& s : segments) {
    out << s.crisis_id << ',' << s.country_code << ',' << s.t_start << ',' << s.t_peak << ',';
    if (s.t_end) out << *s.t_end;
    out << ',' << s.t_last << ',' << to_string(s.status) << '\n';
  }
}

std::vector<CrisisSegment> read_segments_csv(std::istream& in) {
  CsvReader reader(in, {"crisis_id", "country_code", "t_start", "t_peak", "t_end", "t_last", "status"});
  std::vector<CrisisSegment> out;
  while (auto row = reader.next()) {
    const auto& f = row->fields;
    CrisisSegment s;
    s.crisis_id = parse_int<int>(f[0], row->line, "crisis_id");
    s.country_code = f[1];
    s.t_start = parse_int<Year>(f[2], row->line, "t_start");
    s.t_peak = parse_int<Year>(f[3], row->line, "t_peak");
    if (!f[4].empty()) s.t_end = parse_int<Year>(f[4], row->line, "t_end");
    s.t_last = parse_int<Year>(f[5], row->line, "t_last");
    s.status = parse_status(f[6]);
    if ((s.status == CrisisStatus::Ended) != s.t_end.has_value())
      throw DataError("line " + std::to_string(row->line) + ": t_end must be present exactly for ended crises");
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<CrisisSegment> read_segments_csv(const std::string& path) {
  auto in = open_input(path);
  return read_segments_csv(in);
}

void write_draws_csv(std::ostream& out, const std::string& provenance, const PosteriorDraws& draws) {
  out << provenance << '\n' << "chain,iter,param_name,value\n";
  for (Index k = 0; k < draws.size(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const std::string prefix = std::to_string(draws.chain[kk]) + ',' + std::to_string(draws.iter[kk]) + ',';
    for (Index j = 0; j < draws.values.cols(); ++j)
      out << prefix << draws.names[static_cast<std::size_t>(j)] << ',' << format_double(draws.values(k, j)) << '\n';
  }
}

PosteriorDraws read_draws_csv(std::istream& in) {
  CsvReader reader(in, {"chain", "iter", "param_name", "value"});
  PosteriorDraws d;
  std::map<std::string, Index> col;
  std::map<std::pair<int, int>, Index> row_of;
  std::vector<std::vector<double>> rows;
  while (auto row = reader.next()) {
    const auto& f = row->fields;
    const int chain = parse_int<int>(f[0], row->line, "chain");
    const int iter = parse_int<int>(f[1], row->line, "iter");
    const double value = parse_double(f[3], row->line, "value");
    auto [cit, new_col] = col.emplace(f[2], static_cast<Index>(d.names.size()));
    if (new_col) d.names.push_back(f[2]);
    auto [rit, new_row] = row_of.emplace(std::make_pair(chain, iter), static_cast<Index>(rows.size()));
    if (new_row) {
      rows.emplace_back();
      d.chain.push_back(chain);
      d.iter.push_back(iter);
    }
    auto& r = rows[static_cast<std::size_t>(rit->second)];
    if (static_cast<Index>(r.size()) != cit->second)
      throw DataError("line " + std::to_string(row->line) + ": parameters out of order within a draw");
    r.push_back(value);
  }
  d.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(d.names.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d.names.size()) throw DataError("draw " + std::to_string(i) + " is incomplete");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      d.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return d;
}

PosteriorDraws read_draws_csv(const std::string& path) {
  auto in = open_input(path);
  return read_draws_csv(in);
}

void write_diagnostics_csv(std::ostream& out, const std::string& provenance, const PosteriorDraws& draws) {
  out << provenance << '\n' << "param_name,rhat,ess\n";
  for (const auto& d : draws.diagnostics) out << d.name << ',' << sig(d.rhat) << ',' << sig(d.ess) << '\n';
}

void write_projections_csv(std::ostream& out, const std::string& provenance,
                           const std::vector<ProjectionSet>& projections,
                           const std::map<std::string, BenchmarkProjection>& benchmarks) {
  out << provenance << '\n' << "country_code,crisis_id,year,q025,q05,q10,q50,q90,q95,q975,benchmark\n";
  for (const auto& p : projections) {
    const auto bench = benchmarks.find(p.country_code);
    for (std::size_t h = 0; h < p.years.size(); ++h) {
      const Index hi = static_cast<Index>(h);
      out << p.country_code << ',' << p.crisis_id << ',' << p.years[h];
      for (Index j = 0; j < p.quantiles.values.cols(); ++j) out << ',' << sig(p.quantiles.values(hi, j));
      out << ',';
      if (bench != benchmarks.end()) {
        const Index bi = p.years[h] - bench->second.years.front();
        if (bi >= 0 && bi < bench->second.values.size()) out << sig(bench->second.values(bi));
      }
      out << '\n';
    }
  }
}

std::vector<ProjectionRow> read_projections_csv(const std::string& path) {
  auto in = open_input(path);
  CsvReader reader(in, {"country_code", "crisis_id", "year", "q025", "q05", "q10", "q50", "q90", "q95", "q975",
                        "benchmark"});
  std::vector<ProjectionRow> out;
  while (auto row = reader.next()) {
    const auto& f = row->fields;
    ProjectionRow p;
    p.country_code = f[0];
    p.crisis_id = parse_int<int>(f[1], row->line, "crisis_id");
    p.year = parse_int<Year>(f[2], row->line, "year");
    for (std::size_t j = 0; j < 7; ++j) p.q[j] = parse_double(f[3 + j], row->line, "quantile");
    p.benchmark = f[10].empty() ? std::nan("") : parse_double(f[10], row->line, "benchmark");
    out.push_back(p);
  }
  return out;
}

void write_trajectories_csv(std::ostream& out, const std::string& provenance,
                            const std::vector<ProjectionSet>& projections) {
  out << provenance << '\n' << "country_code,crisis_id,draw,year,value\n";
  for (const auto& p : projections)
    for (Index k = 0; k < p.trajectories.rows(); ++k)
      for (std::size_t h = 0; h < p.years.size(); ++h)
        out << p.country_code << ',' << p.crisis_id << ',' << k << ',' << p.years[h] << ','
            << sig(p.trajectories(k, static_cast<Index>(h))) << '\n';
}

void write_validation_report_csv(std::ostream& out, const std::string& provenance, const ScoreReport& report) {
  out << provenance << '\n' << "cutoff,horizon,method,metric,value,n\n";
  for (const auto& p : report.point) {
    out << report.cutoff << ',' << p.horizon << ',' << p.method << ",mean_error," << sig(p.mean_error) << ',' << p.n
        << '\n';
    out << report.cutoff << ',' << p.horizon << ',' << p.method << ",mean_abs_error," << sig(p.mean_abs_error) << ','
        << p.n << '\n';
  }
  for (const auto& c : report.coverage)
    out << report.cutoff << ',' << c.horizon << ",bayes,coverage_" << format_sig(c.level, 4) << ','
        << sig(c.coverage) << ',' << c.n << '\n';
}

void write_counts_csv(std::ostream& out, const std::vector<RawCounts>& counts) {
  out << "country_code,year,refugees,asylum_seekers\n";
  for (const auto& c : counts)
    out << c.country_code << ',' << c.year << ',' << c.refugees << ',' << c.asylum_seekers << '\n';
}

void write_population_csv(std::ostream& out, const std::vector<PopulationRecord>& population) {
  out << "country_code,year,population\n";
  for (const auto& p : population) out << p.country_code << ',' << p.year << ',' << p.population << '\n';
}

}  // namespace crisisflow
