#include "crisisflow/validate.hpp"

#include "crisisflow/csv.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

namespace crisisflow {

void ValidationConfig::validate() const {
  if (horizons.empty()) throw ConfigError("horizons must not be empty");
  for (int h : horizons)
    if (h < 1) throw ConfigError("horizons must be positive");
  for (double l : coverage_levels)
    if (!(l > 0 && l < 1)) throw ConfigError("coverage levels must lie in (0, 1)");
  for (double l : coverage_levels) {
    const double tail = 0.5 * (1 - l);
    const bool tabulated = std::any_of(kQuantileLevels.begin(), kQuantileLevels.end(),
                                       [&](double q) { return std::abs(q - tail) < 1e-12; });
    if (!tabulated) throw ConfigError("coverage level " + format_double(l) + " has no tabulated interval");
  }
}

Holdout build_holdout(const std::vector<CountrySeries>& full, Year cutoff, const PeakScoreConfig& seg) {
  if (full.empty()) throw DataError("build_holdout: no series");
  Year first = full.front().first_year(), last = full.front().last_year();
  for (const auto& s : full) {
    first = std::min(first, s.first_year());
    last = std::max(last, s.last_year());
  }
  if (cutoff < first || cutoff >= last)
    throw DataError("cutoff " + std::to_string(cutoff) + " outside the data span " + std::to_string(first) + "-" +
                    std::to_string(last - 1));

  Holdout h;
  h.training = truncate_series(full, cutoff);
  const auto full_segments = segment_all(full, seg);
  std::set<std::string> new_crisis;
  for (const auto& s : full_segments.segments)
    if (s.t_start > cutoff) new_crisis.insert(s.country_code);

  for (const auto& s : full) {
    if (s.last_year() <= cutoff || s.first_year() > cutoff) {
      h.excluded.push_back({s.country_code, "no data on both sides of the cutoff"});
      continue;
    }
    if (new_crisis.count(s.country_code)) {
      h.excluded.push_back({s.country_code, "new crisis starts after the cutoff"});
      continue;
    }
    auto& t = h.truth[s.country_code];
    for (Year y = cutoff + 1; y <= s.last_year(); ++y) t[y] = s.at(y);
  }
  if (h.truth.empty()) throw DataError("build_holdout: empty validation set");
  return h;
}

namespace {

// Index of year in a forecast, or -1.
Index year_index(const CountryForecast& f, Year y) {
  auto it = std::find(f.years.begin(), f.years.end(), y);
  return it == f.years.end() ? -1 : static_cast<Index>(it - f.years.begin());
}

// Truth and forecast index at a horizon, or nullopt (with a note).
std::optional<std::pair<double, Index>> lookup(const CountryForecast& f, const TruthMap& truth, Year year,
                                               std::vector<std::string>* notes) {
  auto t = truth.find(f.country_code);
  if (t == truth.end()) return std::nullopt;
  auto v = t->second.find(year);
  const Index i = year_index(f, year);
  if (v == t->second.end() || i < 0) {
    if (notes) notes->push_back(f.country_code + ": no truth or forecast for " + std::to_string(year));
    return std::nullopt;
  }
  return std::make_pair(v->second, i);
}

}  // namespace

std::vector<PointScore> score_point(const std::vector<CountryForecast>& forecasts, const TruthMap& truth, Year cutoff,
                                    const std::vector<int>& horizons, std::vector<std::string>* notes) {
  std::vector<PointScore> out;
  for (int h : horizons) {
    PointScore bayes{h, "bayes"}, bench{h, "benchmark"};
    for (const auto& f : forecasts) {
      const auto hit = lookup(f, truth, cutoff + h, notes);
      if (!hit) continue;
      const auto [observed, i] = *hit;
      const double e_bayes = f.quantiles.at(i, 0.5) - observed;
      const double e_bench = f.benchmark(i) - observed;
      bayes.mean_error += e_bayes;
      bayes.mean_abs_error += std::abs(e_bayes);
      bench.mean_error += e_bench;
      bench.mean_abs_error += std::abs(e_bench);
      ++bayes.n;
      ++bench.n;
    }
    for (auto* s : {&bayes, &bench}) {
      if (s->n > 0) {
        s->mean_error /= static_cast<double>(s->n);
        s->mean_abs_error /= static_cast<double>(s->n);
      } else {
        s->mean_error = s->mean_abs_error = std::nan("");
      }
      out.push_back(*s);
    }
  }
  return out;
}

std::vector<CoverageScore> score_coverage(const std::vector<CountryForecast>& forecasts, const TruthMap& truth,
                                          Year cutoff, const std::vector<int>& horizons,
                                          const std::vector<double>& levels, std::vector<std::string>* notes) {
  std::vector<CoverageScore> out;
  for (int h : horizons) {
    for (double level : levels) {
      CoverageScore s{h, level};
      Index covered = 0;
      for (const auto& f : forecasts) {
        const auto hit = lookup(f, truth, cutoff + h, notes);
        if (!hit) continue;
        const auto [observed, i] = *hit;
        const auto [lo, hi] = f.quantiles.interval(i, level);
        if (observed >= lo && observed <= hi) ++covered;
        ++s.n;
      }
      s.coverage = s.n ? static_cast<double>(covered) / static_cast<double>(s.n) : std::nan("");
      out.push_back(s);
    }
  }
  return out;
}

ValidationResult run_validation(const std::vector<CountrySeries>& full, const ValidationConfig& cfg,
                                const PipelineSettings& settings) {
  cfg.validate();
  const Holdout holdout = build_holdout(full, cfg.cutoff, settings.segment);

  PeakScoreConfig seg = settings.segment;
  seg.recent_peak_year = cfg.cutoff - cfg.recent_peak_lag;
  const auto segmentation = segment_all(holdout.training, seg);
  const ModelData data = make_model_data(holdout.training, segmentation.segments);
  const PosteriorDraws draws = fit(data, settings.sampler);

  ProjectionConfig proj = settings.projection;
  proj.horizon = std::max(proj.horizon, *std::max_element(cfg.horizons.begin(), cfg.horizons.end()));

  ValidationResult result;
  result.warnings = draws.warnings;
  result.report.cutoff = cfg.cutoff;
  for (const auto& e : holdout.excluded) result.report.notes.push_back(e.country_code + ": " + e.reason);

  for (const auto& s : holdout.training) {
    if (!holdout.truth.count(s.country_code)) continue;
    const CrisisSegment* ongoing = nullptr;
    for (const auto& seg_m : segmentation.segments)
      if (seg_m.country_code == s.country_code && seg_m.status != CrisisStatus::Ended) ongoing = &seg_m;
    if (!ongoing) {
      result.report.notes.push_back(s.country_code + ": no ongoing crisis at the cutoff, not scored");
      continue;
    }
    ProjectionSet p = project_crisis(*ongoing, crisis_draws(draws, ongoing->crisis_id, s.country_code),
                                     s.at(ongoing->t_last), proj);
    const auto bench = project_benchmark(s.r(s.size() - 1), s.last_year(), proj.horizon);
    CountryForecast f;
    f.country_code = s.country_code;
    f.years = p.years;
    f.quantiles = p.quantiles;
    f.benchmark = bench.values.tail(proj.horizon);
    result.forecasts.push_back(std::move(f));
    result.projections.push_back(std::move(p));
  }

  result.report.point = score_point(result.forecasts, holdout.truth, cfg.cutoff, cfg.horizons, &result.report.notes);
  result.report.coverage = score_coverage(result.forecasts, holdout.truth, cfg.cutoff, cfg.horizons,
                                          cfg.coverage_levels);
  return result;
}

}  // namespace crisisflow
