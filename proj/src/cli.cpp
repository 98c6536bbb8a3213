#include "crisisflow/cli.hpp"

#include "crisisflow/config.hpp"
#include "crisisflow/csv.hpp"
#include "crisisflow/io.hpp"
#include "crisisflow/report.hpp"
#include "crisisflow/synthetic.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace crisisflow {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::string config, counts, population, segments, draws, projections, out, out_dir, audit, diagnostics;
  std::string emit_draws;
  std::uint64_t seed = 0;
  int chains = 0, warmup = 0, keep = 0, thin = 0, horizon = 0, delta_max = 0, cutoff = 0, countries = 0;
  std::vector<int> horizons;
};

// Flag values that override the config file, keyed by config name.
struct Overrides {
  std::vector<std::pair<CLI::Option*, std::function<void(json&)>>> items;

  template <class T>
  void add(CLI::Option* opt, const char* key, const T& value) {
    items.emplace_back(opt, [key, &value](json& j) { j[key] = value; });
  }
  json collect() const {
    json j = json::object();
    for (const auto& [opt, set] : items)
      if (opt->count()) set(j);
    return j;
  }
};

PipelineConfig resolve_config(const Options& o, const Overrides& ov) {
  PipelineConfig cfg = load_config(o.config);
  apply_config(cfg, ov.collect());
  cfg.validate();
  std::cerr << "crisisflow: seed=" << cfg.seed() << " config=" << cfg.to_json().dump() << '\n';
  return cfg;
}

std::string provenance(const PipelineConfig& cfg) { return provenance_line(cfg.hash(), cfg.seed()); }

// Writes through a buffer so a failed stage leaves no partial file behind.
void write_file(const std::string& path, const std::function<void(std::ostream&)>& emit) {
  std::ostringstream buf;
  emit(buf);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << buf.str();
  if (!out) throw DataError("write failed: " + path);
}

void emit_audit(const Options& o, const std::vector<Exclusion>& excluded) {
  if (o.audit.empty()) {
    write_audit(std::cerr, excluded);
    return;
  }
  write_file(o.audit, [&](std::ostream& out) { write_audit(out, excluded); });
}

// Counts and population joined, then filtered; exclusions go to the audit.
std::vector<CountrySeries> load_series(const Options& o, const PipelineConfig& cfg,
                                       std::vector<Exclusion>* excluded) {
  const auto counts = parse_refugee_counts(o.counts, cfg.excluded_codes);
  const auto pops = parse_population(o.population);
  auto filtered = filter_countries(build_proportion_series(counts.rows, pops), cfg.filter);
  if (counts.skipped) std::cerr << "crisisflow: skipped " << counts.skipped << " rows with excluded codes\n";
  excluded->insert(excluded->end(), filtered.excluded.begin(), filtered.excluded.end());
  return std::move(filtered.kept);
}

const CountrySeries& find_series(const std::vector<CountrySeries>& series, const std::string& code) {
  for (const auto& s : series)
    if (s.country_code == code) return s;
  throw DataError("no series for country " + code);
}

void run_ingest(const Options& o, const PipelineConfig& cfg) {
  std::vector<Exclusion> excluded;
  const auto series = load_series(o, cfg, &excluded);
  emit_audit(o, excluded);
  write_file(o.out, [&](std::ostream& out) { write_series_csv(out, provenance(cfg), series); });
}

void run_segment(const Options& o, const PipelineConfig& cfg) {
  std::vector<Exclusion> excluded;
  const auto series = load_series(o, cfg, &excluded);
  const auto seg = segment_all(series, cfg.segment);
  excluded.insert(excluded.end(), seg.excluded.begin(), seg.excluded.end());
  emit_audit(o, excluded);
  write_file(o.out, [&](std::ostream& out) { write_segments_csv(out, provenance(cfg), seg.segments); });
}

void run_fit(const Options& o, const PipelineConfig& cfg) {
  std::vector<Exclusion> excluded;
  const auto series = load_series(o, cfg, &excluded);
  const auto segments = read_segments_csv(o.segments);
  const auto draws = fit(make_model_data(series, segments), cfg.sampler);
  for (const auto& w : draws.warnings) std::cerr << "crisisflow: warning: " << w << '\n';
  write_file(o.out, [&](std::ostream& out) { write_draws_csv(out, provenance(cfg), draws); });
  const std::string diag = o.diagnostics.empty() ? (fs::path(o.out).parent_path() / "diagnostics.csv").string()
                                                 : o.diagnostics;
  write_file(diag, [&](std::ostream& out) { write_diagnostics_csv(out, provenance(cfg), draws); });
}

void run_project(const Options& o, const PipelineConfig& cfg) {
  std::vector<Exclusion> excluded;
  const auto series = load_series(o, cfg, &excluded);
  const auto segments = read_segments_csv(o.segments);
  const auto draws = read_draws_csv(o.draws);
  std::vector<ProjectionSet> projections;
  std::map<std::string, BenchmarkProjection> benchmarks;
  for (const auto& seg : segments) {
    if (seg.status == CrisisStatus::Ended) continue;
    const auto& s = find_series(series, seg.country_code);
    projections.push_back(
        project_crisis(seg, crisis_draws(draws, seg.crisis_id, seg.country_code), s.at(seg.t_last), cfg.projection));
    auto bench = project_benchmark(s.r(s.size() - 1), s.last_year(), cfg.projection.horizon);
    bench.country_code = s.country_code;
    benchmarks[s.country_code] = std::move(bench);
  }
  write_file(o.out, [&](std::ostream& out) { write_projections_csv(out, provenance(cfg), projections, benchmarks); });
  if (!o.emit_draws.empty())
    write_file(o.emit_draws, [&](std::ostream& out) { write_trajectories_csv(out, provenance(cfg), projections); });
}

void run_validate(const Options& o, const PipelineConfig& cfg) {
  std::vector<Exclusion> excluded;
  const auto series = load_series(o, cfg, &excluded);
  emit_audit(o, excluded);
  const auto result = run_validation(series, cfg.validation, {cfg.segment, cfg.sampler, cfg.projection});
  for (const auto& w : result.warnings) std::cerr << "crisisflow: warning: " << w << '\n';
  for (const auto& n : result.report.notes) std::cerr << "crisisflow: note: " << n << '\n';
  write_file(o.out, [&](std::ostream& out) { write_validation_report_csv(out, provenance(cfg), result.report); });
}

void run_report(const Options& o, const PipelineConfig& cfg) {
  std::vector<Exclusion> excluded;
  const auto series = load_series(o, cfg, &excluded);
  const auto segments = read_segments_csv(o.segments);
  const auto rows = read_projections_csv(o.projections);
  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  write_file((dir / "growth_lengths_hist.csv").string(), [&](std::ostream& out) {
    write_growth_histogram_csv(out, provenance(cfg), growth_length_histogram(segments));
  });
  std::map<std::string, std::vector<ProjectionRow>> by_country;
  for (const auto& r : rows) by_country[r.country_code].push_back(r);
  for (const auto& [code, country_rows] : by_country) {
    const auto& s = find_series(series, code);
    write_file((dir / (code + ".svg")).string(),
               [&](std::ostream& out) { write_fan_chart_svg(out, s, country_rows); });
  }
}

void run_simulate(const Options& o, const PipelineConfig& cfg) {
  SyntheticConfig sc;
  if (o.countries > 0) sc.n_countries = o.countries;
  const auto data = simulate_dataset(sc, cfg.seed());
  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  write_file((dir / "counts.csv").string(), [&](std::ostream& out) {
    out << provenance(cfg) << '\n';
    write_counts_csv(out, data.counts);
  });
  write_file((dir / "population.csv").string(), [&](std::ostream& out) {
    out << provenance(cfg) << '\n';
    write_population_csv(out, data.population);
  });
}

}  // namespace

int dispatch(int argc, char** argv) {
  CLI::App app{"Bayesian projection of refugee crises", "crisisflow"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Options o;
  Overrides ov;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    ov.add(sub->add_option("--seed", o.seed, "Random seed"), "seed", o.seed);
  };
  auto data_inputs = [&](CLI::App* sub) {
    sub->add_option("--counts", o.counts, "counts.csv")->required()->check(CLI::ExistingFile);
    sub->add_option("--population", o.population, "population.csv")->required()->check(CLI::ExistingFile);
  };
  auto sampler_flags = [&](CLI::App* sub) {
    ov.add(sub->add_option("--chains", o.chains), "chains", o.chains);
    ov.add(sub->add_option("--warmup", o.warmup), "warmup_iters", o.warmup);
    ov.add(sub->add_option("--keep", o.keep), "keep_iters", o.keep);
    ov.add(sub->add_option("--thin", o.thin), "thin", o.thin);
  };

  auto* ingest = app.add_subcommand("ingest", "Join counts with population and apply inclusion filters");
  common(ingest);
  data_inputs(ingest);
  ingest->add_option("--out", o.out, "series.csv")->required();
  ingest->add_option("--audit", o.audit, "Audit log file (default: stderr)");

  auto* segment = app.add_subcommand("segment", "Split each series into crises and classify them");
  common(segment);
  data_inputs(segment);
  segment->add_option("--out", o.out, "segments.csv")->required();
  segment->add_option("--audit", o.audit, "Audit log file (default: stderr)");

  auto* fit_cmd = app.add_subcommand("fit", "Sample the posterior");
  common(fit_cmd);
  data_inputs(fit_cmd);
  sampler_flags(fit_cmd);
  fit_cmd->add_option("--segments", o.segments, "segments.csv")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--out", o.out, "draws.csv")->required();
  fit_cmd->add_option("--diagnostics", o.diagnostics, "diagnostics.csv (default: next to --out)");

  auto* project = app.add_subcommand("project", "Project ongoing crises from posterior draws");
  common(project);
  data_inputs(project);
  project->add_option("--draws", o.draws, "draws.csv")->required()->check(CLI::ExistingFile);
  project->add_option("--segments", o.segments, "segments.csv")->required()->check(CLI::ExistingFile);
  ov.add(project->add_option("--horizon", o.horizon, "Years ahead"), "horizon", o.horizon);
  ov.add(project->add_option("--delta-max", o.delta_max, "Largest remaining growth duration"), "delta_max",
         o.delta_max);
  project->add_option("--out", o.out, "projections.csv")->required();
  project->add_option("--emit-draws", o.emit_draws, "Also write draw-level trajectories here");

  auto* validate = app.add_subcommand("validate", "Hold out years after a cutoff and score forecasts");
  common(validate);
  data_inputs(validate);
  sampler_flags(validate);
  ov.add(validate->add_option("--cutoff", o.cutoff, "Last training year"), "cutoff", o.cutoff);
  ov.add(validate->add_option("--horizons", o.horizons, "Comma-separated horizons")->delimiter(','), "horizons",
         o.horizons);
  ov.add(validate->add_option("--delta-max", o.delta_max), "delta_max", o.delta_max);
  validate->add_option("--out", o.out, "validation_report.csv")->required();
  validate->add_option("--audit", o.audit, "Audit log file (default: stderr)");

  auto* report = app.add_subcommand("report", "Fan-chart SVGs and the growth-length histogram");
  common(report);
  data_inputs(report);
  report->add_option("--projections", o.projections, "projections.csv")->required()->check(CLI::ExistingFile);
  report->add_option("--segments", o.segments, "segments.csv")->required()->check(CLI::ExistingFile);
  report->add_option("--out-dir", o.out_dir, "Output directory")->required();

  auto* simulate = app.add_subcommand("simulate", "Write a synthetic dataset drawn from the model");
  common(simulate);
  simulate->add_option("--countries", o.countries, "Number of countries")->check(CLI::PositiveNumber);
  simulate->add_option("--out-dir", o.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const PipelineConfig cfg = resolve_config(o, ov);
    if (ingest->parsed()) run_ingest(o, cfg);
    else if (segment->parsed()) run_segment(o, cfg);
    else if (fit_cmd->parsed()) run_fit(o, cfg);
    else if (project->parsed()) run_project(o, cfg);
    else if (validate->parsed()) run_validate(o, cfg);
    else if (report->parsed()) run_report(o, cfg);
    else if (simulate->parsed()) run_simulate(o, cfg);
  } catch (const ConfigError& e) {
    std::cerr << "crisisflow: config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "crisisflow: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int dispatch(const std::vector<std::string>& args) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("crisisflow");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return dispatch(static_cast<int>(argv.size()), argv.data());
}

}  // namespace crisisflow
