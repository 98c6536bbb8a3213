#include "crisisflow/config.hpp"

#include "crisisflow/csv.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace crisisflow {

using nlohmann::json;

json PipelineConfig::to_json() const {
  return json{
      {"min_years", filter.min_years},
      {"min_prop", filter.min_prop},
      {"min_count", filter.min_count},
      {"excluded_codes", excluded_codes},
      {"window_w", segment.window_w},
      {"score_threshold_h", segment.score_threshold_h},
      {"crisis_floor", segment.crisis_floor},
      {"recent_peak_year", segment.recent_peak_year},
      {"growth_fraction", segment.growth_fraction},
      {"chains", sampler.chains},
      {"warmup_iters", sampler.warmup_iters},
      {"keep_iters", sampler.keep_iters},
      {"thin", sampler.thin},
      {"seed", sampler.seed},
      {"target_accept", sampler.target_accept},
      {"rhat_threshold", sampler.rhat_threshold},
      {"horizon", projection.horizon},
      {"delta_max", projection.delta_max},
      {"floor_value", projection.floor_value},
      {"cutoff", validation.cutoff},
      {"horizons", validation.horizons},
      {"coverage_levels", validation.coverage_levels},
      {"recent_peak_lag", validation.recent_peak_lag},
  };
}

std::uint64_t PipelineConfig::hash() const { return fnv1a(to_json().dump()); }

void PipelineConfig::validate() const {
  if (filter.min_years < 1) throw ConfigError("min_years must be positive");
  if (!(filter.min_prop >= 0 && filter.min_prop < 1)) throw ConfigError("min_prop must lie in [0, 1)");
  if (filter.min_count < 0) throw ConfigError("min_count must be non-negative");
  segment.validate();
  sampler.validate();
  projection.validate();
  validation.validate();
}

namespace {

template <class T>
T as(const json& v, const std::string& key) {
  bool ok = false;
  if constexpr (std::is_same_v<T, double>) ok = v.is_number();
  else if constexpr (std::is_unsigned_v<T>) ok = v.is_number_unsigned();
  else if constexpr (std::is_integral_v<T>) ok = v.is_number_integer();
  if (!ok) throw ConfigError("config key '" + key + "': expected " + (std::is_integral_v<T> ? "an integer" : "a number"));
  return v.get<T>();
}

template <class T>
std::vector<T> as_list(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError("config key '" + key + "': expected a list");
  std::vector<T> out;
  for (const auto& e : v) out.push_back(as<T>(e, key));
  return out;
}

std::set<std::string> as_codes(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError("config key '" + key + "': expected a list of strings");
  std::set<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ConfigError("config key '" + key + "': expected a list of strings");
    out.insert(e.get<std::string>());
  }
  return out;
}

}  // namespace

void apply_config(PipelineConfig& c, const json& obj) {
  if (!obj.is_object()) throw ConfigError("config must be a JSON object");
  using Setter = std::function<void(const json&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"min_years", [&](auto& v, auto& k) { c.filter.min_years = as<int>(v, k); }},
      {"min_prop", [&](auto& v, auto& k) { c.filter.min_prop = as<double>(v, k); }},
      {"min_count", [&](auto& v, auto& k) { c.filter.min_count = as<std::int64_t>(v, k); }},
      {"excluded_codes", [&](auto& v, auto& k) { c.excluded_codes = as_codes(v, k); }},
      {"window_w", [&](auto& v, auto& k) { c.segment.window_w = as<int>(v, k); }},
      {"score_threshold_h", [&](auto& v, auto& k) { c.segment.score_threshold_h = as<double>(v, k); }},
      {"crisis_floor", [&](auto& v, auto& k) { c.segment.crisis_floor = as<double>(v, k); }},
      {"recent_peak_year", [&](auto& v, auto& k) { c.segment.recent_peak_year = as<int>(v, k); }},
      {"growth_fraction", [&](auto& v, auto& k) { c.segment.growth_fraction = as<double>(v, k); }},
      {"chains", [&](auto& v, auto& k) { c.sampler.chains = as<int>(v, k); }},
      {"warmup_iters", [&](auto& v, auto& k) { c.sampler.warmup_iters = as<int>(v, k); }},
      {"keep_iters", [&](auto& v, auto& k) { c.sampler.keep_iters = as<int>(v, k); }},
      {"thin", [&](auto& v, auto& k) { c.sampler.thin = as<int>(v, k); }},
      {"seed",
       [&](auto& v, auto& k) {
         c.sampler.seed = as<std::uint64_t>(v, k);
         c.projection.seed = c.sampler.seed;
       }},
      {"target_accept", [&](auto& v, auto& k) { c.sampler.target_accept = as<double>(v, k); }},
      {"rhat_threshold", [&](auto& v, auto& k) { c.sampler.rhat_threshold = as<double>(v, k); }},
      {"horizon", [&](auto& v, auto& k) { c.projection.horizon = as<int>(v, k); }},
      {"delta_max", [&](auto& v, auto& k) { c.projection.delta_max = as<int>(v, k); }},
      {"floor_value", [&](auto& v, auto& k) { c.projection.floor_value = as<double>(v, k); }},
      {"cutoff", [&](auto& v, auto& k) { c.validation.cutoff = as<int>(v, k); }},
      {"horizons", [&](auto& v, auto& k) { c.validation.horizons = as_list<int>(v, k); }},
      {"coverage_levels", [&](auto& v, auto& k) { c.validation.coverage_levels = as_list<double>(v, k); }},
      {"recent_peak_lag", [&](auto& v, auto& k) { c.validation.recent_peak_lag = as<int>(v, k); }},
  };
  for (const auto& [key, value] : obj.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(value, key);
  }
}

PipelineConfig load_config(const std::string& path) {
  PipelineConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return cfg;
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  apply_config(cfg, obj);
  cfg.validate();
  return cfg;
}

}  // namespace crisisflow
