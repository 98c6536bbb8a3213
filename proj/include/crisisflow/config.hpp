#pragma once

// Pipeline configuration: a flat JSON object whose keys are the settings of
// each stage. Missing keys keep their defaults.

#include "crisisflow/ingest.hpp"
#include "crisisflow/project.hpp"
#include "crisisflow/sampler.hpp"
#include "crisisflow/segment.hpp"
#include "crisisflow/validate.hpp"

#include <json.hpp>

#include <cstdint>
#include <set>
#include <string>

namespace crisisflow {

struct PipelineConfig {
  FilterSettings filter;
  std::set<std::string> excluded_codes = default_excluded_codes();
  PeakScoreConfig segment;
  SamplerConfig sampler;
  ProjectionConfig projection;
  ValidationConfig validation;

  /// Single seed shared by sampling and projection.
  std::uint64_t seed() const { return sampler.seed; }

  nlohmann::json to_json() const;
  /// FNV-1a of the compact JSON dump; recorded in output headers.
  std::uint64_t hash() const;
  void validate() const;
};

/// Overlays the keys of `obj` onto `cfg`. Unknown keys and type mismatches
/// raise ConfigError naming the key.
void apply_config(PipelineConfig& cfg, const nlohmann::json& obj);

/// Defaults overlaid with the file at `path`; an empty path or empty file
/// yields the defaults.
PipelineConfig load_config(const std::string& path);

}  // namespace crisisflow
