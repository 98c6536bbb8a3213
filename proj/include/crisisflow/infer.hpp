#pragma once

#include "crisisflow/model.hpp"
#include "crisisflow/sampler.hpp"
#include "crisisflow/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace crisisflow {

enum class Transform { Identity, Log, NegLog, Logit };

struct Coordinate {
  std::string name;
  Transform transform = Transform::Identity;
  // False where the prior is already a density of the transformed value
  // (logit asymptotes, log noise scales).
  bool jacobian = true;
};

/// Registry of the unconstrained coordinates:
///   [omega1, omega2, lambda] per crisis, [sigma1, sigma2] per country, then
///   the 13 global parameters.
class ParamLayout {
public:
  static constexpr Index kCrisisWidth = 3;
  static constexpr Index kCountryWidth = 2;
  static constexpr Index kGlobalWidth = 13;

  explicit ParamLayout(const ModelData& data);
  ParamLayout(const std::vector<int>& crisis_ids, const std::vector<std::string>& countries);

  Index dim() const { return static_cast<Index>(coords_.size()); }
  Index n_crises() const { return n_crises_; }
  Index n_countries() const { return n_countries_; }
  Index crisis_offset(Index m) const { return kCrisisWidth * m; }
  Index country_offset(Index c) const { return kCrisisWidth * n_crises_ + kCountryWidth * c; }
  Index global_offset() const { return kCrisisWidth * n_crises_ + kCountryWidth * n_countries_; }
  const std::vector<Coordinate>& coordinates() const { return coords_; }
  std::vector<std::string> names() const;

  /// Crisis blocks, then country blocks, then seven global sub-blocks.
  std::vector<Block> blocks() const;

  /// Throws std::invalid_argument on infeasible parameters.
  Vector transform(const ModelParams& params) const;
  ModelParams untransform(const Vector& z) const;

  /// Constrained value of every coordinate, in layout order.
  Vector constrained(const Vector& z) const;
  Vector unconstrained(const Vector& x) const;

  CrisisParams crisis(const Vector& z, Index m) const;
  CountryNoise country(const Vector& z, Index c) const;
  GlobalParams global(const Vector& z) const;

  double log_jacobian(const Vector& z) const;
  double log_jacobian(const Vector& z, Index offset, Index size) const;

private:
  Index n_crises_ = 0;
  Index n_countries_ = 0;
  std::vector<Coordinate> coords_;
};

/// Joint log-posterior in unconstrained space, with block-local evaluation.
class PosteriorTarget {
public:
  PosteriorTarget(const ModelData& data, const ParamLayout& layout) : data_(data), layout_(layout) {}

  double log_density(const Vector& z) const;
  double block_log_density(const Vector& z, std::size_t block) const;

private:
  const ModelData& data_;
  const ParamLayout& layout_;
};

/// Data-informed starting point, before jitter.
ModelParams initial_params(const ModelData& data);

/// initial_params jittered in unconstrained space from (seed, chain).
Vector init_chain(const ModelData& data, const ParamLayout& layout, std::uint64_t seed, int chain);

struct ParamDiagnostics {
  std::string name;
  double rhat = 0;
  double ess = 0;
};

struct PosteriorDraws {
  std::vector<std::string> names;
  Matrix values;  // K x dim, constrained scale
  std::vector<int> chain;
  std::vector<int> iter;
  std::uint64_t seed = 0;
  std::vector<ParamDiagnostics> diagnostics;
  std::vector<std::string> warnings;

  Index size() const { return values.rows(); }
  /// Column index of a named parameter; throws DataError if absent.
  Index column(const std::string& name) const;
};

struct FitOptions {
  // Holds the global block fixed at these values instead of sampling it.
  std::optional<GlobalParams> fixed_global;
};

PosteriorDraws fit(const ModelData& data, const SamplerConfig& cfg, const FitOptions& options = {});

/// Names used in draws files.
std::string crisis_param_name(const char* base, int crisis_id);
std::string country_param_name(const char* base, const std::string& country);
const std::vector<std::string>& global_param_names();

}  // namespace crisisflow
