#pragma once

// Adaptive random-walk Metropolis-within-Gibbs over blocks of an
// unconstrained vector.
//
// Each block keeps its own proposal Cholesky factor and a log step scale.
// During warmup the scale follows a Robbins-Monro recursion toward
// target_accept and the factor is re-estimated from the block's empirical
// covariance at the end of doubling windows. Everything is frozen after
// warmup.

#include "crisisflow/rng.hpp"
#include "crisisflow/types.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace crisisflow {

struct SamplerConfig {
  int chains = 4;
  int warmup_iters = 5000;
  int keep_iters = 5000;
  int thin = 5;
  std::uint64_t seed = 20240101;
  double target_accept = 0.35;
  double rhat_threshold = 1.01;

  void validate() const;
};

struct Block {
  Index offset = 0;
  Index size = 0;
};

/// A target whose block update only needs the terms touching that block.
template <typename T>
concept BlockTarget = requires(const T& t, const Vector& z, std::size_t b) {
  { t.block_log_density(z, b) } -> std::convertible_to<double>;
};

/// Adapts a plain log-density function to the block interface.
struct FullTarget {
  std::function<double(const Vector&)> log_density;
  double block_log_density(const Vector& z, std::size_t) const { return log_density(z); }
};

struct ChainResult {
  Matrix samples;          // retained states, one per row
  std::vector<int> iters;  // post-warmup iteration of each row
  Vector accept_rate;      // post-warmup acceptance per block
  Vector final_scale;      // adapted step scale per block
};

namespace detail {

struct BlockState {
  Matrix chol;
  double log_scale = 0;
  // Welford accumulators over the current adaptation window.
  Vector mean;
  Matrix m2;
  Index count = 0;
  Index accepted = 0;
  Index proposed = 0;
};

inline void window_reset(BlockState& s, Index size) {
  s.mean = Vector::Zero(size);
  s.m2 = Matrix::Zero(size, size);
  s.count = 0;
}

}  // namespace detail

template <BlockTarget Target>
ChainResult run_chain(const SamplerConfig& cfg, int chain_id, const Vector& z0, const Target& target,
                      const std::vector<Block>& blocks) {
  Rng rng = make_stream(cfg.seed, {kStreamChain, static_cast<std::uint64_t>(chain_id)});
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  Vector z = z0;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    if (!std::isfinite(target.block_log_density(z, b)))
      throw std::runtime_error("infeasible init: chain " + std::to_string(chain_id) + " block " + std::to_string(b));

  std::vector<detail::BlockState> state(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Index d = blocks[b].size;
    state[b].chol = Matrix::Identity(d, d) * 0.1;
    state[b].log_scale = std::log(2.38 / std::sqrt(static_cast<double>(d)));
    detail::window_reset(state[b], d);
  }

  // Covariance windows of 75, 150, 300, ... iterations, the last one
  // stretched to end at 90% of warmup.
  const int adapt_end = static_cast<int>(0.9 * cfg.warmup_iters);
  int next_window = std::min(75, adapt_end);
  int window_len = 75;

  const int n_keep = cfg.keep_iters / cfg.thin;
  ChainResult out;
  out.samples.resize(n_keep, z.size());
  out.iters.reserve(static_cast<std::size_t>(n_keep));

  Vector step;
  const int total = cfg.warmup_iters + cfg.keep_iters;
  for (int it = 0; it < total; ++it) {
    const bool warmup = it < cfg.warmup_iters;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      auto& s = state[b];
      const Block& blk = blocks[b];
      const double current = target.block_log_density(z, b);
      step.resize(blk.size);
      for (Index i = 0; i < blk.size; ++i) step(i) = normal(rng);
      const Vector saved = z.segment(blk.offset, blk.size);
      step = s.chol.template triangularView<Eigen::Lower>() * step;
      z.segment(blk.offset, blk.size) += std::exp(s.log_scale) * step;
      const double proposed = target.block_log_density(z, b);
      const double log_ratio = proposed - current;
      const bool accept = std::isfinite(proposed) && (log_ratio >= 0 || std::log(uniform(rng)) < log_ratio);
      if (!accept) z.segment(blk.offset, blk.size) = saved;

      if (warmup) {
        const double alpha = std::isfinite(log_ratio) ? std::min(1.0, std::exp(log_ratio)) : 0.0;
        const double gain = std::pow(static_cast<double>(it + 1), -0.6);
        s.log_scale += gain * (alpha - cfg.target_accept);
        if (it < adapt_end) {
          ++s.count;
          const Vector x = z.segment(blk.offset, blk.size);
          const Vector delta = x - s.mean;
          s.mean += delta / static_cast<double>(s.count);
          s.m2 += delta * (x - s.mean).transpose();
        }
      } else {
        ++s.proposed;
        if (accept) ++s.accepted;
      }
    }

    if (warmup && it + 1 == next_window && it + 1 <= adapt_end) {
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        auto& s = state[b];
        const Index d = blocks[b].size;
        if (s.count > 2 * d + 10) {
          Matrix cov = s.m2 / static_cast<double>(s.count - 1);
          // Shrink toward a small diagonal so a stuck window cannot collapse
          // the proposal.
          const double n = static_cast<double>(s.count);
          cov = (n / (n + 5.0)) * cov + (5.0 / (n + 5.0)) * 1e-3 * Matrix::Identity(d, d);
          Eigen::LLT<Matrix> llt(cov);
          if (llt.info() == Eigen::Success) {
            s.chol = llt.matrixL();
            s.log_scale = std::log(2.38 / std::sqrt(static_cast<double>(d)));
          }
        }
        detail::window_reset(s, d);
      }
      window_len *= 2;
      next_window = std::min(next_window + window_len, adapt_end);
      if (adapt_end - next_window < window_len) next_window = adapt_end;
    }

    if (!warmup) {
      const int k = it - cfg.warmup_iters;
      if ((k + 1) % cfg.thin == 0 && static_cast<int>(out.iters.size()) < n_keep) {
        out.samples.row(static_cast<Index>(out.iters.size())) = z.transpose();
        out.iters.push_back(k + 1);
      }
    }
  }

  out.accept_rate.resize(static_cast<Index>(blocks.size()));
  out.final_scale.resize(static_cast<Index>(blocks.size()));
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& s = state[b];
    out.accept_rate(static_cast<Index>(b)) =
        s.proposed ? static_cast<double>(s.accepted) / static_cast<double>(s.proposed) : 0.0;
    out.final_scale(static_cast<Index>(b)) = std::exp(s.log_scale);
  }
  return out;
}

/// Single-block convenience overload for a plain log-density.
inline ChainResult run_chain(const SamplerConfig& cfg, int chain_id, const Vector& z0,
                             std::function<double(const Vector&)> logpost) {
  return run_chain(cfg, chain_id, z0, FullTarget{std::move(logpost)}, {Block{0, z0.size()}});
}

}  // namespace crisisflow
