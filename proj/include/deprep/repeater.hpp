#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "deprep/ensemble.hpp"
#include "deprep/oracle.hpp"
#include "deprep/purify.hpp"

// Nested repeater chain: pairwise swapping of adjacent links with optional
// purification rounds after each level, in a closed-form mode and an exact
// density-matrix mode.

namespace deprep {

// Label-level composition of two links under an announced-outcome joint
// measurement with the matching correction plates: output labels are the
// bitwise XOR of the input labels, junk begets junk. The law is exact for
// ideal node operations, which is the only regime the closed-form chain uses;
// node imperfections enter through the density-matrix mode instead.
inline PairEnsemble swap_links(const PairEnsemble& left, const PairEnsemble& right,
                               const NoiseParams& noise = {}) {
  validate(noise);
  std::array<double, kBasisCount> weights{};
  for (DepState s : kAllDepStates) {
    for (DepState t : kAllDepStates) {
      int out = static_cast<int>(s) ^ static_cast<int>(t);
      weights[out] += left.weight(s) * right.weight(t);
    }
  }
  double junk = 1.0 - (1.0 - left.junk()) * (1.0 - right.junk());
  return PairEnsemble(weights, junk);
}

enum class ChainMode { Analytic, Oracle };

struct ChainConfig {
  int segments = 2;          // number of elementary links, a power of two
  double f0 = 0.95;          // per-segment seed fidelity
  int rounds_per_level = 0;  // purification rounds after each nesting level
  NoiseParams noise{};
  ChainMode mode = ChainMode::Analytic;
};

struct ChainReport {
  double final_fidelity = 0.0;
  std::vector<double> per_level_fidelity;  // after each level's swap and rounds
  double expected_cost = 0.0;              // elementary pairs per delivered pair
  int levels = 0;
};

class ChainCollapseError : public std::runtime_error {
 public:
  ChainCollapseError(int level, double fidelity)
      : std::runtime_error("post-swap fidelity " + std::to_string(fidelity) +
                           " at level " + std::to_string(level) +
                           " is at or below the purification threshold"),
        level_(level),
        fidelity_(fidelity) {}

  int level() const { return level_; }
  double fidelity() const { return fidelity_; }

 private:
  int level_;
  double fidelity_;
};

namespace detail {

inline bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

// Both modes fold a representative scalar fidelity: each primitive acts on
// fresh uniform-error pairs at the current fidelity, which is the same
// equal-fidelity assumption the closed forms make.
inline double chain_swap(double f, const ChainConfig& cfg) {
  if (cfg.mode == ChainMode::Analytic) {
    return fidelity(swap_links(make_werner(f), make_werner(f), cfg.noise));
  }
  FullPairState link = embed(make_werner(f));
  return fidelity(oracle::simulate_swap(link, link, cfg.noise).state);
}

inline RoundResult chain_round(double f, const ChainConfig& cfg) {
  if (cfg.mode == ChainMode::Analytic) {
    return noisy_round(f, cfg.noise);
  }
  FullPairState pair = embed(make_werner(f));
  oracle::Step1Result corrected = oracle::simulate_step1_optics(pair, cfg.noise.p1);
  oracle::DistillationResult kept =
      oracle::simulate_distillation(corrected.state, corrected.state, cfg.noise);
  return {fidelity(kept.state), kept.p_succ, 2};
}

}  // namespace detail

inline ChainReport run_repeater(const ChainConfig& cfg) {
  if (!detail::is_power_of_two(cfg.segments)) {
    throw std::invalid_argument("segment count must be a positive power of two");
  }
  if (cfg.mode == ChainMode::Oracle && cfg.segments > 8) {
    throw std::invalid_argument("density-matrix mode supports at most 8 segments");
  }
  if (cfg.rounds_per_level < 0) {
    throw std::invalid_argument("rounds per level must be non-negative");
  }
  require_probability(cfg.f0, "initial fidelity");
  validate(cfg.noise);

  ChainReport report;
  report.levels = static_cast<int>(std::lround(std::log2(cfg.segments)));
  double f = cfg.f0;
  double cost = 1.0;
  double floor = cfg.rounds_per_level > 0 ? threshold(Protocol::NoisyDep, cfg.noise) : 0.0;
  for (int level = 1; level <= report.levels; ++level) {
    f = detail::chain_swap(f, cfg);
    cost *= 2.0;
    if (cfg.rounds_per_level > 0 && f <= floor) throw ChainCollapseError(level, f);
    for (int round = 0; round < cfg.rounds_per_level; ++round) {
      RoundResult rr = detail::chain_round(f, cfg);
      f = rr.f_out;
      cost *= 2.0 / rr.p_succ;
    }
    report.per_level_fidelity.push_back(f);
  }
  report.final_fidelity = f;
  report.expected_cost = cost;
  return report;
}

// End-to-end fidelity of an unpurified chain of n sequential links, for
// n = 1..n_max.
inline std::vector<std::pair<int, double>> decay_scan(int n_max, double f0,
                                                      const NoiseParams& noise = {}) {
  if (n_max < 2) throw std::invalid_argument("link count must be at least 2");
  require_probability(f0, "initial fidelity");
  validate(noise);
  std::vector<std::pair<int, double>> points;
  points.reserve(static_cast<std::size_t>(n_max));
  PairEnsemble segment = make_werner(f0);
  PairEnsemble chain = segment;
  points.emplace_back(1, fidelity(chain));
  for (int n = 2; n <= n_max; ++n) {
    chain = swap_links(chain, segment, noise);
    points.emplace_back(n, fidelity(chain));
  }
  return points;
}

}  // namespace deprep
