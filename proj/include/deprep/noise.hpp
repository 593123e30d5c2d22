#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "deprep/density.hpp"

// Imperfect-apparatus models: eta-degraded single-qubit projection, the
// depolarizing one-qubit operation map, and the transmission channel that
// Werner-izes distributed pairs.

namespace deprep {

struct NoiseParams {
  double p1 = 0.99;
  double eta = 1.0;
};

inline void validate(const NoiseParams& n) {
  require_probability(n.p1, "p1");
  require_probability(n.eta, "eta");
}

inline bool is_ideal(const NoiseParams& n) { return n.p1 == 1.0 && n.eta == 1.0; }

// One photon's addressable two-level degrees of freedom; the value doubles as
// the qubit position in the 16-dim pair index.
enum class Dof : int { PolA = 0, BandA = 1, PolB = 2, BandB = 3 };

inline std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> povm_elements(double eta) {
  require_probability(eta, "eta");
  Eigen::Matrix2cd p0 = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd p1 = Eigen::Matrix2cd::Zero();
  p0(0, 0) = eta;
  p0(1, 1) = 1.0 - eta;
  p1(0, 0) = 1.0 - eta;
  p1(1, 1) = eta;
  return {p0, p1};
}

struct MeasurementOutcome {
  int bit = 0;
  double probability = 0.0;
  std::optional<FullPairState> post_state;
};

// Symmetric sqrt(P) rho sqrt(P) update; the POVM elements are diagonal, so
// their square roots are taken entrywise.
inline std::pair<MeasurementOutcome, MeasurementOutcome> noisy_measure(
    const FullPairState& state, Dof target, double eta) {
  require_probability(eta, "eta");
  auto [p0, p1] = povm_elements(eta);
  std::pair<MeasurementOutcome, MeasurementOutcome> out;
  std::array<const Eigen::Matrix2cd*, 2> povm = {&p0, &p1};
  std::array<MeasurementOutcome*, 2> slots = {&out.first, &out.second};
  for (int bit = 0; bit < 2; ++bit) {
    Eigen::Matrix2cd root = povm[bit]->cwiseSqrt();
    Mat post = conjugate_qubit(state.matrix(), root, static_cast<int>(target));
    double prob = post.trace().real();
    slots[bit]->bit = bit;
    slots[bit]->probability = prob;
    if (prob > 1e-15) {
      slots[bit]->post_state = FullPairState(post / prob);
    }
  }
  return out;
}

// p1-weighted mix of the exact conjugation with full depolarization of the
// target degree of freedom; exactly trace preserving.
inline FullPairState noisy_one_qubit_op(const FullPairState& state,
                                        const Eigen::Matrix2cd& u, Dof target,
                                        double p1) {
  require_probability(p1, "p1");
  int q = static_cast<int>(target);
  Mat ideal = conjugate_qubit(state.matrix(), u, q);
  if (p1 == 1.0) return FullPairState(ideal);
  Mat mixed = depolarize_qubit(state.matrix(), q);
  return FullPairState(p1 * ideal + (1.0 - p1) * mixed);
}

// One segment's distribution channel, parameterized by target fidelity.
inline PairEnsemble transmit(double f_target) { return make_werner(f_target); }

// Convenience fidelity-vs-length extrapolation for chain experiments; not a
// transmission law taken from any measured model.
inline double attenuation_fidelity(double length, double attenuation_length) {
  if (!(length >= 0.0) || !(attenuation_length > 0.0)) {
    throw std::domain_error("lengths must be non-negative with a positive scale");
  }
  return (1.0 + 7.0 * std::exp(-length / attenuation_length)) / 8.0;
}

}  // namespace deprep
