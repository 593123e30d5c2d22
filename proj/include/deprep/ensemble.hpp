#pragma once

#include <array>
#include <numeric>
#include <stdexcept>

#include "deprep/basis.hpp"

// Diagonal mixtures over the eight entangled basis states plus a junk weight
// for population outside that span.

namespace deprep {

inline constexpr double kWeightTol = 1e-12;

class PairEnsemble {
 public:
  PairEnsemble(const std::array<double, kBasisCount>& weights, double junk)
      : w_(weights), junk_(junk) {
    double sum = junk_;
    for (double& w : w_) {
      if (w < -kWeightTol) throw std::invalid_argument("negative basis weight");
      if (w < 0.0) w = 0.0;
      sum += w;
    }
    if (junk_ < -kWeightTol) throw std::invalid_argument("negative junk weight");
    if (junk_ < 0.0) junk_ = 0.0;
    if (std::abs(sum - 1.0) > kWeightTol) {
      throw std::invalid_argument("ensemble weights must sum to 1");
    }
  }

  double weight(DepState s) const { return w_[static_cast<int>(s)]; }
  const std::array<double, kBasisCount>& weights() const { return w_; }
  double junk() const { return junk_; }
  double fidelity() const { return w_[static_cast<int>(DepState::PhiPlus)]; }

 private:
  std::array<double, kBasisCount> w_;
  double junk_;
};

// Weight f on PhiPlus, (1-f)/7 on each of the other seven states, no junk.
inline PairEnsemble make_werner(double f) {
  require_probability(f, "werner fidelity");
  std::array<double, kBasisCount> w;
  w.fill((1.0 - f) / 7.0);
  w[static_cast<int>(DepState::PhiPlus)] = f;
  return PairEnsemble(w, 0.0);
}

inline double fidelity(const PairEnsemble& e) { return e.fidelity(); }

}  // namespace deprep
