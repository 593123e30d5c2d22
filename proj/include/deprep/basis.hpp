#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

// Basis bookkeeping for photon pairs entangled in both polarization and
// frequency. Photon a occupies {H,V} x {w_s, w_s'}, photon b {H,V} x
// {w_i, w_i'}. Computational index: pol_a*8 + band_a*4 + pol_b*2 + band_b.

namespace deprep {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr int kPairDim = 16;
inline constexpr int kBasisCount = 8;

enum class Pol : int { H = 0, V = 1 };
enum class Band : int { Base = 0, Shifted = 1 };

// Index of one photon inside its 4-dim (pol, band) space.
inline int photon_index(Pol p, Band b) {
  return (static_cast<int>(p) << 1) | static_cast<int>(b);
}

inline int pair_index(int photon_a, int photon_b) { return photon_a * 4 + photon_b; }

inline void require_probability(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0, 1]");
  }
}

// The eight maximally entangled basis states. The enum value packs the label
// bits: bit 2 set when photon a's polarization disagrees with its band
// pattern, bit 1 likewise for photon b, bit 0 set for a minus superposition.
enum class DepState : int {
  PhiPlus = 0,
  PhiMinus = 1,
  PsiPlus = 2,
  PsiMinus = 3,
  GammaPlus = 4,
  GammaMinus = 5,
  UpsilonPlus = 6,
  UpsilonMinus = 7,
};

inline constexpr std::array<DepState, kBasisCount> kAllDepStates = {
    DepState::PhiPlus,     DepState::PhiMinus,    DepState::PsiPlus,
    DepState::PsiMinus,    DepState::GammaPlus,   DepState::GammaMinus,
    DepState::UpsilonPlus, DepState::UpsilonMinus,
};

struct StateLabel {
  int mismatch_a = 0;
  int mismatch_b = 0;
  int minus = 0;
};

inline StateLabel label_of(DepState s) {
  int v = static_cast<int>(s);
  return {(v >> 2) & 1, (v >> 1) & 1, v & 1};
}

inline DepState state_of(const StateLabel& l) {
  return static_cast<DepState>(((l.mismatch_a & 1) << 2) | ((l.mismatch_b & 1) << 1) |
                               (l.minus & 1));
}

// Photon basis index with the given band mismatch and polarization; the band
// equals pol XOR mismatch.
inline int mismatch_photon_index(int mismatch, int pol) {
  return pol * 2 + (pol ^ mismatch);
}

// Computational indices of the two superposed product terms. Term x carries
// polarization x XOR mismatch on each photon.
inline std::array<int, 2> term_indices(DepState s) {
  StateLabel l = label_of(s);
  int t0 = pair_index(mismatch_photon_index(l.mismatch_a, l.mismatch_a),
                      mismatch_photon_index(l.mismatch_b, l.mismatch_b));
  int t1 = pair_index(mismatch_photon_index(l.mismatch_a, 1 ^ l.mismatch_a),
                      mismatch_photon_index(l.mismatch_b, 1 ^ l.mismatch_b));
  return {t0, t1};
}

inline Vec basis_vector(DepState s) {
  auto t = term_indices(s);
  double sign = label_of(s).minus ? -1.0 : 1.0;
  Vec v = Vec::Zero(kPairDim);
  v(t[0]) = 1.0 / std::sqrt(2.0);
  v(t[1]) = sign / std::sqrt(2.0);
  return v;
}

inline const char* to_string(DepState s) {
  switch (s) {
    case DepState::PhiPlus: return "phi+";
    case DepState::PhiMinus: return "phi-";
    case DepState::PsiPlus: return "psi+";
    case DepState::PsiMinus: return "psi-";
    case DepState::GammaPlus: return "gamma+";
    case DepState::GammaMinus: return "gamma-";
    case DepState::UpsilonPlus: return "upsilon+";
    case DepState::UpsilonMinus: return "upsilon-";
  }
  return "?";
}

// Degenerate (frequency slaved to polarization) form. After bit-flip
// correction every photon satisfies band == pol; the pair then lives on
// these four computational indices.
inline constexpr std::array<int, 4> kDegenerateIndices = {0, 3, 12, 15};

inline bool is_degenerate_index(int pair_idx) {
  int a = pair_idx / 4;
  int b = pair_idx % 4;
  return (a == 0 || a == 3) && (b == 0 || b == 3);
}

// Bell states of the degenerate form. bit_flip selects phi-like vs psi-like,
// minus the relative sign. The phi-like pair coincides with PhiPlus/PhiMinus.
inline Vec degenerate_bell_vector(int bit_flip, int minus) {
  Vec v = Vec::Zero(kPairDim);
  int t0 = bit_flip ? pair_index(0, 3) : pair_index(0, 0);
  int t1 = bit_flip ? pair_index(3, 0) : pair_index(3, 3);
  v(t0) = 1.0 / std::sqrt(2.0);
  v(t1) = (minus ? -1.0 : 1.0) / std::sqrt(2.0);
  return v;
}

}  // namespace deprep
