#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include "deprep/density.hpp"
#include "deprep/noise.hpp"
#include "deprep/qop.hpp"

// Exact density-matrix models of the optical correction stage, the two-pair
// distillation step, and the two-link swap. These serve as ground truth for
// the scalar recursions; every agreement or discrepancy between the two is
// asserted in the test suite.

namespace deprep::oracle {

// Parity of polarization and band for one photon index. Even parity means the
// band is slaved to the polarization; odd parity marks a converted photon.
inline int photon_sector(int photon_index) {
  return ((photon_index >> 1) ^ photon_index) & 1;
}

namespace detail {

inline int pair_photon_index(int pair_index, int photon) {
  return photon == 0 ? (pair_index >> 2) : (pair_index & 3);
}

}  // namespace detail

// Operators on one photon's four-dimensional polarization-band block that act
// as Pauli operators on the slaved logical qubit and preserve the sector
// split.
inline Mat logical_x() { return kron(pauli_x(), pauli_x()); }
inline Mat logical_y() { return kron(pauli_y(), pauli_x()); }
inline Mat logical_z() { return kron(pauli_z(), pauli_id()); }

// Hadamard on the slaved logical qubit, identity on the odd sector.
inline Mat logical_hadamard() {
  const double r = 1.0 / std::sqrt(2.0);
  Mat h = Mat::Zero(4, 4);
  h(0, 0) = r;
  h(0, 3) = r;
  h(3, 0) = r;
  h(3, 3) = -r;
  h(1, 1) = 1.0;
  h(2, 2) = 1.0;
  return h;
}

namespace detail {

// Uniform average over the logical Pauli frame of one photon block. This is a
// full depolarizer of the logical qubit in each sector, so composing it with
// any plate drawn from the frame gives the same channel.
inline Mat logical_twirl_block(const Mat& rho, int first_qubit) {
  Mat out = rho;
  out += conjugate_block(rho, logical_x(), first_qubit, 2);
  out += conjugate_block(rho, logical_y(), first_qubit, 2);
  out += conjugate_block(rho, logical_z(), first_qubit, 2);
  return 0.25 * out;
}

// A wave plate succeeds with probability p1 and otherwise erases the logical
// qubit it targets.
inline Mat noisy_logical_plate(const Mat& rho, const Mat& plate, int first_qubit, double p1) {
  Mat intended = conjugate_block(rho, plate, first_qubit, 2);
  if (p1 == 1.0) return intended;
  return p1 * intended + (1.0 - p1) * logical_twirl_block(rho, first_qubit);
}

// Single physical qubit plate with the same reliability convention.
inline Mat noisy_single_qubit(const Mat& rho, const Eigen::Matrix2cd& u, int qubit, double p1) {
  Mat intended = conjugate_qubit(rho, u, qubit);
  if (p1 == 1.0) return intended;
  return p1 * intended + (1.0 - p1) * depolarize_qubit(rho, qubit);
}

}  // namespace detail

enum class ElementKind { Wdm, Pbs, Hwp, WaveConverter };

struct OpticalElement {
  ElementKind kind = ElementKind::Wdm;
  int photon = 0;   // 0 = left photon, 1 = right photon
  double p1 = 1.0;  // plate reliability, used by Hwp only
};

// One correction-arm element as a channel on the pair state.
//   Wdm, Pbs       lossless routing; the sector split they realize is carried
//                  by the Hwp channel, which separates the sectors.
//   Hwp            keeps the even sector, applies a noisy logical X on the odd
//                  sector, and drops cross-sector coherence (the two sectors
//                  travel distinct paths between split and recombination).
//   WaveConverter  re-slaves the band to the polarization, folding the odd
//                  sector onto the even one without touching polarization.
inline FullPairState apply_element(const FullPairState& state, const OpticalElement& element) {
  if (element.photon != 0 && element.photon != 1) {
    throw std::invalid_argument("photon selector must be 0 or 1");
  }
  require_probability(element.p1, "p1");
  const int first_qubit = element.photon == 0 ? 0 : 2;
  switch (element.kind) {
    case ElementKind::Wdm:
    case ElementKind::Pbs:
      return state;
    case ElementKind::Hwp: {
      const Mat& rho = state.matrix();
      Mat kept = Mat::Zero(kPairDim, kPairDim);
      Mat routed = Mat::Zero(kPairDim, kPairDim);
      for (int r = 0; r < kPairDim; ++r) {
        int sr = photon_sector(detail::pair_photon_index(r, element.photon));
        for (int c = 0; c < kPairDim; ++c) {
          int sc = photon_sector(detail::pair_photon_index(c, element.photon));
          if (sr == 0 && sc == 0) kept(r, c) = rho(r, c);
          if (sr == 1 && sc == 1) routed(r, c) = rho(r, c);
        }
      }
      return FullPairState(kept +
                           detail::noisy_logical_plate(routed, logical_x(), first_qubit, element.p1));
    }
    case ElementKind::WaveConverter: {
      Mat k0 = Mat::Zero(4, 4);
      k0(0, 0) = 1.0;
      k0(3, 3) = 1.0;
      Mat k1 = Mat::Zero(4, 4);
      k1(0, 1) = 1.0;
      k1(3, 2) = 1.0;
      const Mat& rho = state.matrix();
      return FullPairState(conjugate_block(rho, k0, first_qubit, 2) +
                           conjugate_block(rho, k1, first_qubit, 2));
    }
  }
  throw std::logic_error("unknown optical element");
}

struct Step1Result {
  FullPairState state;
  std::array<double, 4> herald_probs;  // indexed by left_sector * 2 + right_sector
};

// Full correction arm for both photons: split, convert, flip, recombine. The
// herald distribution is read from the sector populations of the input.
inline Step1Result simulate_step1_optics(const FullPairState& state, double p1 = 1.0) {
  require_probability(p1, "p1");
  std::array<double, 4> herald{{0.0, 0.0, 0.0, 0.0}};
  const Mat& rho = state.matrix();
  for (int i = 0; i < kPairDim; ++i) {
    int ha = photon_sector(detail::pair_photon_index(i, 0));
    int hb = photon_sector(detail::pair_photon_index(i, 1));
    herald[ha * 2 + hb] += std::max(0.0, rho(i, i).real());
  }
  FullPairState out = state;
  for (int photon : {0, 1}) {
    out = apply_element(out, {ElementKind::Wdm, photon, 1.0});
    out = apply_element(out, {ElementKind::Hwp, photon, p1});
    out = apply_element(out, {ElementKind::WaveConverter, photon, 1.0});
    out = apply_element(out, {ElementKind::Pbs, photon, 1.0});
  }
  return {out, herald};
}

// Validated joint state of two pairs. Qubit order: polarization and band of
// the first pair's two photons, then the same for the second pair.
class TwoPairState {
 public:
  static constexpr int kDim = kPairDim * kPairDim;

  explicit TwoPairState(Mat rho) : rho_(std::move(rho)) {
    if (rho_.rows() != kDim || rho_.cols() != kDim) {
      throw std::invalid_argument("two-pair state must be 256x256");
    }
    double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTol) throw std::invalid_argument("two-pair state must be Hermitian");
    cplx tr = rho_.trace();
    if (std::abs(tr.real() - 1.0) > kTraceTol || std::abs(tr.imag()) > kTraceTol) {
      throw std::invalid_argument("two-pair state must have unit trace");
    }
    Mat sym = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < kEigenvalueFloor) {
      throw std::invalid_argument("two-pair state must be positive semidefinite");
    }
  }

  const Mat& matrix() const { return rho_; }

 private:
  Mat rho_;
};

inline TwoPairState join(const FullPairState& pair1, const FullPairState& pair2) {
  return TwoPairState(kron(pair1.matrix(), pair2.matrix()));
}

struct DistillationResult {
  double p_succ = 0.0;
  FullPairState state;                   // post-selected first pair
  std::array<double, 4> pattern_probs;   // announced bit patterns, before selection
};

// Two-pair distillation: a noisy logical Hadamard on each photon, a logical
// CNOT at each node from the first pair onto the second, a noisy readout of
// the second pair's polarizations, and acceptance when the announced bits
// agree. The first pair is kept without a frame-restoring plate, so the
// surviving error partner is the bit-flipped state.
inline DistillationResult simulate_distillation(const FullPairState& pair1,
                                                const FullPairState& pair2,
                                                const NoiseParams& noise) {
  validate(noise);
  Mat rho = kron(pair1.matrix(), pair2.matrix());
  for (int first_qubit : {0, 2, 4, 6}) {
    rho = detail::noisy_logical_plate(rho, logical_hadamard(), first_qubit, noise.p1);
  }
  rho = apply_cnot(rho, 0, 4);
  rho = apply_cnot(rho, 0, 5);
  rho = apply_cnot(rho, 2, 6);
  rho = apply_cnot(rho, 2, 7);
  auto povm = povm_elements(noise.eta);
  std::array<Eigen::Matrix2cd, 2> roots = {povm.first.cwiseSqrt(), povm.second.cwiseSqrt()};
  std::array<double, 4> pattern{{0.0, 0.0, 0.0, 0.0}};
  Mat accepted = Mat::Zero(TwoPairState::kDim, TwoPairState::kDim);
  for (int bit_a : {0, 1}) {
    for (int bit_b : {0, 1}) {
      Mat branch = conjugate_qubit(conjugate_qubit(rho, roots[bit_a], 4), roots[bit_b], 6);
      double prob = std::max(0.0, branch.trace().real());
      pattern[bit_a * 2 + bit_b] = prob;
      if (bit_a == bit_b) accepted += branch;
    }
  }
  double p_succ = pattern[0] + pattern[3];
  if (p_succ < 1e-15) {
    throw std::runtime_error("post-selection retains no probability mass");
  }
  Mat reduced = partial_trace_block(accepted, 4, 4) / p_succ;
  return {p_succ, FullPairState(reduced), pattern};
}

struct SwapOutcome {
  std::array<int, 4> bits{{0, 0, 0, 0}};
  double probability = 0.0;
  std::optional<FullPairState> state;  // absent when the branch carries no mass
};

struct SwapResult {
  FullPairState state;  // probability-weighted mixture over all branches
  std::array<SwapOutcome, 16> outcomes;
};

namespace detail {

// Joint-measurement basis vector over the two node photons. The first two
// bits name the photons' sectors, the third the polarization offset, the
// fourth the relative phase.
inline Vec bsm_vector(int b1, int b2, int b3, int b4) {
  Vec v = Vec::Zero(kPairDim);
  const double r = 1.0 / std::sqrt(2.0);
  for (int t : {0, 1}) {
    int left = t * 2 + (t ^ b1);
    int u = t ^ b3;
    int right = u * 2 + (u ^ b2);
    v(left * 4 + right) += (t == 1 && b4 == 1) ? -r : r;
  }
  return v;
}

}  // namespace detail

// Connects two links by a joint measurement on the inner photons. Each of the
// four announced bits is misread independently with probability 1 - eta;
// correction plates keyed to the announced bits are applied with reliability
// p1, and only plates with a set exponent are physically applied.
//
// Announced bits (b1, b2, b3, b4) trigger: a band flip on the left kept
// photon when b2 is set; on the right kept photon a polarization flip when b3
// is set, a band flip when b1 xor b3 is set, and a polarization phase flip
// when b4 is set.
inline SwapResult simulate_swap(const FullPairState& pair1, const FullPairState& pair2,
                                const NoiseParams& noise) {
  validate(noise);
  Mat joint = kron(pair1.matrix(), pair2.matrix());
  std::array<Vec, 16> basis;
  for (int m = 0; m < 16; ++m) {
    basis[m] = detail::bsm_vector((m >> 3) & 1, (m >> 2) & 1, (m >> 1) & 1, m & 1);
  }
  std::array<SwapOutcome, 16> outcomes;
  Mat mixture = Mat::Zero(kPairDim, kPairDim);
  for (int announced = 0; announced < 16; ++announced) {
    Mat m_op = Mat::Zero(kPairDim, kPairDim);
    for (int actual = 0; actual < 16; ++actual) {
      double w = 1.0;
      for (int bit = 0; bit < 4; ++bit) {
        bool match = ((announced >> bit) & 1) == ((actual >> bit) & 1);
        w *= match ? noise.eta : 1.0 - noise.eta;
      }
      if (w > 0.0) m_op += std::sqrt(w) * (basis[actual] * basis[actual].adjoint());
    }
    Mat branch = conjugate_block(joint, m_op, 2, 4);
    double prob = std::max(0.0, branch.trace().real());
    int b1 = (announced >> 3) & 1;
    int b2 = (announced >> 2) & 1;
    int b3 = (announced >> 1) & 1;
    int b4 = announced & 1;
    if (b2) branch = detail::noisy_single_qubit(branch, pauli_x(), 1, noise.p1);
    if (b3) branch = detail::noisy_single_qubit(branch, pauli_x(), 6, noise.p1);
    if (b1 ^ b3) branch = detail::noisy_single_qubit(branch, pauli_x(), 7, noise.p1);
    if (b4) branch = detail::noisy_single_qubit(branch, pauli_z(), 6, noise.p1);
    Mat reduced = partial_trace_block(branch, 2, 4);
    mixture += reduced;
    SwapOutcome& out = outcomes[announced];
    out.bits = {b1, b2, b3, b4};
    out.probability = prob;
    if (prob >= 1e-15) out.state = FullPairState(reduced / prob);
  }
  return {FullPairState(mixture), outcomes};
}

struct ComparisonReport {
  double analytic = 0.0;
  double oracle = 0.0;
  double abs_diff = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline ComparisonReport compare(double analytic, double oracle_value, double tolerance) {
  double diff = std::abs(analytic - oracle_value);
  return {analytic, oracle_value, diff, tolerance, diff <= tolerance};
}

}  // namespace deprep::oracle
