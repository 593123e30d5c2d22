#pragma once

#include <stdexcept>

#include "deprep/ensemble.hpp"
#include "deprep/qop.hpp"

// Validated 16x16 density operators for one photon pair, plus conversions to
// and from the diagonal ensemble picture.

namespace deprep {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;

class FullPairState {
 public:
  explicit FullPairState(Mat rho) : rho_(std::move(rho)) {
    if (rho_.rows() != kPairDim || rho_.cols() != kPairDim) {
      throw std::invalid_argument("pair state must be 16x16");
    }
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
      throw std::invalid_argument("pair state must be Hermitian");
    }
    if (std::abs(rho_.trace().real() - 1.0) > kTraceTol ||
        std::abs(rho_.trace().imag()) > kTraceTol) {
      throw std::invalid_argument("pair state must have unit trace");
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho_ + rho_.adjoint()),
                                          Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < kEigenvalueFloor) {
      throw std::invalid_argument("pair state must be positive semidefinite");
    }
  }

  const Mat& matrix() const { return rho_; }

 private:
  Mat rho_;
};

// Junk has no canonical matrix form, so only junk-free ensembles embed.
inline FullPairState embed(const PairEnsemble& e) {
  if (e.junk() > kWeightTol) {
    throw std::invalid_argument("cannot embed an ensemble with junk weight");
  }
  Mat rho = Mat::Zero(kPairDim, kPairDim);
  for (DepState s : kAllDepStates) {
    double w = e.weight(s);
    if (w == 0.0) continue;
    Vec v = basis_vector(s);
    rho += w * (v * v.adjoint());
  }
  return FullPairState(rho);
}

inline PairEnsemble project_diagonal(const FullPairState& s) {
  std::array<double, kBasisCount> w{};
  double sum = 0.0;
  for (DepState d : kAllDepStates) {
    Vec v = basis_vector(d);
    double p = (v.adjoint() * s.matrix() * v)(0, 0).real();
    if (p < 0.0) p = 0.0;  // eigenvalue floor keeps this within tolerance
    w[static_cast<int>(d)] = p;
    sum += p;
  }
  double junk = 1.0 - sum;
  if (junk < 0.0) {
    // Eigenvalue-floor dust can push the diagonal mass a hair past one.
    for (double& x : w) x /= sum;
    junk = 0.0;
  }
  return PairEnsemble(w, junk);
}

inline double fidelity(const FullPairState& s) {
  Vec v = basis_vector(DepState::PhiPlus);
  return (v.adjoint() * s.matrix() * v)(0, 0).real();
}

}  // namespace deprep
