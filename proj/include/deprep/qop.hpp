#pragma once

#include <array>
#include <stdexcept>

#include "deprep/basis.hpp"

// Dense n-qubit density-matrix helpers. Qubit 0 is the most significant bit
// of the computational index; operators on contiguous qubit blocks are applied
// by index arithmetic, never by building the lifted matrix.

namespace deprep {

inline int qubit_count(const Mat& rho) {
  int n = 0;
  Eigen::Index d = rho.rows();
  if (d != rho.cols()) throw std::invalid_argument("density matrix must be square");
  while ((Eigen::Index{1} << n) < d) ++n;
  if ((Eigen::Index{1} << n) != d) throw std::invalid_argument("dimension must be a power of two");
  return n;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Eigen::Matrix2cd pauli_id() { return Eigen::Matrix2cd::Identity(); }
inline Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
inline Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
inline Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

namespace detail {

// (I (x) a (x) I) * rho, with a on `count` adjacent qubits starting at `first`.
inline Mat left_mul_block(const Mat& rho, const Mat& a, int first, int count) {
  int n = qubit_count(rho);
  if (first < 0 || count < 1 || first + count > n) throw std::invalid_argument("bad qubit block");
  if (a.rows() != (Eigen::Index{1} << count) || a.cols() != a.rows()) {
    throw std::invalid_argument("operator dimension does not match block");
  }
  Eigen::Index dim = rho.rows();
  int rbits = n - first - count;
  Eigen::Index block = Eigen::Index{1} << count;
  Mat out = Mat::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::Index mid = (i >> rbits) & (block - 1);
    Eigen::Index base = i & ~((block - 1) << rbits);
    for (Eigen::Index src = 0; src < block; ++src) {
      cplx coef = a(mid, src);
      if (coef == cplx(0, 0)) continue;
      out.row(i) += coef * rho.row(base | (src << rbits));
    }
  }
  return out;
}

}  // namespace detail

// (I (x) a (x) I) rho (I (x) a (x) I)^dagger. `a` need not be unitary.
inline Mat conjugate_block(const Mat& rho, const Mat& a, int first, int count) {
  Mat half = detail::left_mul_block(rho, a, first, count);
  // rho A^dagger = (A rho^dagger)^dagger; works for non-Hermitian intermediates.
  return detail::left_mul_block(half.adjoint(), a, first, count).adjoint();
}

inline Mat conjugate_qubit(const Mat& rho, const Eigen::Matrix2cd& a, int qubit) {
  Mat m = a;
  return conjugate_block(rho, m, qubit, 1);
}

// CNOT as an index permutation: target bit flips when the control bit is set.
inline Mat apply_cnot(const Mat& rho, int control, int target) {
  int n = qubit_count(rho);
  if (control == target || control < 0 || target < 0 || control >= n || target >= n) {
    throw std::invalid_argument("bad cnot qubits");
  }
  Eigen::Index dim = rho.rows();
  Eigen::Index cbit = Eigen::Index{1} << (n - 1 - control);
  Eigen::Index tbit = Eigen::Index{1} << (n - 1 - target);
  Mat out(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::Index pi = (i & cbit) ? (i ^ tbit) : i;
    for (Eigen::Index j = 0; j < dim; ++j) {
      Eigen::Index pj = (j & cbit) ? (j ^ tbit) : j;
      out(pi, pj) = rho(i, j);
    }
  }
  return out;
}

// Trace out `count` adjacent qubits starting at `first`.
inline Mat partial_trace_block(const Mat& rho, int first, int count) {
  int n = qubit_count(rho);
  if (first < 0 || count < 1 || first + count > n) throw std::invalid_argument("bad qubit block");
  int rbits = n - first - count;
  Eigen::Index block = Eigen::Index{1} << count;
  Eigen::Index hi = Eigen::Index{1} << first;
  Eigen::Index lo = Eigen::Index{1} << rbits;
  Mat out = Mat::Zero(hi * lo, hi * lo);
  for (Eigen::Index h1 = 0; h1 < hi; ++h1)
    for (Eigen::Index l1 = 0; l1 < lo; ++l1)
      for (Eigen::Index h2 = 0; h2 < hi; ++h2)
        for (Eigen::Index l2 = 0; l2 < lo; ++l2) {
          cplx sum(0, 0);
          for (Eigen::Index m = 0; m < block; ++m) {
            sum += rho(((h1 * block + m) << rbits) | l1, ((h2 * block + m) << rbits) | l2);
          }
          out(h1 * lo + l1, h2 * lo + l2) = sum;
        }
  return out;
}

// Replace one qubit's reduced state with I/2 via the Pauli twirl identity.
inline Mat depolarize_qubit(const Mat& rho, int qubit) {
  Mat out = rho;
  out += conjugate_qubit(rho, pauli_x(), qubit);
  out += conjugate_qubit(rho, pauli_y(), qubit);
  out += conjugate_qubit(rho, pauli_z(), qubit);
  return 0.25 * out;
}

}  // namespace deprep
