#pragma once

// Small Fock-space operator helpers shared across modules.

#include "crcd/types.hpp"

namespace crcd {

inline Mat fock_annihilation(int nmax) {
  Mat a = Mat::Zero(nmax, nmax);
  for (int n = 1; n < nmax; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

inline Mat fock_number(int nmax) {
  Vec d(nmax);
  for (int n = 0; n < nmax; ++n) d(n) = n;
  return d.asDiagonal();
}

// a + a^dagger
inline Mat fock_position(int nmax) {
  Mat a = fock_annihilation(nmax);
  return a + a.transpose();
}

// a - a^dagger (real antisymmetric)
inline Mat fock_amom(int nmax) {
  Mat a = fock_annihilation(nmax);
  return a - a.transpose();
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace crcd
