#ifndef CMKMS_LATTICE_HPP_
#define CMKMS_LATTICE_HPP_

// Integer lattice reduction over Eigen matrices. Scalars are exact integer
// types (int64 or BigInt); no floating point is involved.

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>
#include <utility>

#include "cmkms/arith.hpp"

namespace cmkms {

template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;
using IntMat = MatX<BigInt>;

namespace detail {
template <class S>
S abs_of(const S& v) {
  return v < 0 ? S(-v) : v;
}
template <class S>
S floor_div_s(const S& a, const S& b) {
  S q = a / b;
  if ((q * b != a) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}
}  // namespace detail

// Lower-triangular row HNF of the lattice spanned by the rows of `rows`.
// Requires the rows to span a full-rank lattice in Z^n. Result H is n x n,
// H(j,j) > 0 and 0 <= H(i,j) < H(j,j) for i > j.
template <class S>
MatX<S> lattice_hnf(const MatX<S>& rows) {
  MatX<S> A = rows;
  const Eigen::Index m = A.rows(), n = A.cols();
  MatX<S> H = MatX<S>::Zero(n, n);
  std::vector<bool> used(static_cast<size_t>(m), false);
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    while (true) {
      Eigen::Index piv = -1;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (used[i] || A(i, j) == 0) continue;
        if (piv < 0 || detail::abs_of(A(i, j)) < detail::abs_of(A(piv, j)))
          piv = i;
      }
      if (piv < 0) throw DomainError("lattice_hnf: rank deficient");
      bool clean = true;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (i == piv || used[i] || A(i, j) == 0) continue;
        S q = A(i, j) / A(piv, j);
        A.row(i) -= q * A.row(piv);
        if (A(i, j) != 0) clean = false;
      }
      if (clean) {
        if (A(piv, j) < 0) A.row(piv) = -A.row(piv);
        H.row(j) = A.row(piv).head(n);
        used[piv] = true;
        break;
      }
    }
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = i - 1; j >= 0; --j) {
      S q = detail::floor_div_s(H(i, j), H(j, j));
      if (q != 0) H.row(i) -= q * H.row(j);
    }
  }
  return H;
}

template <class S>
struct SmithForm {
  MatX<S> D;  // m x n, diagonal d_1 | d_2 | ..., d_i >= 0
  MatX<S> U;  // m x m unimodular
  MatX<S> V;  // n x n unimodular, U * M * V = D
};

template <class S>
SmithForm<S> smith_normal_form(const MatX<S>& M) {
  const Eigen::Index m = M.rows(), n = M.cols();
  MatX<S> D = M;
  MatX<S> U = MatX<S>::Identity(m, m);
  MatX<S> V = MatX<S>::Identity(n, n);
  const Eigen::Index r = std::min(m, n);
  for (Eigen::Index t = 0; t < r; ++t) {
    while (true) {
      Eigen::Index pi = -1, pj = -1;
      for (Eigen::Index i = t; i < m; ++i)
        for (Eigen::Index j = t; j < n; ++j)
          if (D(i, j) != 0 &&
              (pi < 0 || detail::abs_of(D(i, j)) < detail::abs_of(D(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi < 0) break;
      if (pi != t) {
        D.row(pi).swap(D.row(t));
        U.row(pi).swap(U.row(t));
      }
      if (pj != t) {
        D.col(pj).swap(D.col(t));
        V.col(pj).swap(V.col(t));
      }
      bool done = true;
      for (Eigen::Index i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        S q = detail::floor_div_s(D(i, t), D(t, t));
        D.row(i) -= q * D.row(t);
        U.row(i) -= q * U.row(t);
        if (D(i, t) != 0) done = false;
      }
      for (Eigen::Index j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        S q = detail::floor_div_s(D(t, j), D(t, t));
        D.col(j) -= q * D.col(t);
        V.col(j) -= q * V.col(t);
        if (D(t, j) != 0) done = false;
      }
      if (!done) continue;
      // divisibility: fold an offending row into row t
      Eigen::Index bad = -1;
      for (Eigen::Index i = t + 1; i < m && bad < 0; ++i)
        for (Eigen::Index j = t + 1; j < n; ++j)
          if (D(i, j) % D(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      D.row(t) += D.row(bad);
      U.row(t) += U.row(bad);
    }
    if (D(t, t) < 0) {
      D.row(t) = -D.row(t);
      U.row(t) = -U.row(t);
    }
  }
  return {D, U, V};
}

// Exact product; Eigen's product kernels do not cope with multiprecision
// expression templates.
template <class S>
MatX<S> exact_product(const MatX<S>& A, const MatX<S>& B) {
  MatX<S> C(A.rows(), B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j) {
      S s(0);
      for (Eigen::Index k = 0; k < A.cols(); ++k) s += A(i, k) * B(k, j);
      C(i, j) = s;
    }
  return C;
}

// Determinant of a small exact integer matrix by fraction-free elimination.
template <class S>
S exact_determinant(MatX<S> A) {
  const Eigen::Index n = A.rows();
  S sign = 1, prev = 1;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (A(k, k) == 0) {
      Eigen::Index sw = -1;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (A(i, k) != 0) {
          sw = i;
          break;
        }
      if (sw < 0) return S(0);
      A.row(k).swap(A.row(sw));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j)
        A(i, j) = (A(i, j) * A(k, k) - A(i, k) * A(k, j)) / prev;
    prev = A(k, k);
  }
  return sign * A(n - 1, n - 1);
}

}  // namespace cmkms

#endif  // CMKMS_LATTICE_HPP_
