//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "hocd/geometry.h"

#include <algorithm>
#include <cmath>

#include "hocd/cubic.h"
#include "hocd/error.h"

namespace hocd {

Eigen::Vector3d plane_reflection(const Eigen::Vector3d &p,
                                 const Eigen::Vector3d &q1,
                                 const Eigen::Vector3d &q2,
                                 const Eigen::Vector3d &q3) {
  const Eigen::Vector3d a = q2 - q1;
  const Eigen::Vector3d b = q3 - q1;
  const Eigen::Vector3d n = a.cross(b);
  const double nn = n.norm();
  if (!(nn > 1e-10 * a.norm() * b.norm()))
    throw DegeneratePlaneError("plane_reflection: collinear points");
  const Eigen::Vector3d u = n / nn;
  return p - 2 * u.dot(p - q1) * u;
}

namespace {
  // Completes the columns of U that are flagged invalid to an orthonormal
  // basis, keeping the valid ones.
  void complete_basis(Eigen::Matrix3d &U, const bool valid[3]) {
    for (int c = 0; c < 3; ++c) {
      if (valid[c])
        continue;
      double best = -1;
      Eigen::Vector3d pick = Eigen::Vector3d::Zero();
      for (int e = 0; e < 3; ++e) {
        Eigen::Vector3d v = Eigen::Vector3d::Unit(e);
        for (int k = 0; k < 3; ++k)
          if (k != c && (valid[k] || k < c))
            v -= U.col(k).dot(v) * U.col(k);
        if (v.norm() > best) {
          best = v.norm();
          pick = v;
        }
      }
      U.col(c) = pick.normalized();
    }
  }
}  // namespace

Svd3 svd_small(const Eigen::Matrix3d &M) {
  const SymmetricEigen eig = jacobi_eigen(M.transpose() * M);
  Svd3 out;
  for (int k = 0; k < 3; ++k) {
    out.V.col(k) = eig.vectors.col(2 - k);
    out.singular[k] = std::sqrt(std::max(0.0, eig.values[2 - k]));
  }

  const double tol = 1e-12 * std::max(1.0, out.singular[0]);
  bool valid[3];
  for (int k = 0; k < 3; ++k) {
    valid[k] = out.singular[k] > tol;
    if (!valid[k])
      continue;
    Eigen::Vector3d u = M * out.V.col(k);
    // Re-orthogonalize against the earlier columns; M V / s loses
    // orthogonality when singular values are close.
    for (int j = 0; j < k; ++j)
      if (valid[j])
        u -= out.U.col(j).dot(u) * out.U.col(j);
    const double nu = u.norm();
    if (nu <= tol) {
      valid[k] = false;
      continue;
    }
    out.U.col(k) = u / nu;
  }
  complete_basis(out.U, valid);
  return out;
}

AlignmentReport procrustes_error(const Eigen::Matrix3Xd &X_star,
                                 const Eigen::Matrix3Xd &X_bar) {
  if (X_star.cols() != X_bar.cols())
    throw DimensionError("procrustes_error: atom counts differ");
  const Eigen::Index n = X_bar.cols();
  AlignmentReport out;
  out.Q.setIdentity();
  out.per_atom_error = Eigen::VectorXd::Zero(n);
  if (n == 0)
    return out;

  const Eigen::Matrix3Xd A = X_star.colwise() - X_star.rowwise().mean();
  const Eigen::Matrix3Xd B = X_bar.colwise() - X_bar.rowwise().mean();

  const Svd3 svd = svd_small(A * B.transpose());
  out.Q = svd.V * svd.U.transpose();

  const Eigen::Matrix3Xd R = out.Q * A - B;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double scale = std::max(1.0, B.col(j).cwiseAbs().maxCoeff());
    out.per_atom_error[j] = R.col(j).cwiseAbs().maxCoeff() / scale;
  }
  out.max_error = out.per_atom_error.maxCoeff();
  return out;
}

}  // namespace hocd
