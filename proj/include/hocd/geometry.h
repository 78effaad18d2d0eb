//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef HOCD_GEOMETRY_H_
#define HOCD_GEOMETRY_H_

#include <Eigen/Dense>

namespace hocd {

/// Mirror image of p across the plane through q1, q2, q3. Throws
/// DegeneratePlaneError when ||(q2-q1) x (q3-q1)|| <= 1e-10 ||q2-q1|| ||q3-q1||.
Eigen::Vector3d plane_reflection(const Eigen::Vector3d &p,
                                 const Eigen::Vector3d &q1,
                                 const Eigen::Vector3d &q2,
                                 const Eigen::Vector3d &q3);

struct Svd3 {
  Eigen::Matrix3d U;
  Eigen::Vector3d singular;  // descending
  Eigen::Matrix3d V;
};

/// M = U diag(singular) V^T from the eigendecomposition of M^T M.
Svd3 svd_small(const Eigen::Matrix3d &M);

struct AlignmentReport {
  Eigen::Matrix3d Q;
  Eigen::VectorXd per_atom_error;
  double max_error = 0;
};

/// Orthogonal Procrustes alignment of centered X_star onto centered X_bar
/// (Q may be improper), and the per-atom error
///   ||[Q X* J - Xbar J]_j||_inf / max(1, ||[Xbar J]_j||_inf).
AlignmentReport procrustes_error(const Eigen::Matrix3Xd &X_star,
                                 const Eigen::Matrix3Xd &X_bar);

}  // namespace hocd

#endif  // HOCD_GEOMETRY_H_
