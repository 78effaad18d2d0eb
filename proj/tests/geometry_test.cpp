//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <random>

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "hocd/error.h"
#include "hocd/geometry.h"
#include "synthetic.h"

namespace hocd {
namespace {

TEST(PlaneReflection, MirrorsAcrossPlane) {
  const Eigen::Vector3d r =
      plane_reflection({ 1, 2, 3 }, { 0, 0, 0 }, { 1, 0, 0 }, { 0, 1, 0 });
  EXPECT_TRUE(r.isApprox(Eigen::Vector3d(1, 2, -3)));
  EXPECT_THROW(plane_reflection({ 1, 2, 3 }, { 0, 0, 0 }, { 1, 0, 0 },
                                { 2, 0, 0 }),
               DegeneratePlaneError);
}

TEST(PlaneReflection, InvolutionAndPlaneDistances) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  for (int t = 0; t < 100; ++t) {
    Eigen::Vector3d p(n(rng), n(rng), n(rng)), a(n(rng), n(rng), n(rng)),
        b(n(rng), n(rng), n(rng)), c(n(rng), n(rng), n(rng));
    const Eigen::Vector3d r = plane_reflection(p, a, b, c);
    EXPECT_TRUE(plane_reflection(r, a, b, c).isApprox(p, 1e-12));
    for (const auto &q: { a, b, c })
      EXPECT_NEAR((r - q).norm(), (p - q).norm(), 1e-12);
  }
}

TEST(SvdSmall, MatchesReference) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  for (int t = 0; t < 200; ++t) {
    Eigen::Matrix3d M;
    for (int i = 0; i < 9; ++i)
      M(i) = n(rng);
    if (t % 10 == 0)
      M.col(2) = M.col(0) + M.col(1);  // rank 2
    const Svd3 s = svd_small(M);
    const Eigen::JacobiSVD<Eigen::Matrix3d> ref(M, Eigen::ComputeFullU
                                                       | Eigen::ComputeFullV);
    for (int k = 0; k < 3; ++k)
      EXPECT_NEAR(s.singular[k], ref.singularValues()[k], 1e-7 * M.norm());
    EXPECT_TRUE((s.U.transpose() * s.U).isApprox(Eigen::Matrix3d::Identity(),
                                                 1e-12));
    EXPECT_TRUE((s.V.transpose() * s.V).isApprox(Eigen::Matrix3d::Identity(),
                                                 1e-12));
    EXPECT_LT((s.U * s.singular.asDiagonal() * s.V.transpose() - M).norm(),
              1e-7 * M.norm());
  }
}

TEST(Procrustes, RecoversRigidMotion) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (bool improper: { false, true }) {
    Eigen::Matrix3Xd B(3, 50);
    for (Eigen::Index i = 0; i < B.size(); ++i)
      B(i) = 5 * n(rng);
    const Eigen::Matrix3d Q = testing::random_orthogonal(rng, improper);
    const Eigen::Matrix3Xd A = (Q * B).colwise() + Eigen::Vector3d(1, 2, 3);
    const AlignmentReport rep = procrustes_error(A, B);
    EXPECT_LT(rep.max_error, 1e-12);
    EXPECT_TRUE((rep.Q * Q).isApprox(Eigen::Matrix3d::Identity(), 1e-12));
  }
}

TEST(Procrustes, OptimalAgainstRandomRotations) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  Eigen::Matrix3Xd A(3, 30), B(3, 30);
  for (Eigen::Index i = 0; i < A.size(); ++i) {
    A(i) = n(rng);
    B(i) = n(rng);
  }
  const AlignmentReport rep = procrustes_error(A, B);
  const Eigen::Matrix3Xd Ac = A.colwise() - A.rowwise().mean();
  const Eigen::Matrix3Xd Bc = B.colwise() - B.rowwise().mean();
  const double best = (rep.Q * Ac - Bc).norm();
  for (int t = 0; t < 1000; ++t) {
    const Eigen::Matrix3d R = testing::random_orthogonal(rng, t % 2 == 1);
    EXPECT_GE((R * Ac - Bc).norm(), best - 1e-12);
  }
}

TEST(Procrustes, ErrorNormalization) {
  // Two atoms on a line; A is B stretched slightly and rotated, so the best
  // alignment leaves the length mismatch along the line.
  Eigen::Matrix3Xd B(3, 2), A(3, 2);
  B << 10, -10, 0, 0, 0, 0;
  A << 10, -10, 0.5, -0.5, 0, 0;
  AlignmentReport rep = procrustes_error(A, B);
  const double big = (std::sqrt(100.25) - 10) / 10;
  EXPECT_NEAR(rep.per_atom_error[0], big, 1e-12);
  EXPECT_NEAR(rep.max_error, big, 1e-12);

  // Coordinates below one are divided by one.
  B << 0.2, -0.2, 0, 0, 0, 0;
  A << 0.2, -0.2, 0.1, -0.1, 0, 0;
  rep = procrustes_error(A, B);
  EXPECT_NEAR(rep.max_error, std::sqrt(0.05) - 0.2, 1e-12);
  EXPECT_THROW(procrustes_error(A, Eigen::Matrix3Xd(3, 3)), DimensionError);
}

}  // namespace
}  // namespace hocd
