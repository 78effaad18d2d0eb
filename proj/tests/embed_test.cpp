//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "hocd/embed.h"
#include "hocd/error.h"
#include "hocd/geometry.h"
#include "synthetic.h"

namespace hocd {
namespace {

MdgpInstance random_connected_graph(std::size_t n, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> w(0.5, 5);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<DistancePair> pairs;
  auto add = [&](std::size_t i, std::size_t j) {
    if (i == j)
      return;
    if (i > j)
      std::swap(i, j);
    if (seen.insert({ i, j }).second)
      pairs.push_back({ i, j, w(rng) });
  };
  for (std::size_t k = 1; k < n; ++k)
    add(k, std::uniform_int_distribution<std::size_t>(0, k - 1)(rng));
  const std::size_t extra = 2 * n;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t k = 0; k < extra; ++k)
    add(pick(rng), pick(rng));
  return MdgpInstance(3, n, std::move(pairs));
}

TEST(ConnectedComponents, SplitsAndOrders) {
  const MdgpInstance inst(3, 5, { { 3, 4, 1.0 }, { 0, 2, 1.0 } });
  const auto comps = connected_components(inst);
  ASSERT_EQ(comps.size(), 3u);
  EXPECT_EQ(comps[0], (std::vector<std::size_t> { 0, 2 }));
  EXPECT_EQ(comps[1], (std::vector<std::size_t> { 1 }));
  EXPECT_EQ(comps[2], (std::vector<std::size_t> { 3, 4 }));
  EXPECT_THROW(shortest_path_completion(inst), DisconnectedGraphError);
}

TEST(ShortestPaths, DijkstraAgreesWithFloydWarshall) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + t % 59;
    const MdgpInstance inst = random_connected_graph(n, rng);
    const Eigen::MatrixXd fw = floyd_warshall(inst);
    const Eigen::MatrixXd dj = dijkstra_all_pairs(inst);
    EXPECT_LE((fw - dj).cwiseAbs().maxCoeff(), 1e-12);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          ASSERT_LE(dj(i, j), dj(i, k) + dj(k, j) + 1e-12);
    // Known distances are upper bounds on the completion.
    for (const auto &p: inst.pairs())
      EXPECT_LE(dj(p.i, p.j), p.dist + 1e-12);
  }
}

TEST(DoubleCenter, RecoversGramMatrix) {
  std::mt19937_64 rng(6);
  const Conformation x = testing::random_cloud(3, 12, 4, rng);
  const Eigen::MatrixXd X = x.as_matrix();
  const Eigen::MatrixXd Xc = X.colwise() - X.rowwise().mean();
  Eigen::MatrixXd D(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j)
      D(i, j) = (X.col(i) - X.col(j)).norm();
  const Eigen::MatrixXd T = double_center(D);
  EXPECT_LT((T - Xc.transpose() * Xc).norm(), 1e-10 * T.norm());
}

TEST(TopEigenpairs, MatchesReferenceSolver) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n;
  for (int size: { 5, 40, 120 }) {
    // Mixed-sign spectrum with a clear top-3 gap.
    Eigen::MatrixXd R(size, size);
    for (Eigen::Index i = 0; i < R.size(); ++i)
      R(i) = n(rng);
    Eigen::MatrixXd T = 0.5 * (R + R.transpose());
    Eigen::VectorXd top(3);
    top << 900, 400, 250;
    Eigen::MatrixXd U(size, 3);
    for (Eigen::Index i = 0; i < U.size(); ++i)
      U(i) = n(rng);
    for (int c = 0; c < 3; ++c) {
      for (int k = 0; k < c; ++k)
        U.col(c) -= U.col(k).dot(U.col(c)) * U.col(k);
      U.col(c).normalize();
    }
    T += U * top.asDiagonal() * U.transpose();
    const TopEigenpairs ours = top_d_eigenpairs(T, 3);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(T);
    ASSERT_EQ(ours.values.size(), 3);
    for (int c = 0; c < 3; ++c) {
      EXPECT_NEAR(ours.values[c], ref.eigenvalues()[size - 1 - c],
                  1e-9 * T.norm());
      const double align =
          std::abs(ours.vectors.col(c).dot(ref.eigenvectors().col(size - 1 - c)));
      EXPECT_NEAR(align, 1, 1e-8);
      Eigen::Index arg;
      ours.vectors.col(c).cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(ours.vectors(arg, c), 0);
    }
  }
}

TEST(TopEigenpairs, DropsNonPositive) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(30, 30);
  T(0, 0) = 4;
  T(1, 1) = -3;
  const TopEigenpairs e = top_d_eigenpairs(T, 3);
  ASSERT_EQ(e.values.size(), 1);
  EXPECT_NEAR(e.values[0], 4, 1e-12);
  EXPECT_THROW(top_d_eigenpairs(T, 0), std::invalid_argument);
}

TEST(FangOlearyInit, ExactForCompleteDistances) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 20; ++t) {
    const Conformation truth = testing::random_cloud(3, 10, 10, rng);
    const MdgpInstance inst = testing::cutoff_instance(truth, 1e9);
    ASSERT_EQ(inst.pairs().size(), 45u);
    const Conformation x = fang_oleary_init(inst);
    const AlignmentReport rep =
        procrustes_error(x.as_matrix(), truth.as_matrix());
    EXPECT_LE(rep.max_error, 1e-6);
  }
}

TEST(FangOlearyInit, CollinearPointsPadWithZeros) {
  Conformation truth(3, 6);
  for (std::size_t j = 0; j < 6; ++j)
    truth.atom(j) = Eigen::Vector3d(1.5 * j, 0, 0);
  const MdgpInstance inst = testing::cutoff_instance(truth, 100);
  const Conformation x = fang_oleary_init(inst);
  for (std::size_t j = 0; j < 6; ++j) {
    EXPECT_EQ(x.atom(j)[1], 0);
    EXPECT_EQ(x.atom(j)[2], 0);
  }
  EXPECT_LT(stress(inst, x), 1e-18);
}

TEST(FangOlearyInit, DeterministicAndJitterSeeded) {
  std::mt19937_64 rng(12);
  const Conformation truth = testing::random_cloud(3, 40, 8, rng);
  const MdgpInstance inst = testing::cutoff_instance(truth, 5);
  ASSERT_TRUE(inst.connected());
  EXPECT_EQ(fang_oleary_init(inst).coords(), fang_oleary_init(inst).coords());
  InitOptions opts;
  opts.jitter = 0.1;
  opts.seed = 4;
  EXPECT_EQ(fang_oleary_init(inst, opts).coords(),
            fang_oleary_init(inst, opts).coords());
  opts.method = ShortestPathMethod::kFloydWarshall;
  opts.jitter = 0;
  EXPECT_LT((fang_oleary_init(inst, opts).coords()
             - fang_oleary_init(inst).coords())
                .norm(),
            1e-8);
}

}  // namespace
}  // namespace hocd
