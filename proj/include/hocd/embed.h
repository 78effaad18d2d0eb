//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef HOCD_EMBED_H_
#define HOCD_EMBED_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hocd/mdgp.h"

namespace hocd {

/// Connected components by BFS, each sorted, ordered by smallest member.
std::vector<std::vector<std::size_t>>
connected_components(const MdgpInstance &inst);

enum class ShortestPathMethod {
  kDijkstra,
  kFloydWarshall,
};

/// Dense symmetric all-pairs shortest-path matrix of the distance graph.
struct CompletedDistanceMatrix {
  Eigen::MatrixXd D;
};

/// Throws DisconnectedGraphError when the graph has several components.
CompletedDistanceMatrix
shortest_path_completion(const MdgpInstance &inst,
                         ShortestPathMethod method = ShortestPathMethod::kDijkstra);

Eigen::MatrixXd floyd_warshall(const MdgpInstance &inst);
Eigen::MatrixXd dijkstra_all_pairs(const MdgpInstance &inst);

/// -1/2 J (D o D) J with J = I - ee^T / n.
Eigen::MatrixXd double_center(const Eigen::MatrixXd &D);

struct TopEigenpairs {
  Eigen::VectorXd values;   // descending, positive only
  Eigen::MatrixXd vectors;  // n x values.size()
  int requested = 0;
  int iterations = 0;
};

/// The d algebraically largest eigenpairs of symmetric T by shifted block
/// subspace iteration with Rayleigh-Ritz and locking. Pairs with
/// lambda <= 1e-10 ||T||_F are dropped.
TopEigenpairs top_d_eigenpairs(const Eigen::MatrixXd &T, int d);

struct InitOptions {
  ShortestPathMethod method = ShortestPathMethod::kDijkstra;
  double scale = 1;
  double jitter = 0;  // std-dev of Gaussian noise added per coordinate
  std::uint64_t seed = 0;
};

/// Shortest-path completion, double centering and X = U Lambda^{1/2};
/// coordinates beyond the number of positive eigenvalues are zero.
Conformation fang_oleary_init(const MdgpInstance &inst,
                              const InitOptions &opts = {});

}  // namespace hocd

#endif  // HOCD_EMBED_H_
