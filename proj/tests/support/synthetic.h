//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef HOCD_TESTS_SYNTHETIC_H_
#define HOCD_TESTS_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hocd/mdgp.h"

namespace hocd::testing {

struct ChainOptions {
  std::size_t atoms = 402;
  double bond = 1.5;
  double min_separation = 2.4;
  double radius = 12.0;
  std::uint64_t seed = 1;
};

/// Compact self-avoiding chain inside a ball: a protein-like point cloud
/// with bonded neighbors at `bond` and all other pairs at least
/// `min_separation` apart.
std::vector<Eigen::Vector3d> compact_chain(const ChainOptions &opts);

/// Uniform points in [0, side]^d.
Conformation random_cloud(int d, std::size_t n, double side,
                          std::mt19937_64 &rng);

/// Instance with every pair within cutoff of the conformation.
MdgpInstance cutoff_instance(const Conformation &x, double cutoff);

/// Random rotation (proper or, when improper is set, with a reflection).
Eigen::Matrix3d random_orthogonal(std::mt19937_64 &rng, bool improper = false);

}  // namespace hocd::testing

#endif  // HOCD_TESTS_SYNTHETIC_H_
