//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "hocd/box.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hocd/error.h"

namespace hocd {

BoxBounds::BoxBounds(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size())
    throw DimensionError("BoxBounds: lower and upper differ in length");

  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] < upper_[i]))
      throw std::invalid_argument("BoxBounds: lower[" + std::to_string(i)
                                  + "] must be below upper");
    if (std::isfinite(lower_[i]) || std::isfinite(upper_[i]))
      unbounded_ = false;
  }
}

BoxBounds BoxBounds::unbounded(Eigen::Index n) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return { Eigen::VectorXd::Constant(n, -inf),
           Eigen::VectorXd::Constant(n, inf) };
}

bool BoxBounds::contains(const Eigen::VectorXd &x) const {
  if (x.size() != size())
    throw DimensionError("BoxBounds::contains: dimension mismatch");
  if (unbounded_)
    return true;
  return (x.array() >= lower_.array()).all()
         && (x.array() <= upper_.array()).all();
}

BoxBounds BoxBounds::restrict_to(std::span<const std::size_t> block) const {
  Eigen::VectorXd lo(block.size()), hi(block.size());
  for (std::size_t k = 0; k < block.size(); ++k) {
    if (block[k] >= static_cast<std::size_t>(size()))
      throw DimensionError("BoxBounds::restrict_to: index out of range");
    lo[k] = lower_[block[k]];
    hi[k] = upper_[block[k]];
  }
  return { std::move(lo), std::move(hi) };
}

Eigen::VectorXd project_box(const Eigen::VectorXd &x, const BoxBounds &bounds) {
  if (x.size() != bounds.size())
    throw DimensionError("project_box: dimension mismatch");
  if (bounds.is_unbounded())
    return x;
  return x.cwiseMax(bounds.lower()).cwiseMin(bounds.upper());
}

Eigen::VectorXd projected_gradient(const Eigen::VectorXd &x,
                                   const Eigen::VectorXd &g,
                                   const BoxBounds &bounds) {
  if (g.size() != x.size())
    throw DimensionError("projected_gradient: dimension mismatch");
  if (!bounds.contains(x))
    throw InfeasiblePointError("projected_gradient: x outside the box");
  return project_box(x - g, bounds) - x;
}

Eigen::VectorXd block_projected_gradient(const Eigen::VectorXd &x,
                                         const Eigen::VectorXd &g,
                                         const BoxBounds &bounds,
                                         std::span<const std::size_t> block) {
  if (block.empty())
    throw std::invalid_argument("block_projected_gradient: empty block");
  if (g.size() != x.size())
    throw DimensionError("block_projected_gradient: dimension mismatch");

  Eigen::VectorXd g_block = Eigen::VectorXd::Zero(g.size());
  for (std::size_t i: block) {
    if (i >= static_cast<std::size_t>(g.size()))
      throw DimensionError("block_projected_gradient: index out of range");
    g_block[i] = g[i];
  }
  return projected_gradient(x, g_block, bounds);
}

}  // namespace hocd
