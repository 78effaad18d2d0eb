//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef HOCD_BOX_H_
#define HOCD_BOX_H_

#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace hocd {

/// Box l <= x <= u. Infinite entries are allowed; the all-infinite box is the
/// unconstrained case.
class BoxBounds {
public:
  BoxBounds() = default;

  /// Throws std::invalid_argument unless lower.size() == upper.size() and
  /// lower[i] < upper[i] for every i.
  BoxBounds(Eigen::VectorXd lower, Eigen::VectorXd upper);

  static BoxBounds unbounded(Eigen::Index n);

  Eigen::Index size() const { return lower_.size(); }
  const Eigen::VectorXd &lower() const { return lower_; }
  const Eigen::VectorXd &upper() const { return upper_; }

  bool is_unbounded() const { return unbounded_; }
  bool contains(const Eigen::VectorXd &x) const;

  /// Bounds of the coordinates listed in block, in block order.
  BoxBounds restrict_to(std::span<const std::size_t> block) const;

private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  bool unbounded_ = true;
};

Eigen::VectorXd project_box(const Eigen::VectorXd &x, const BoxBounds &bounds);

/// P(x - g) - x. Zero iff x is first-order stationary on the box.
Eigen::VectorXd projected_gradient(const Eigen::VectorXd &x,
                                   const Eigen::VectorXd &g,
                                   const BoxBounds &bounds);

/// P(x - g_I) - x where g_I keeps the entries of g listed in block and zeroes
/// the rest; entries outside the block are therefore exactly zero.
Eigen::VectorXd block_projected_gradient(const Eigen::VectorXd &x,
                                         const Eigen::VectorXd &g,
                                         const BoxBounds &bounds,
                                         std::span<const std::size_t> block);

}  // namespace hocd

#endif  // HOCD_BOX_H_
