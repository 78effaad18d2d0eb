//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef HOCD_MDGP_H_
#define HOCD_MDGP_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hocd/solver.h"

namespace hocd {

/// Known distance between atoms i < j (0-based).
struct DistancePair {
  std::size_t i;
  std::size_t j;
  double dist;
};

struct Neighbor {
  std::size_t atom;
  double dist;
};

/// Atom-major coordinates: atom j occupies [j*d, j*d + d).
class Conformation {
public:
  Conformation() = default;
  Conformation(int d, std::size_t n_p);
  Conformation(int d, Eigen::VectorXd coords);

  int dim() const { return d_; }
  std::size_t num_points() const { return n_p_; }

  const Eigen::VectorXd &coords() const { return coords_; }
  Eigen::VectorXd &coords() { return coords_; }

  auto atom(std::size_t j) { return coords_.segment(j * d_, d_); }
  auto atom(std::size_t j) const { return coords_.segment(j * d_, d_); }

  /// d x n_p view with one column per atom.
  Eigen::Map<const Eigen::MatrixXd> as_matrix() const {
    return { coords_.data(), d_, static_cast<Eigen::Index>(n_p_) };
  }

private:
  int d_ = 0;
  std::size_t n_p_ = 0;
  Eigen::VectorXd coords_;
};

/// Sparse set of exact pairwise distances over n_p points in R^d.
///
/// Pairs are stored once with i < j; |S| in the objective counts ordered
/// pairs, so s_ordered() == 2 * pairs().size().
class MdgpInstance {
public:
  MdgpInstance() = default;

  /// Pairs may be given in either orientation. Throws std::invalid_argument on
  /// self-pairs, duplicates, out-of-range indices or non-positive distances.
  MdgpInstance(int d, std::size_t n_p, std::vector<DistancePair> pairs,
               std::optional<Conformation> ground_truth = std::nullopt);

  int dim() const { return d_; }
  std::size_t num_points() const { return n_p_; }
  std::size_t num_variables() const { return n_p_ * d_; }

  const std::vector<DistancePair> &pairs() const { return pairs_; }
  std::size_t s_ordered() const { return 2 * pairs_.size(); }

  /// Neighbors of atom j sorted by ascending distance, ties by index.
  std::span<const Neighbor> neighbors(std::size_t j) const {
    return { nbrs_.data() + offsets_[j], nbrs_.data() + offsets_[j + 1] };
  }
  std::size_t degree(std::size_t j) const {
    return offsets_[j + 1] - offsets_[j];
  }

  bool connected() const { return connected_; }
  const std::optional<Conformation> &ground_truth() const { return truth_; }

  double max_distance() const;

private:
  int d_ = 3;
  std::size_t n_p_ = 0;
  std::vector<DistancePair> pairs_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> nbrs_;
  std::optional<Conformation> truth_;
  bool connected_ = false;
};

/// (1/|S|) sum over ordered pairs of (||x_i - x_j||^2 - d_ij^2)^2.
double stress(const MdgpInstance &inst, const Conformation &x);

/// The part of stress() that does not involve `atom`.
double stress_excluding(const MdgpInstance &inst, const Conformation &x,
                        std::size_t atom);

/// cached_constant + (2/|S|) sum_{i in N(atom)} (||x_i - z||^2 - d^2)^2.
/// Touches exactly degree(atom) pairs; the count is added to *pairs_touched
/// when given.
double partial_stress(const MdgpInstance &inst, const Conformation &x,
                      std::size_t atom, const Eigen::VectorXd &z,
                      double cached_constant,
                      std::uint64_t *pairs_touched = nullptr);

struct BlockDerivatives {
  Eigen::VectorXd g;
  Eigen::MatrixXd H;
};

/// Gradient and Hessian of the z-dependent part of the partial objective,
/// evaluated at z (defaults to the current position of atom).
BlockDerivatives block_grad_hess(const MdgpInstance &inst,
                                 const Conformation &x, std::size_t atom);
BlockDerivatives block_grad_hess(const MdgpInstance &inst,
                                 const Conformation &x, std::size_t atom,
                                 const Eigen::VectorXd &z);

Eigen::VectorXd stress_gradient(const MdgpInstance &inst,
                                const Conformation &x);

/// I_k = coordinates of atom (k mod n_p).
BlockSchedule cyclic_block_schedule(std::size_t n_p, int d);

/// Per-atom blocks with the exact second-order model. Requires p == 2.
class MdgpProblem: public BlockProblem {
public:
  explicit MdgpProblem(const MdgpInstance &inst);

  Eigen::Index dimension() const override;
  double value(const Eigen::VectorXd &x) const override;
  std::unique_ptr<BlockFunction>
  restrict_to(const Eigen::VectorXd &x, std::span<const std::size_t> block,
              double fx) const override;
  int model_order() const override { return 2; }

  std::uint64_t pairs_touched() const { return pairs_touched_; }

private:
  const MdgpInstance *inst_;
  mutable std::uint64_t pairs_touched_ = 0;
};

inline constexpr std::size_t kDefaultTripletCap = 200;

struct ReflectResult {
  Conformation x;
  bool changed = false;
  std::size_t reflections = 0;
};

/// One sweep of plane reflections over all atoms (d must be 3). For atom j
/// the reference value is the unscaled sum of squared residuals of its pairs
/// at the start of j's turn; each neighbor triplet (by ascending distance,
/// lexicographic, at most triplet_cap) whose plane reflection brings the sum
/// strictly below the reference is applied. The reference is not updated.
ReflectResult reflect_improve(const MdgpInstance &inst, const Conformation &x,
                              std::size_t triplet_cap = kDefaultTripletCap);

enum class OuterTermination {
  kTargetReached,
  kNoImprovingReflection,
  kIterationCap,
};

std::string_view to_string(OuterTermination t);

struct OuterSolveResult {
  Conformation x;
  double f_final = 0;
  std::uint64_t iterations = 0;
  std::uint64_t f_evals = 0;
  std::size_t restarts = 0;
  std::size_t reflections = 0;
  OuterTermination termination = OuterTermination::kIterationCap;
  std::uint64_t descent_violations = 0;
  double max_residual = 0;
  double last_cycle_max_block_gp = 0;
  std::vector<IterationRecord> history;
};

/// CD until f <= f_target or stall; on stall, one reflection sweep; repeat
/// while the sweep changes something.
OuterSolveResult outer_solve(const MdgpInstance &inst,
                             const SolverParams &params,
                             const Conformation &init,
                             std::size_t triplet_cap = kDefaultTripletCap);

}  // namespace hocd

#endif  // HOCD_MDGP_H_
