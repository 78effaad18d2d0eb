//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef HOCD_SOLVER_H_
#define HOCD_SOLVER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hocd/box.h"
#include "hocd/cubic.h"

namespace hocd {

struct SolverParams {
  int p = 2;
  double alpha = 1e-8;
  double sigma_min = 1e-8;
  double tau1 = 100;
  double tau2 = 100;
  double theta = 1;
  double f_target = 1e-10;
  double sigma_max = 1e20;
  double dec_tol = 1e-8;
  // 0 selects the schedule cycle length.
  std::size_t stall_window = 0;
  std::uint64_t max_iterations = 500'000'000;
  // Full objective re-evaluation period; 0 selects the cycle length.
  std::uint64_t resync_interval = 0;
  bool record_history = false;

  void validate() const;

  // tau1 == tau2 in every shipped configuration; tau1 keeps runs
  // reproducible when they differ.
  double tau() const { return tau1; }
};

/// Candidate point produced by a block model for one value of sigma.
struct TrialPoint {
  Eigen::VectorXd z;
  bool unbounded = false;
  // Global minimizer of the regularized model; the model-decrease and
  // first-order subproblem conditions then hold without checking.
  bool exact = true;
  double model_base = 0;
  double model_value = 0;
  // ||P[z - grad(M + sigma||. - base||^{p+1})(z)] - z||
  double residual = 0;
};

/// The objective restricted to one block, all other coordinates frozen.
class BlockFunction {
public:
  virtual ~BlockFunction() = default;

  virtual const Eigen::VectorXd &base() const = 0;
  virtual double base_value() const = 0;
  virtual double value(const Eigen::VectorXd &z) = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd &z) = 0;
  virtual TrialPoint minimize_model(double sigma, const BoxBounds &bounds) = 0;
};

class BlockProblem {
public:
  virtual ~BlockProblem() = default;

  virtual Eigen::Index dimension() const = 0;
  virtual double value(const Eigen::VectorXd &x) const = 0;

  /// fx must be value(x); implementations may use it to avoid a full
  /// evaluation.
  virtual std::unique_ptr<BlockFunction>
  restrict_to(const Eigen::VectorXd &x, std::span<const std::size_t> block,
              double fx) const = 0;

  /// Regularization order p the block models are built for; 0 accepts any.
  virtual int model_order() const { return 0; }
};

/// Cyclic block selection: I_k = blocks[k mod m].
class BlockSchedule {
public:
  explicit BlockSchedule(std::vector<std::vector<std::size_t>> blocks);

  static BlockSchedule singletons(std::size_t n);

  std::span<const std::size_t> block(std::uint64_t k) const {
    return blocks_[k % blocks_.size()];
  }
  std::size_t cycle_length() const { return blocks_.size(); }

  /// Every index of 0..n-1 appears within one cycle and no index is out of
  /// range.
  bool covers(std::size_t n) const;

private:
  std::vector<std::vector<std::size_t>> blocks_;
};

enum class StepStatus {
  kAccepted,
  kSigmaOverflow,
};

struct StepReport {
  Eigen::VectorXd accepted_point;
  StepStatus status = StepStatus::kAccepted;
  double sigma_final = 0;
  int model_solves = 0;
  int f_evals = 0;
  double f_new = 0;
  double step_norm = 0;
  double residual = 0;
  std::vector<double> sigmas;
};

/// One call of the adaptive-sigma regularized step from fn.base(). Sigma
/// starts at 0 and grows as max(sigma_min, tau*sigma) until the trial point
/// satisfies f(z) <= f(base) - alpha ||z - base||^{p+1}. When sigma would
/// exceed sigma_max the step stops unaccepted at the base point.
StepReport regularized_step(BlockFunction &fn, const BoxBounds &bounds,
                            const SolverParams &params);

/// Built-in p = 2 trial: global minimizer of the cubic-regularized model over
/// the block box (exact when unconstrained or for one coordinate; projected
/// gradient on the model otherwise).
TrialPoint cubic_trial(const QuadraticModel &model, double sigma,
                       const BoxBounds &bounds, double theta = 1);

struct StallSample {
  double sigma_final;
  double f_old;
  double f_new;
};

bool is_bad_step(const StallSample &s, const SolverParams &params);

/// True iff window holds at least `window_length` samples and the last
/// `window_length` of them are all bad steps.
bool stall_detector(std::span<const StallSample> window,
                    const SolverParams &params, std::size_t window_length);

class StallDetector {
public:
  StallDetector(const SolverParams &params, std::size_t window)
      : params_(&params), window_(window) { }

  bool update(const StallSample &s) {
    run_ = is_bad_step(s, *params_) ? run_ + 1 : 0;
    return run_ >= window_;
  }
  void reset() { run_ = 0; }

private:
  const SolverParams *params_;
  std::size_t window_;
  std::size_t run_ = 0;
};

enum class TerminationReason {
  kTargetReached,
  kStalled,
  kIterationCap,
};

std::string_view to_string(TerminationReason r);

struct IterationRecord {
  double f_old;
  double f_new;
  double step_norm;
  double block_gp_norm;
  double sigma_final;
  int f_evals;
};

struct Trace {
  Eigen::VectorXd x;
  double f_initial = 0;
  double f_final = 0;
  std::uint64_t iterations = 0;
  std::uint64_t f_evals = 0;
  std::uint64_t model_solves = 0;
  TerminationReason termination = TerminationReason::kIterationCap;

  // Checked on every iteration regardless of record_history.
  std::uint64_t descent_violations = 0;
  double max_residual = 0;
  double min_block_gp = 0;
  double last_cycle_max_block_gp = 0;

  std::vector<IterationRecord> history;
};

/// Block coordinate descent: at iteration k the coordinates outside I_k are
/// frozen and regularized_step runs on the restriction. Stops when
/// f <= f_target, when the stall detector fires, or at max_iterations.
Trace cd_solve(const BlockProblem &problem, const BlockSchedule &schedule,
               const SolverParams &params, const BoxBounds &bounds,
               const Eigen::VectorXd &x0);

/// Objective given by dense callbacks; blocks use the exact second-order
/// Taylor model. Intended for small and medium n.
class DenseTaylorProblem: public BlockProblem {
public:
  using Value = std::function<double(const Eigen::VectorXd &)>;
  using Gradient = std::function<Eigen::VectorXd(const Eigen::VectorXd &)>;
  using Hessian = std::function<Eigen::MatrixXd(const Eigen::VectorXd &)>;

  DenseTaylorProblem(Eigen::Index n, Value f, Gradient g, Hessian h,
                     double theta = 1);

  Eigen::Index dimension() const override { return n_; }
  double value(const Eigen::VectorXd &x) const override { return f_(x); }
  std::unique_ptr<BlockFunction>
  restrict_to(const Eigen::VectorXd &x, std::span<const std::size_t> block,
              double fx) const override;
  int model_order() const override { return 2; }

private:
  Eigen::Index n_;
  Value f_;
  Gradient g_;
  Hessian h_;
  double theta_;
};

}  // namespace hocd

#endif  // HOCD_SOLVER_H_
