//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "hocd/mdgp.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>
#include <utility>

#include "hocd/error.h"
#include "hocd/geometry.h"

namespace hocd {

Conformation::Conformation(int d, std::size_t n_p)
    : d_(d), n_p_(n_p),
      coords_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d * n_p))) {
  if (d < 1)
    throw std::invalid_argument("Conformation: d must be positive");
}

Conformation::Conformation(int d, Eigen::VectorXd coords)
    : d_(d), coords_(std::move(coords)) {
  if (d < 1 || coords_.size() % d != 0)
    throw DimensionError("Conformation: length is not a multiple of d");
  n_p_ = static_cast<std::size_t>(coords_.size() / d);
}

MdgpInstance::MdgpInstance(int d, std::size_t n_p,
                           std::vector<DistancePair> pairs,
                           std::optional<Conformation> ground_truth)
    : d_(d), n_p_(n_p), pairs_(std::move(pairs)),
      truth_(std::move(ground_truth)) {
  if (d < 1)
    throw std::invalid_argument("MdgpInstance: d must be positive");
  if (truth_
      && (truth_->dim() != d || truth_->num_points() != n_p))
    throw DimensionError("MdgpInstance: ground truth shape mismatch");

  for (auto &p: pairs_) {
    if (p.i == p.j)
      throw std::invalid_argument("MdgpInstance: self-pair at atom "
                                  + std::to_string(p.i + 1));
    if (p.i >= n_p || p.j >= n_p)
      throw std::invalid_argument("MdgpInstance: atom index out of range");
    if (!(p.dist > 0) || !std::isfinite(p.dist))
      throw std::invalid_argument("MdgpInstance: distances must be positive");
    if (p.i > p.j)
      std::swap(p.i, p.j);
  }
  std::sort(pairs_.begin(), pairs_.end(), [](const auto &a, const auto &b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (std::size_t k = 1; k < pairs_.size(); ++k)
    if (pairs_[k].i == pairs_[k - 1].i && pairs_[k].j == pairs_[k - 1].j)
      throw std::invalid_argument(
          "MdgpInstance: duplicate pair (" + std::to_string(pairs_[k].i + 1)
          + ", " + std::to_string(pairs_[k].j + 1) + ")");

  offsets_.assign(n_p + 1, 0);
  for (const auto &p: pairs_) {
    ++offsets_[p.i + 1];
    ++offsets_[p.j + 1];
  }
  for (std::size_t j = 0; j < n_p; ++j)
    offsets_[j + 1] += offsets_[j];
  nbrs_.resize(offsets_[n_p]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto &p: pairs_) {
    nbrs_[fill[p.i]++] = { p.j, p.dist };
    nbrs_[fill[p.j]++] = { p.i, p.dist };
  }
  for (std::size_t j = 0; j < n_p; ++j)
    std::sort(nbrs_.begin() + static_cast<std::ptrdiff_t>(offsets_[j]),
              nbrs_.begin() + static_cast<std::ptrdiff_t>(offsets_[j + 1]),
              [](const Neighbor &a, const Neighbor &b) {
                return a.dist != b.dist ? a.dist < b.dist : a.atom < b.atom;
              });

  // BFS from atom 0.
  if (n_p == 0) {
    connected_ = false;
  } else {
    std::vector<bool> seen(n_p, false);
    std::deque<std::size_t> queue { 0 };
    seen[0] = true;
    std::size_t count = 1;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (const auto &nb: neighbors(u)) {
        if (!seen[nb.atom]) {
          seen[nb.atom] = true;
          ++count;
          queue.push_back(nb.atom);
        }
      }
    }
    connected_ = count == n_p;
  }
}

double MdgpInstance::max_distance() const {
  double m = 0;
  for (const auto &p: pairs_)
    m = std::max(m, p.dist);
  return m;
}

namespace {
  void check_shape(const MdgpInstance &inst, const Conformation &x) {
    if (x.dim() != inst.dim() || x.num_points() != inst.num_points())
      throw DimensionError("conformation does not match the instance");
  }

  void check_atom(const MdgpInstance &inst, std::size_t atom) {
    if (atom >= inst.num_points())
      throw std::out_of_range("atom index " + std::to_string(atom)
                              + " out of range");
  }

  double residual(const Conformation &x, const DistancePair &p) {
    const double r = (x.atom(p.i) - x.atom(p.j)).squaredNorm()
                     - p.dist * p.dist;
    return r * r;
  }

  // (||x_i - z||^2 - d^2)^2 summed over the neighbors of atom, unscaled.
  double atom_sum(const MdgpInstance &inst, const Conformation &x,
                  std::size_t atom, const Eigen::VectorXd &z) {
    double sum = 0;
    for (const auto &nb: inst.neighbors(atom)) {
      const double r = (x.atom(nb.atom) - z).squaredNorm() - nb.dist * nb.dist;
      sum += r * r;
    }
    return sum;
  }
}  // namespace

double stress(const MdgpInstance &inst, const Conformation &x) {
  check_shape(inst, x);
  if (inst.pairs().empty())
    return 0;
  double sum = 0;
  for (const auto &p: inst.pairs())
    sum += residual(x, p);
  return 2 * sum / static_cast<double>(inst.s_ordered());
}

double stress_excluding(const MdgpInstance &inst, const Conformation &x,
                        std::size_t atom) {
  check_shape(inst, x);
  check_atom(inst, atom);
  if (inst.pairs().empty())
    return 0;
  double sum = 0;
  for (const auto &p: inst.pairs())
    if (p.i != atom && p.j != atom)
      sum += residual(x, p);
  return 2 * sum / static_cast<double>(inst.s_ordered());
}

double partial_stress(const MdgpInstance &inst, const Conformation &x,
                      std::size_t atom, const Eigen::VectorXd &z,
                      double cached_constant, std::uint64_t *pairs_touched) {
  check_atom(inst, atom);
  if (z.size() != inst.dim())
    throw DimensionError("partial_stress: z has the wrong dimension");
  if (pairs_touched != nullptr)
    *pairs_touched += inst.degree(atom);
  if (inst.pairs().empty())
    return cached_constant;
  return cached_constant
         + 2 * atom_sum(inst, x, atom, z)
               / static_cast<double>(inst.s_ordered());
}

BlockDerivatives block_grad_hess(const MdgpInstance &inst,
                                 const Conformation &x, std::size_t atom) {
  check_atom(inst, atom);
  return block_grad_hess(inst, x, atom, Eigen::VectorXd(x.atom(atom)));
}

BlockDerivatives block_grad_hess(const MdgpInstance &inst,
                                 const Conformation &x, std::size_t atom,
                                 const Eigen::VectorXd &z) {
  check_atom(inst, atom);
  const int d = inst.dim();
  BlockDerivatives out { Eigen::VectorXd::Zero(d),
                         Eigen::MatrixXd::Zero(d, d) };
  if (inst.pairs().empty())
    return out;

  double rsum = 0;
  for (const auto &nb: inst.neighbors(atom)) {
    const Eigen::VectorXd diff = z - x.atom(nb.atom);
    const double r = diff.squaredNorm() - nb.dist * nb.dist;
    out.g += r * diff;
    out.H.noalias() += 2 * diff * diff.transpose();
    rsum += r;
  }
  out.H.diagonal().array() += rsum;

  const double w = 8 / static_cast<double>(inst.s_ordered());
  out.g *= w;
  out.H *= w;
  return out;
}

Eigen::VectorXd stress_gradient(const MdgpInstance &inst,
                                const Conformation &x) {
  check_shape(inst, x);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(x.coords().size());
  if (inst.pairs().empty())
    return g;
  const int d = inst.dim();
  const double w = 8 / static_cast<double>(inst.s_ordered());
  for (const auto &p: inst.pairs()) {
    const Eigen::VectorXd diff = x.atom(p.i) - x.atom(p.j);
    const double r = diff.squaredNorm() - p.dist * p.dist;
    g.segment(p.i * d, d) += w * r * diff;
    g.segment(p.j * d, d) -= w * r * diff;
  }
  return g;
}

BlockSchedule cyclic_block_schedule(std::size_t n_p, int d) {
  if (n_p == 0 || d < 1)
    throw std::invalid_argument("cyclic_block_schedule: need n_p, d >= 1");
  std::vector<std::vector<std::size_t>> blocks(n_p);
  for (std::size_t l = 0; l < n_p; ++l) {
    blocks[l].resize(d);
    for (int c = 0; c < d; ++c)
      blocks[l][c] = l * d + c;
  }
  return BlockSchedule(std::move(blocks));
}

namespace {
  // Reads the frozen coordinates through a pointer to the caller's vector;
  // cd_solve keeps it alive and unchanged for the lifetime of the block.
  class MdgpBlock: public BlockFunction {
  public:
    MdgpBlock(const MdgpInstance &inst, const Eigen::VectorXd &x,
              std::size_t atom, double fx, std::uint64_t *pairs_touched)
        : inst_(&inst), x_(&x), atom_(atom), counter_(pairs_touched) {
      const int d = inst.dim();
      base_ = x.segment(atom * d, d);
      constant_ = fx - scaled_sum(base_);
      base_value_ = constant_ + scaled_sum(base_);

      model_.f0 = base_value_;
      model_.base = base_;
      derivatives(base_, &model_.g, &model_.H);
    }

    const Eigen::VectorXd &base() const override { return base_; }
    double base_value() const override { return base_value_; }

    double value(const Eigen::VectorXd &z) override {
      if (z.size() != inst_->dim())
        throw DimensionError("MdgpBlock: z has the wrong dimension");
      if (counter_ != nullptr)
        *counter_ += inst_->degree(atom_);
      return constant_ + scaled_sum(z);
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd &z) override {
      Eigen::VectorXd g;
      derivatives(z, &g, nullptr);
      return g;
    }

    TrialPoint minimize_model(double sigma, const BoxBounds &bounds) override {
      return cubic_trial(model_, sigma, bounds);
    }

  private:
    double scaled_sum(const Eigen::VectorXd &z) const {
      if (inst_->pairs().empty())
        return 0;
      const int d = inst_->dim();
      double sum = 0;
      for (const auto &nb: inst_->neighbors(atom_)) {
        const double r = (x_->segment(nb.atom * d, d) - z).squaredNorm()
                         - nb.dist * nb.dist;
        sum += r * r;
      }
      return 2 * sum / static_cast<double>(inst_->s_ordered());
    }

    void derivatives(const Eigen::VectorXd &z, Eigen::VectorXd *g,
                     Eigen::MatrixXd *H) const {
      const int d = inst_->dim();
      *g = Eigen::VectorXd::Zero(d);
      if (H != nullptr)
        *H = Eigen::MatrixXd::Zero(d, d);
      if (inst_->pairs().empty())
        return;
      double rsum = 0;
      for (const auto &nb: inst_->neighbors(atom_)) {
        const Eigen::VectorXd diff = z - x_->segment(nb.atom * d, d);
        const double r = diff.squaredNorm() - nb.dist * nb.dist;
        *g += r * diff;
        if (H != nullptr)
          H->noalias() += 2 * diff * diff.transpose();
        rsum += r;
      }
      const double w = 8 / static_cast<double>(inst_->s_ordered());
      *g *= w;
      if (H != nullptr) {
        H->diagonal().array() += rsum;
        *H *= w;
      }
    }

    const MdgpInstance *inst_;
    const Eigen::VectorXd *x_;
    std::size_t atom_;
    std::uint64_t *counter_;
    Eigen::VectorXd base_;
    double constant_ = 0;
    double base_value_ = 0;
    QuadraticModel model_;
  };
}  // namespace

MdgpProblem::MdgpProblem(const MdgpInstance &inst): inst_(&inst) { }

Eigen::Index MdgpProblem::dimension() const {
  return static_cast<Eigen::Index>(inst_->num_variables());
}

double MdgpProblem::value(const Eigen::VectorXd &x) const {
  return stress(*inst_, Conformation(inst_->dim(), x));
}

std::unique_ptr<BlockFunction>
MdgpProblem::restrict_to(const Eigen::VectorXd &x,
                         std::span<const std::size_t> block, double fx) const {
  const auto d = static_cast<std::size_t>(inst_->dim());
  if (block.size() != d || block[0] % d != 0)
    throw std::invalid_argument("MdgpProblem: blocks must be whole atoms");
  for (std::size_t c = 1; c < d; ++c)
    if (block[c] != block[0] + c)
      throw std::invalid_argument("MdgpProblem: blocks must be whole atoms");
  return std::make_unique<MdgpBlock>(*inst_, x, block[0] / d, fx,
                                     &pairs_touched_);
}

ReflectResult reflect_improve(const MdgpInstance &inst, const Conformation &x,
                              std::size_t triplet_cap) {
  if (inst.dim() != 3)
    throw std::invalid_argument("reflect_improve: requires d = 3");
  check_shape(inst, x);

  ReflectResult out { x, false, 0 };
  Conformation &xh = out.x;

  auto sum_at = [&](std::size_t j, const Eigen::Vector3d &pj) {
    double s = 0;
    for (const auto &nb: inst.neighbors(j)) {
      const double r = (Eigen::Vector3d(xh.atom(nb.atom)) - pj).squaredNorm()
                       - nb.dist * nb.dist;
      s += r * r;
    }
    return s;
  };

  for (std::size_t j = 0; j < inst.num_points(); ++j) {
    const auto nbrs = inst.neighbors(j);
    const std::size_t m = nbrs.size();
    if (m < 3)
      continue;

    const double ref = sum_at(j, xh.atom(j));
    std::size_t tried = 0;
    for (std::size_t a = 0; a < m && tried < triplet_cap; ++a) {
      for (std::size_t b = a + 1; b < m && tried < triplet_cap; ++b) {
        for (std::size_t c = b + 1; c < m && tried < triplet_cap; ++c) {
          ++tried;
          Eigen::Vector3d r;
          try {
            r = plane_reflection(xh.atom(j), xh.atom(nbrs[a].atom),
                                 xh.atom(nbrs[b].atom), xh.atom(nbrs[c].atom));
          } catch (const DegeneratePlaneError &) {
            continue;
          }
          if (sum_at(j, r) < ref) {
            xh.atom(j) = r;
            out.changed = true;
            ++out.reflections;
          }
        }
      }
    }
  }
  return out;
}

std::string_view to_string(OuterTermination t) {
  switch (t) {
  case OuterTermination::kTargetReached:
    return "target_reached";
  case OuterTermination::kNoImprovingReflection:
    return "stalled";
  case OuterTermination::kIterationCap:
    return "iteration_cap";
  }
  return "unknown";
}

OuterSolveResult outer_solve(const MdgpInstance &inst,
                             const SolverParams &params,
                             const Conformation &init,
                             std::size_t triplet_cap) {
  check_shape(inst, init);
  if (params.p != 2)
    throw std::invalid_argument("outer_solve: the MDGP block model is "
                                "second order (p = 2)");

  const MdgpProblem problem(inst);
  const BlockSchedule schedule =
      cyclic_block_schedule(inst.num_points(), inst.dim());
  const BoxBounds bounds = BoxBounds::unbounded(problem.dimension());

  SolverParams run = params;
  if (run.stall_window == 0)
    run.stall_window = inst.num_points();

  OuterSolveResult out;
  out.x = init;
  out.last_cycle_max_block_gp = 0;
  while (true) {
    run.max_iterations = params.max_iterations - out.iterations;
    Trace tr = cd_solve(problem, schedule, run, bounds, out.x.coords());

    out.x = Conformation(inst.dim(), std::move(tr.x));
    out.f_final = tr.f_final;
    out.iterations += tr.iterations;
    out.f_evals += tr.f_evals;
    out.descent_violations += tr.descent_violations;
    out.max_residual = std::max(out.max_residual, tr.max_residual);
    out.last_cycle_max_block_gp = tr.last_cycle_max_block_gp;
    if (params.record_history)
      out.history.insert(out.history.end(), tr.history.begin(),
                         tr.history.end());

    if (tr.termination == TerminationReason::kTargetReached) {
      out.termination = OuterTermination::kTargetReached;
      break;
    }
    if (tr.termination == TerminationReason::kIterationCap
        || out.iterations >= params.max_iterations) {
      out.termination = OuterTermination::kIterationCap;
      break;
    }

    ReflectResult refl = reflect_improve(inst, out.x, triplet_cap);
    if (!refl.changed) {
      out.termination = OuterTermination::kNoImprovingReflection;
      break;
    }
    out.x = std::move(refl.x);
    out.reflections += refl.reflections;
    ++out.restarts;
  }
  return out;
}

}  // namespace hocd
