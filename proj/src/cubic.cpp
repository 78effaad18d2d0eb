//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "hocd/cubic.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "hocd/error.h"

namespace hocd {

void QuadraticModel::validate() const {
  const Eigen::Index d = g.size();
  if (d == 0 || d > kMaxModelDim)
    throw DimensionError("QuadraticModel: dimension must be in [1, 8]");
  if (H.rows() != d || H.cols() != d)
    throw DimensionError("QuadraticModel: H shape does not match g");
  if (base.size() != 0 && base.size() != d)
    throw DimensionError("QuadraticModel: base shape does not match g");

  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("QuadraticModel: H is not symmetric");
}

double QuadraticModel::regularized_value(const Eigen::VectorXd &s,
                                         double sigma) const {
  const double n = s.norm();
  return f0 + g.dot(s) + 0.5 * s.dot(H * s) + sigma * n * n * n;
}

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd &A0) {
  const Eigen::Index n = A0.rows();
  if (A0.cols() != n)
    throw DimensionError("jacobi_eigen: matrix is not square");

  Eigen::MatrixXd A = 0.5 * (A0 + A0.transpose());
  Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n);

  const double norm2 = A.squaredNorm();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q)
        off += A(p, q) * A(p, q);
    if (off <= 1e-32 * norm2 || off == 0)
      break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0)
          continue;

        const double app = A(p, p), aqq = A(q, q);
        // Negligible against both diagonal entries after a few sweeps.
        if (sweep > 3 && std::abs(app) + 100 * std::abs(apq) == std::abs(app)
            && std::abs(aqq) + 100 * std::abs(apq) == std::abs(aqq)) {
          A(p, q) = A(q, p) = 0;
          continue;
        }

        const double theta = (aqq - app) / (2 * apq);
        double t;
        if (std::abs(theta) > 1e150)
          t = 1 / (2 * theta);
        else
          t = std::copysign(1.0, theta)
              / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1);
        const double s = t * c;

        for (Eigen::Index r = 0; r < n; ++r) {
          if (r == p || r == q)
            continue;
          const double arp = A(r, p), arq = A(r, q);
          A(r, p) = A(p, r) = c * arp - s * arq;
          A(r, q) = A(q, r) = s * arp + c * arq;
        }
        A(p, p) = app - t * apq;
        A(q, q) = aqq + t * apq;
        A(p, q) = A(q, p) = 0;

        for (Eigen::Index r = 0; r < n; ++r) {
          const double vrp = V(r, p), vrq = V(r, q);
          V(r, p) = c * vrp - s * vrq;
          V(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return A(a, a) < A(b, b);
                   });

  SymmetricEigen out { Eigen::VectorXd(n), Eigen::MatrixXd(n, n) };
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = A(order[k], order[k]);
    Eigen::VectorXd v = V.col(order[k]);
    Eigen::Index imax;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0)
      v = -v;
    out.vectors.col(k) = v;
  }
  return out;
}

SymmetricEigen symmetric_eig_small(const Eigen::MatrixXd &H) {
  if (H.rows() != H.cols() || H.rows() == 0 || H.rows() > kMaxModelDim)
    throw DimensionError("symmetric_eig_small: expected a square matrix with "
                         "1 <= d <= 8");
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("symmetric_eig_small: matrix is not symmetric");
  return jacobi_eigen(H);
}

namespace {
  CubicSolveResult assemble(const QuadraticModel &model, double sigma,
                            const SymmetricEigen &eig,
                            const Eigen::VectorXd &gh,
                            const Eigen::VectorXd &s_hat, double t,
                            CubicStatus status, bool hard) {
    CubicSolveResult r;
    r.s_star = eig.vectors * s_hat;
    r.multiplier = t;
    r.status = status;
    r.hard_case = hard;

    const double n = s_hat.norm();
    r.model_value = model.f0 + gh.dot(s_hat)
                    + 0.5 * (eig.values.array() * s_hat.array().square()).sum()
                    + sigma * n * n * n;

    if (status == CubicStatus::kMinimizer && !(r.model_value < model.f0)) {
      // Rounding left the step no better than the base point.
      r.s_star.setZero();
      r.model_value = model.f0;
      r.multiplier = 0;
      r.status = CubicStatus::kBaseIsMin;
    }
    return r;
  }

  CubicSolveResult base_point(const QuadraticModel &model) {
    CubicSolveResult r;
    r.s_star = Eigen::VectorXd::Zero(model.dim());
    r.model_value = model.f0;
    r.multiplier = 0;
    r.status = CubicStatus::kBaseIsMin;
    return r;
  }

  CubicSolveResult solve_unregularized(const QuadraticModel &model,
                                       const SymmetricEigen &eig,
                                       const Eigen::VectorXd &gh,
                                       double gnorm) {
    const auto &lam = eig.values;
    if (lam[0] < -1e-12) {
      CubicSolveResult r;
      r.status = CubicStatus::kUnbounded;
      r.s_star = Eigen::VectorXd::Zero(model.dim());
      return r;
    }
    if (gnorm == 0)
      return base_point(model);

    Eigen::VectorXd s_hat(gh.size());
    for (Eigen::Index i = 0; i < gh.size(); ++i) {
      if (lam[i] <= 1e-12) {
        if (std::abs(gh[i]) > 1e-10 * gnorm) {
          CubicSolveResult r;
          r.status = CubicStatus::kUnbounded;
          r.s_star = Eigen::VectorXd::Zero(model.dim());
          return r;
        }
        s_hat[i] = 0;
      } else {
        s_hat[i] = -gh[i] / lam[i];
      }
    }
    return assemble(model, 0, eig, gh, s_hat, 0, CubicStatus::kMinimizer,
                    false);
  }
}  // namespace

CubicSolveResult solve_cubic_reg_global(const QuadraticModel &model,
                                        double sigma) {
  model.validate();
  if (!(sigma >= 0) || !std::isfinite(sigma))
    throw std::invalid_argument("solve_cubic_reg_global: sigma must be a "
                                "finite nonnegative number");

  const SymmetricEigen eig = symmetric_eig_small(model.H);
  const Eigen::VectorXd gh = eig.vectors.transpose() * model.g;
  const double gnorm = model.g.norm();
  const Eigen::Index d = gh.size();
  const auto &lam = eig.values;

  if (sigma == 0)
    return solve_unregularized(model, eig, gh, gnorm);

  const double lam_min = lam[0];
  const double t_low = std::max(0.0, -lam_min);
  const double three_sigma = 3 * sigma;

  if (gnorm == 0) {
    if (lam_min >= 0)
      return base_point(model);
    Eigen::VectorXd s_hat = Eigen::VectorXd::Zero(d);
    s_hat[0] = t_low / three_sigma;
    return assemble(model, sigma, eig, gh, s_hat, t_low,
                    CubicStatus::kMinimizer, true);
  }

  // Shifted eigenvalues lam_i + t_low, formed by differences so that the
  // lowest one is exactly zero when lam_min < 0.
  Eigen::VectorXd mu(d);
  for (Eigen::Index i = 0; i < d; ++i)
    mu[i] = lam_min < 0 ? lam[i] - lam_min : lam[i];

  const double lam_scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  std::vector<bool> lowest(d, false);
  double g_lowest2 = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (mu[i] <= 1e-12 * lam_scale) {
      lowest[i] = true;
      g_lowest2 += gh[i] * gh[i];
    }
  }

  if (lam_min < 0 && std::sqrt(g_lowest2) <= 1e-12 * gnorm) {
    Eigen::VectorXd s_low = Eigen::VectorXd::Zero(d);
    for (Eigen::Index i = 0; i < d; ++i)
      if (!lowest[i])
        s_low[i] = -gh[i] / mu[i];
    const double radius = t_low / three_sigma;
    const double n_low = s_low.norm();
    if (n_low <= radius) {
      s_low[0] = std::sqrt(radius * radius - n_low * n_low);
      return assemble(model, sigma, eig, gh, s_low, t_low,
                      CubicStatus::kMinimizer, true);
    }
    // g is orthogonal to the lowest eigenspace but the interior solution is
    // long enough; those components stay zero on the secular curve.
    for (Eigen::Index i = 0; i < d; ++i)
      if (lowest[i])
        mu[i] = std::max(mu[i], 0.0);
  }

  // phi(delta) = ||s(delta)|| - (t_low + delta) / (3 sigma) is convex and
  // decreasing on delta > 0, with s_i(delta) = -gh_i / (mu_i + delta).
  auto s_norm = [&](double delta, double *dnorm) {
    double n2 = 0, dn = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double den = mu[i] + delta;
      if (gh[i] == 0)
        continue;
      const double si = gh[i] / den;
      n2 += si * si;
      dn += si * si / den;
    }
    const double n = std::sqrt(n2);
    if (dnorm != nullptr)
      *dnorm = n > 0 ? -dn / n : 0;
    return n;
  };

  double lo = 0;
  double hi = gnorm + three_sigma;
  double dn = 0;
  auto phi = [&](double delta) {
    return s_norm(delta, &dn) - (t_low + delta) / three_sigma;
  };

  double delta = hi;
  double f = phi(delta);
  for (int it = 0; it < 200; ++it) {
    const double t = t_low + delta;
    if (std::abs(f) <= 1e-15 * std::max(t / three_sigma, 1e-300))
      break;

    if (f > 0)
      lo = delta;
    else
      hi = delta;

    const double slope = dn - 1 / three_sigma;
    double next = delta - f / slope;
    if (!(next > lo && next < hi) || !std::isfinite(next))
      next = 0.5 * (lo + hi);
    if (next == delta)
      break;
    delta = next;
    f = phi(delta);
  }

  Eigen::VectorXd s_hat(d);
  for (Eigen::Index i = 0; i < d; ++i)
    s_hat[i] = gh[i] == 0 ? 0.0 : -gh[i] / (mu[i] + delta);

  return assemble(model, sigma, eig, gh, s_hat, t_low + delta,
                  CubicStatus::kMinimizer, false);
}

std::pair<Eigen::VectorXd, double> grid_oracle(const QuadraticModel &model,
                                               double sigma, double radius,
                                               int resolution) {
  Eigen::VectorXd center =
      model.base.size() == 0 ? Eigen::VectorXd::Zero(model.dim()) : model.base;
  return grid_oracle(model, sigma, radius, resolution, center);
}

std::pair<Eigen::VectorXd, double>
grid_oracle(const QuadraticModel &model, double sigma, double radius,
            int resolution, const Eigen::VectorXd &center) {
  const Eigen::Index d = model.dim();
  if (d < 1 || d > 3)
    throw DimensionError("grid_oracle: only d <= 3 is supported");
  if (!(radius > 0) || resolution < 2)
    throw std::invalid_argument("grid_oracle: need radius > 0 and "
                                "resolution >= 2");
  if (center.size() != d)
    throw DimensionError("grid_oracle: center dimension mismatch");

  const Eigen::VectorXd base =
      model.base.size() == 0 ? Eigen::VectorXd::Zero(d) : model.base;
  const double h = 2 * radius / (resolution - 1);
  auto coord = [&](int k) { return -radius + k * h; };

  Eigen::VectorXd best_point = center;
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd pt(d);

  std::vector<int> idx(d, 0);
  while (true) {
    for (Eigen::Index i = 0; i < d; ++i)
      pt[i] = center[i] + coord(idx[i]);
    const double v = model.regularized_value(pt - base, sigma);
    if (v < best) {
      best = v;
      best_point = pt;
    }

    Eigen::Index i = 0;
    for (; i < d; ++i) {
      if (++idx[i] < resolution)
        break;
      idx[i] = 0;
    }
    if (i == d)
      break;
  }
  return { best_point, best };
}

}  // namespace hocd
