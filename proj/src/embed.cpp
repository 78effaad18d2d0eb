//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "hocd/embed.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "hocd/cubic.h"
#include "hocd/error.h"

namespace hocd {

std::vector<std::vector<std::size_t>>
connected_components(const MdgpInstance &inst) {
  const std::size_t n = inst.num_points();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<std::size_t>> comps;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s])
      continue;
    std::vector<std::size_t> comp { s };
    std::deque<std::size_t> queue { s };
    seen[s] = true;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (const auto &nb: inst.neighbors(u)) {
        if (!seen[nb.atom]) {
          seen[nb.atom] = true;
          comp.push_back(nb.atom);
          queue.push_back(nb.atom);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

Eigen::MatrixXd floyd_warshall(const MdgpInstance &inst) {
  const auto n = static_cast<Eigen::Index>(inst.num_points());
  Eigen::MatrixXd D =
      Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::infinity());
  D.diagonal().setZero();
  for (const auto &p: inst.pairs()) {
    const auto i = static_cast<Eigen::Index>(p.i);
    const auto j = static_cast<Eigen::Index>(p.j);
    D(i, j) = D(j, i) = std::min(D(i, j), p.dist);
  }
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double dkj = D(k, j);
      if (!std::isfinite(dkj))
        continue;
      for (Eigen::Index i = 0; i < n; ++i)
        D(i, j) = std::min(D(i, j), D(i, k) + dkj);
    }
  return D;
}

Eigen::MatrixXd dijkstra_all_pairs(const MdgpInstance &inst) {
  const std::size_t n = inst.num_points();
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd D = Eigen::MatrixXd::Constant(
      static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n), inf);

  using Item = std::pair<double, std::size_t>;
  std::vector<double> dist(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), inf);
    dist[s] = 0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
      const auto [du, u] = heap.top();
      heap.pop();
      if (du > dist[u])
        continue;
      for (const auto &nb: inst.neighbors(u)) {
        const double alt = du + nb.dist;
        if (alt < dist[nb.atom]) {
          dist[nb.atom] = alt;
          heap.emplace(alt, nb.atom);
        }
      }
    }
    for (std::size_t t = 0; t < n; ++t)
      D(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = dist[t];
  }
  // Symmetrize against rounding in the accumulated path sums.
  return 0.5 * (D + D.transpose());
}

CompletedDistanceMatrix
shortest_path_completion(const MdgpInstance &inst, ShortestPathMethod method) {
  if (inst.num_points() > 1 && !inst.connected()) {
    const auto comps = connected_components(inst);
    throw DisconnectedGraphError(
        "distance graph has " + std::to_string(comps.size())
        + " connected components");
  }
  CompletedDistanceMatrix out;
  out.D = method == ShortestPathMethod::kFloydWarshall
              ? floyd_warshall(inst)
              : dijkstra_all_pairs(inst);
  return out;
}

Eigen::MatrixXd double_center(const Eigen::MatrixXd &D) {
  if (D.rows() != D.cols())
    throw DimensionError("double_center: D must be square");
  if (D.rows() == 0)
    return {};
  const Eigen::MatrixXd D2 = D.cwiseProduct(D);
  const Eigen::VectorXd row_mean = D2.rowwise().mean();
  const Eigen::RowVectorXd col_mean = D2.colwise().mean();
  const double mean = D2.mean();
  Eigen::MatrixXd T = D2;
  T.colwise() -= row_mean;
  T.rowwise() -= col_mean;
  T.array() += mean;
  T *= -0.5;
  return 0.5 * (T + T.transpose());
}

namespace {
  // Modified Gram-Schmidt on columns [from, end) of Q, against all earlier
  // columns, applied twice. Columns that collapse are replaced by random
  // directions.
  void orthonormalize(Eigen::MatrixXd &Q, Eigen::Index from,
                      std::mt19937_64 &rng) {
    std::normal_distribution<double> normal;
    for (Eigen::Index c = from; c < Q.cols(); ++c) {
      for (int attempt = 0;; ++attempt) {
        const double before = Q.col(c).norm();
        for (int pass = 0; pass < 2; ++pass)
          for (Eigen::Index k = 0; k < c; ++k)
            Q.col(c) -= Q.col(k).dot(Q.col(c)) * Q.col(k);
        const double after = Q.col(c).norm();
        if (after > 1e-10 * before && after > 0) {
          Q.col(c) /= after;
          break;
        }
        if (attempt > 8)
          throw std::runtime_error("orthonormalize: cannot complete basis");
        for (Eigen::Index i = 0; i < Q.rows(); ++i)
          Q(i, c) = normal(rng);
      }
    }
  }

  void normalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index arg = 0;
    double best = -1;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) > best) {
        best = std::abs(v[i]);
        arg = i;
      }
    }
    if (v.size() > 0 && v[arg] < 0)
      v = -v;
  }

  double spectral_norm_estimate(const Eigen::MatrixXd &T) {
    const Eigen::Index n = T.rows();
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(double(n));
    for (Eigen::Index i = 0; i < n; ++i)
      v[i] += 1e-3 * std::sin(double(i + 1));
    v.normalize();
    double est = 0;
    for (int it = 0; it < 60; ++it) {
      Eigen::VectorXd w = T * v;
      const double nw = w.norm();
      if (nw == 0)
        return 0;
      est = nw;
      v = w / nw;
    }
    return est;
  }
}  // namespace

TopEigenpairs top_d_eigenpairs(const Eigen::MatrixXd &T, int d) {
  if (T.rows() != T.cols())
    throw DimensionError("top_d_eigenpairs: T must be square");
  if (d < 1)
    throw std::invalid_argument("top_d_eigenpairs: d must be positive");

  const Eigen::Index n = T.rows();
  TopEigenpairs out;
  out.requested = d;
  if (n == 0) {
    out.values.resize(0);
    out.vectors.resize(0, 0);
    return out;
  }

  const double fro = T.norm();
  const double keep_tol = 1e-10 * fro;
  const Eigen::Index want = std::min<Eigen::Index>(d, n);

  Eigen::VectorXd theta;
  Eigen::MatrixXd Q;
  if (n <= 2 * want + 8 || fro == 0) {
    const SymmetricEigen eig = jacobi_eigen(T);
    theta = eig.values.reverse();
    Q = eig.vectors.rowwise().reverse();
  } else {
    // T + rho I is positive semidefinite up to the estimate's slack, so
    // subspace iteration converges to the algebraically largest pairs.
    const double rho = 1.05 * spectral_norm_estimate(T);
    const Eigen::Index p = std::min<Eigen::Index>(n, 2 * want + 8);
    const double tol = 1e-11 * std::max(1.0, fro);

    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> normal;
    Q.resize(n, p);
    for (Eigen::Index j = 0; j < p; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        Q(i, j) = normal(rng);
    orthonormalize(Q, 0, rng);

    Eigen::Index locked = 0;
    constexpr int kMaxIter = 20000;
    int it = 0;
    for (; it < kMaxIter && locked < want; ++it) {
      const Eigen::Index active = p - locked;
      Eigen::MatrixXd Z = T * Q.rightCols(active) + rho * Q.rightCols(active);
      Q.rightCols(active) = Z;
      orthonormalize(Q, locked, rng);

      // Rayleigh-Ritz on the active columns.
      const Eigen::MatrixXd TQ = T * Q.rightCols(active);
      Eigen::MatrixXd H = Q.rightCols(active).transpose() * TQ;
      H = 0.5 * (H + H.transpose());
      const SymmetricEigen eig = jacobi_eigen(H);
      const Eigen::MatrixXd W = eig.vectors.rowwise().reverse();
      Q.rightCols(active) = Q.rightCols(active) * W;
      const Eigen::MatrixXd TQr = TQ * W;

      theta.resize(p);
      theta.tail(active) = eig.values.reverse();
      for (Eigen::Index c = 0; c < active && locked < want; ++c) {
        const Eigen::Index col = locked;
        const double res =
            (TQr.col(c) - theta[col] * Q.col(col)).norm();
        if (res > tol)
          break;
        ++locked;
      }
    }
    out.iterations = it;
    theta.conservativeResize(p);
  }

  Eigen::Index kept = 0;
  while (kept < want && theta[kept] > keep_tol)
    ++kept;
  out.values = theta.head(kept);
  out.vectors = Q.leftCols(kept);
  for (Eigen::Index c = 0; c < kept; ++c)
    normalize_sign(out.vectors.col(c));
  return out;
}

Conformation fang_oleary_init(const MdgpInstance &inst,
                              const InitOptions &opts) {
  const int d = inst.dim();
  const std::size_t n = inst.num_points();
  Conformation x(d, n);
  if (n == 0)
    return x;

  const CompletedDistanceMatrix comp =
      shortest_path_completion(inst, opts.method);
  const Eigen::MatrixXd T = double_center(comp.D);
  const TopEigenpairs top = top_d_eigenpairs(T, d);

  for (Eigen::Index c = 0; c < top.values.size(); ++c) {
    const double s = std::sqrt(top.values[c]) * opts.scale;
    for (std::size_t j = 0; j < n; ++j)
      x.atom(j)[c] = s * top.vectors(static_cast<Eigen::Index>(j), c);
  }

  if (opts.jitter > 0) {
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal(0.0, opts.jitter);
    for (Eigen::Index i = 0; i < x.coords().size(); ++i)
      x.coords()[i] += normal(rng);
  }
  return x;
}

}  // namespace hocd
