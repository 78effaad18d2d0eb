//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "commands.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hocd/embed.h"
#include "hocd/error.h"
#include "hocd/geometry.h"
#include "hocd/powell.h"
#include "hocd/spg.h"

namespace hocd::cli {

namespace {
  using Clock = std::chrono::steady_clock;

  double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }

  std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
  }

  // Output file or the given stream.
  class Sink {
  public:
    Sink(const std::filesystem::path &path, std::ostream &fallback) {
      if (path.empty()) {
        os_ = &fallback;
      } else {
        file_.open(path);
        if (!file_)
          throw std::runtime_error("cannot write " + path.string());
        os_ = &file_;
      }
    }
    std::ostream &get() { return *os_; }

  private:
    std::ofstream file_;
    std::ostream *os_;
  };

  Conformation random_init(const MdgpInstance &inst, std::uint64_t seed) {
    const double side =
        std::max(1.0, inst.max_distance())
        * std::cbrt(static_cast<double>(std::max<std::size_t>(1, inst.num_points())));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, side);
    Conformation x(inst.dim(), inst.num_points());
    for (Eigen::Index i = 0; i < x.coords().size(); ++i)
      x.coords()[i] = u(rng);
    return x;
  }
}  // namespace

std::string_view to_string(Method m) {
  return m == Method::kCd ? "cd" : "spg";
}

int cmd_ingest(const IngestOptions &opts, std::ostream &out,
               std::ostream &err) {
  std::vector<AtomRecord> atoms;
  try {
    atoms = read_pdb_file(opts.pdb, opts.mode);
  } catch (const ParseError &e) {
    err << opts.pdb.string() << ": " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception &e) {
    err << e.what() << '\n';
    return kExitIo;
  }

  MdgpInstance inst;
  try {
    inst = build_instance(atoms, opts.cutoff);
  } catch (const std::exception &e) {
    err << opts.pdb.string() << ": " << e.what() << '\n';
    return kExitIo;
  }

  if (!opts.out.empty()) {
    std::ofstream f(opts.out);
    if (!f) {
      err << "cannot write " << opts.out.string() << '\n';
      return kExitIo;
    }
    write_instance(inst, f);
  }

  const double n_p = static_cast<double>(inst.num_points());
  const double pct = 100 * static_cast<double>(inst.s_ordered())
                     / (n_p * n_p - n_p);
  out << "n=" << inst.num_variables() << " n_p=" << inst.num_points()
      << " |S|=" << inst.s_ordered() << " (" << fmt("%.2f", pct) << "%)"
      << (inst.connected() ? "" : " disconnected") << '\n';
  if (!inst.connected())
    err << "warning: distance graph is disconnected\n";
  return kExitOk;
}

std::filesystem::path resolve_instance_path(const std::filesystem::path &p) {
  if (std::filesystem::exists(p) || p.is_absolute())
    return p;
  if (const char *dir = std::getenv("MDGP_DATA_DIR")) {
    const std::filesystem::path alt = std::filesystem::path(dir) / p;
    if (std::filesystem::exists(alt))
      return alt;
  }
  return p;
}

Conformation read_conformation(const std::filesystem::path &path, int d,
                               std::size_t n_p) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  Conformation x(d, n_p);
  for (Eigen::Index i = 0; i < x.coords().size(); ++i)
    if (!(in >> x.coords()[i]))
      throw std::runtime_error(path.string() + ": expected "
                               + std::to_string(n_p) + " rows of "
                               + std::to_string(d) + " coordinates");
  double extra;
  if (in >> extra)
    throw std::runtime_error(path.string() + ": trailing values");
  return x;
}

RunReport run_solve(const MdgpInstance &inst, const std::string &molecule,
                    const SolveOptions &opts) {
  RunReport rep;
  rep.method = std::string(to_string(opts.method));
  rep.molecule = molecule;
  rep.n = inst.num_variables();
  rep.n_p = inst.num_points();
  rep.s_ordered = inst.s_ordered();

  if (!inst.connected()) {
    rep.termination = "disconnected";
    return rep;
  }

  auto t0 = Clock::now();
  Conformation x0;
  switch (opts.init) {
  case InitKind::kFangOleary:
    x0 = fang_oleary_init(inst);
    break;
  case InitKind::kRandom:
    x0 = random_init(inst, opts.seed);
    break;
  case InitKind::kFile:
    x0 = read_conformation(opts.init_file, inst.dim(), inst.num_points());
    break;
  }
  rep.init_seconds = seconds_since(t0);

  t0 = Clock::now();
  Conformation xs;
  if (opts.method == Method::kCd) {
    SolverParams params;
    params.alpha = opts.alpha;
    params.sigma_min = opts.sigma_min;
    params.tau1 = params.tau2 = opts.tau;
    params.f_target = opts.f_target;
    if (opts.max_iter)
      params.max_iterations = *opts.max_iter;
    const OuterSolveResult r =
        outer_solve(inst, params, x0, opts.triplet_cap);
    rep.iters = r.iterations;
    rep.evals = r.f_evals;
    rep.f_final = r.f_final;
    rep.termination = std::string(to_string(r.termination));
    xs = r.x;
  } else {
    SpgParams params;
    params.f_target = opts.f_target;
    if (opts.max_iter)
      params.max_iter = *opts.max_iter;
    const int d = inst.dim();
    const SpgReport r = spg_solve(
        [&](const Eigen::VectorXd &v) { return stress(inst, Conformation(d, v)); },
        [&](const Eigen::VectorXd &v) {
          return stress_gradient(inst, Conformation(d, v));
        },
        BoxBounds::unbounded(static_cast<Eigen::Index>(inst.num_variables())),
        x0.coords(), params);
    rep.iters = r.iterations;
    rep.evals = r.f_evals;
    rep.f_final = r.f_final;
    rep.grad_inf = r.grad_inf;
    rep.termination = std::string(to_string(r.termination));
    xs = Conformation(d, r.x);
  }
  rep.wall_seconds = seconds_since(t0);

  if (inst.ground_truth() && inst.dim() == 3) {
    const AlignmentReport al =
        procrustes_error(xs.as_matrix(), inst.ground_truth()->as_matrix());
    rep.procrustes_E = al.max_error;
    if (!opts.per_atom_errors.empty()) {
      std::ofstream f(opts.per_atom_errors);
      if (!f)
        throw std::runtime_error("cannot write "
                                 + opts.per_atom_errors.string());
      f << "atom,error\n";
      char buf[64];
      for (Eigen::Index j = 0; j < al.per_atom_error.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", al.per_atom_error[j]);
        f << j + 1 << ',' << buf << '\n';
      }
    }
  }
  return rep;
}

int cmd_solve(const SolveCommand &cmd, std::ostream &out, std::ostream &err) {
  const std::filesystem::path path = resolve_instance_path(cmd.instance);
  MdgpInstance inst;
  try {
    inst = read_instance_file(path);
  } catch (const ParseError &e) {
    err << path.string() << ": " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument &e) {
    err << path.string() << ": " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception &e) {
    err << e.what() << '\n';
    return kExitIo;
  }

  RunReport rep;
  try {
    rep = run_solve(inst, path.stem().string(), cmd.opts);
  } catch (const std::runtime_error &e) {
    err << e.what() << '\n';
    return kExitIo;
  }

  try {
    Sink sink(cmd.out, out);
    if (cmd.header)
      sink.get() << kCsvHeader << '\n';
    write_csv(sink.get(), rep);
  } catch (const std::exception &e) {
    err << e.what() << '\n';
    return kExitIo;
  }

  err << rep.method << " on " << rep.molecule << ": " << rep.termination
      << " after " << rep.iters << " iterations, f = "
      << fmt("%.3e", rep.f_final);
  if (rep.procrustes_E)
    err << ", E = " << fmt("%.3e", *rep.procrustes_E);
  err << '\n';
  return rep.termination == "target_reached" ? kExitOk : kExitNotReached;
}

int cmd_compare(const CompareCommand &cmd, std::ostream &out,
                std::ostream &err) {
  struct Task {
    std::size_t instance;
    Method method;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < cmd.instances.size(); ++i)
    for (Method m: cmd.methods)
      tasks.push_back({ i, m });

  std::vector<RunReport> rows(tasks.size());
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> next { 0 };

  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      const Task &t = tasks[k];
      const std::filesystem::path path =
          resolve_instance_path(cmd.instances[t.instance]);
      RunReport &row = rows[k];
      row.method = std::string(to_string(t.method));
      row.molecule = path.stem().string();
      try {
        const MdgpInstance inst = read_instance_file(path);
        SolveOptions o = cmd.opts;
        o.method = t.method;
        row = run_solve(inst, row.molecule, o);
      } catch (const std::exception &e) {
        row.termination = "error";
        errors[k] = path.string() + ": " + e.what();
      }
    }
  };

  const unsigned jobs = std::max(1u, cmd.jobs);
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs && j < tasks.size(); ++j)
    pool.emplace_back(worker);
  worker();
  for (auto &th: pool)
    th.join();

  for (const auto &e: errors)
    if (!e.empty())
      err << e << '\n';

  try {
    Sink sink(cmd.out, out);
    sink.get() << kCsvHeader << '\n';
    for (const auto &row: rows)
      write_csv(sink.get(), row);
  } catch (const std::exception &e) {
    err << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

int cmd_powell(const PowellCommand &cmd, std::ostream &out,
               std::ostream &err) {
  if (!(cmd.epsilon > 0 && cmd.epsilon < 0.1)) {
    err << "epsilon must satisfy 0 < epsilon < 0.1\n";
    return kExitUsage;
  }
  if (cmd.p < 1 || !(cmd.alpha > 0) || cmd.cycles < 1) {
    err << "need p >= 1, alpha > 0 and cycles >= 1\n";
    return kExitUsage;
  }

  const double eps = cmd.epsilon;
  const auto trace = powell_cycle_trace(eps, cmd.cycles);
  out << "Exact cyclic coordinate minimization, epsilon = " << eps << '\n';
  double min_step = 1e300;
  for (std::size_t j = 0; j < trace.size(); ++j) {
    const auto &x = trace[j].x;
    out << "  x^" << j << " = (" << fmt("%.12f", x[0]) << ", "
        << fmt("%.12f", x[1]) << ", " << fmt("%.12f", x[2]) << ")";
    if (j > 0) {
      const double step = (x - trace[j - 1].x).norm();
      min_step = std::min(min_step, step);
      out << "  step " << fmt("%.6f", step);
    }
    out << '\n';
  }
  bool all_match = true;
  for (int k = 1; k <= cmd.cycles; ++k) {
    const bool ok = trace[6 * k].pattern_match;
    all_match = all_match && ok;
    out << "x^" << 6 * k << " matches eps/" << static_cast<long long>(std::pow(64, k))
        << " pattern: " << (ok ? "PASS" : "FAIL") << '\n';
  }
  out << "min step along the cycle: " << fmt("%.6f", min_step)
      << (min_step >= 0.1 ? " (>= 0.1)" : " (< 0.1)") << '\n';
  const double dec = powell_f(trace[0].x) - powell_f(trace[1].x);
  out << "f(x^0) - f(z^0) = " << fmt("%.15e", dec) << ", 0.2eps/4 + 81eps^2/64 = "
      << fmt("%.15e", 0.05 * eps + 81 * eps * eps / 64) << '\n';

  const double k0 = powell_k0_bound(cmd.p, cmd.alpha);
  const double k0_eps = powell_k0_bound(cmd.p, cmd.alpha, eps);
  out << "k0 bound (p + 1 - log2 80 - log2 alpha)/6 = " << fmt("%.4f", k0)
      << " for p = " << cmd.p << ", alpha = " << cmd.alpha << '\n';
  out << "with log2(eps)/6 included: " << fmt("%.4f", k0_eps) << '\n';
  const int kmax = static_cast<int>(std::ceil(std::max(k0, k0_eps))) + 1;
  for (int k = 0; k <= kmax; ++k) {
    const double lhs = cmd.alpha / std::pow(2.0, cmd.p + 1);
    const double rhs = eps / (80 * std::pow(64.0, k));
    out << "  k = " << k << ": alpha/2^(p+1) = " << fmt("%.3e", lhs)
        << (lhs <= rhs ? " <= " : " >  ") << "eps/(80*64^k) = "
        << fmt("%.3e", rhs) << '\n';
  }

  const PowellEscape run = powell_regularized_run(
      eps, cmd.p, cmd.alpha, cmd.max_iterations, cmd.threshold);
  std::size_t cycle_iters = 0;
  while (cycle_iters < run.step_norms.size()
         && run.trace.history[cycle_iters].sigma_final == 0
         && run.step_norms[cycle_iters] >= 0.1)
    ++cycle_iters;
  out << "Regularized CD: " << cycle_iters
      << " iterations with sigma = 0 and step >= 0.1 before leaving the cycle\n";
  if (run.escaped) {
    out << "first step below " << cmd.threshold << " at iteration "
        << run.iteration << '\n';
  } else {
    auto it = std::min_element(run.step_norms.begin(), run.step_norms.end());
    out << "no step below " << cmd.threshold << " within "
        << run.step_norms.size() << " iterations";
    if (it != run.step_norms.end())
      out << "; smallest step " << fmt("%.6f", *it) << " at iteration "
          << (it - run.step_norms.begin());
    out << "; f = " << fmt("%.6e", run.trace.f_final) << '\n';
  }
  return all_match ? kExitOk : kExitNotReached;
}

}  // namespace hocd::cli
