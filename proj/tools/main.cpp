//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.h"

namespace {

using namespace hocd::cli;

void add_solver_flags(CLI::App *cmd, SolveOptions &o, std::string &init,
                      std::string &init_file) {
  cmd->add_option("--init", init, "fang-oleary | random | file")
      ->check(CLI::IsMember({ "fang-oleary", "random", "file" }));
  cmd->add_option("--init-file", init_file,
                  "coordinates for --init file (n_p rows of d reals)");
  cmd->add_option("--seed", o.seed, "seed for --init random");
  cmd->add_option("--alpha", o.alpha, "sufficient descent constant")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--sigma-min", o.sigma_min, "smallest nonzero sigma")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tau", o.tau, "sigma growth factor")
      ->check(CLI::Range(1.0 + 1e-12, 1e300));
  cmd->add_option("--f-target", o.f_target, "stop when f <= f_target");
  cmd->add_option("--triplet-cap", o.triplet_cap,
                  "neighbor triplets tried per atom when reflecting");
  cmd->add_option("--max-iter", o.max_iter, "iteration limit");
}

InitKind parse_init(const std::string &s) {
  if (s == "random")
    return InitKind::kRandom;
  if (s == "file")
    return InitKind::kFile;
  return InitKind::kFangOleary;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app { "Regularized block coordinate descent for molecular "
                 "distance geometry" };
  app.require_subcommand(1);

  IngestOptions ingest;
  std::string mode = "atom";
  auto *ing = app.add_subcommand("ingest", "PDB file to MDGP instance");
  ing->add_option("--pdb", ingest.pdb, "input PDB file")->required();
  ing->add_option("--mode", mode, "atom | atom-hetatm")
      ->check(CLI::IsMember({ "atom", "atom-hetatm" }));
  ing->add_option("--cutoff", ingest.cutoff, "distance cutoff in Angstroms")
      ->check(CLI::PositiveNumber);
  ing->add_option("--out", ingest.out, "instance file to write");

  SolveCommand solve;
  std::string method = "cd", init = "fang-oleary", init_file;
  auto *sol = app.add_subcommand("solve", "solve one instance");
  sol->add_option("--instance", solve.instance, "MDGP instance file")
      ->required();
  sol->add_option("--method", method, "cd | spg")
      ->check(CLI::IsMember({ "cd", "spg" }));
  sol->add_option("--out", solve.out, "CSV output (default stdout)");
  sol->add_option("--per-atom-errors", solve.opts.per_atom_errors,
                  "CSV of per-atom alignment errors");
  add_solver_flags(sol, solve.opts, init, init_file);

  CompareCommand compare;
  std::string cmp_init = "fang-oleary", cmp_init_file;
  std::vector<std::string> cmp_methods { "cd", "spg" };
  auto *cmp = app.add_subcommand("compare", "run methods over instances");
  cmp->add_option("instances", compare.instances, "instance files");
  cmp->add_option("--methods", cmp_methods, "subset of cd spg")
      ->check(CLI::IsMember({ "cd", "spg" }));
  cmp->add_option("--jobs", compare.jobs, "concurrent solves")
      ->check(CLI::PositiveNumber);
  cmp->add_option("--out", compare.out, "CSV output (default stdout)");
  add_solver_flags(cmp, compare.opts, cmp_init, cmp_init_file);

  PowellCommand powell;
  auto *pw = app.add_subcommand("powell", "cycling example demonstration");
  pw->add_option("--epsilon", powell.epsilon, "0 < epsilon < 0.1");
  pw->add_option("--cycles", powell.cycles, "six-step cycles to print");
  pw->add_option("--p", powell.p, "regularization order");
  pw->add_option("--alpha", powell.alpha, "sufficient descent constant");
  pw->add_option("--max-iter", powell.max_iterations,
                 "iterations of the regularized run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (*ing) {
    ingest.mode = mode == "atom-hetatm" ? hocd::PdbMode::kAtomHetatm
                                        : hocd::PdbMode::kAtomOnly;
    return cmd_ingest(ingest, std::cout, std::cerr);
  }
  if (*sol) {
    solve.opts.method = method == "spg" ? Method::kSpg : Method::kCd;
    solve.opts.init = parse_init(init);
    solve.opts.init_file = init_file;
    if (solve.opts.init == InitKind::kFile && init_file.empty()) {
      std::cerr << "--init file requires --init-file\n";
      return kExitUsage;
    }
    return cmd_solve(solve, std::cout, std::cerr);
  }
  if (*cmp) {
    compare.methods.clear();
    for (const auto &m: cmp_methods)
      compare.methods.push_back(m == "spg" ? Method::kSpg : Method::kCd);
    compare.opts.init = parse_init(cmp_init);
    compare.opts.init_file = cmp_init_file;
    return cmd_compare(compare, std::cout, std::cerr);
  }
  return cmd_powell(powell, std::cout, std::cerr);
}
