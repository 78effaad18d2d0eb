//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef HOCD_TOOLS_COMMANDS_H_
#define HOCD_TOOLS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hocd/mdgp.h"
#include "hocd/pdb.h"
#include "hocd/report.h"
#include "hocd/solver.h"

namespace hocd::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitNotReached = 3;

struct IngestOptions {
  std::filesystem::path pdb;
  PdbMode mode = PdbMode::kAtomOnly;
  double cutoff = kDefaultCutoff;
  std::filesystem::path out;
};

int cmd_ingest(const IngestOptions &opts, std::ostream &out,
               std::ostream &err);

enum class Method {
  kCd,
  kSpg,
};

enum class InitKind {
  kFangOleary,
  kRandom,
  kFile,
};

struct SolveOptions {
  Method method = Method::kCd;
  InitKind init = InitKind::kFangOleary;
  std::filesystem::path init_file;
  std::uint64_t seed = 0;

  double alpha = 1e-8;
  double sigma_min = 1e-8;
  double tau = 100;
  double f_target = 1e-10;
  std::size_t triplet_cap = kDefaultTripletCap;
  std::optional<std::uint64_t> max_iter;

  std::filesystem::path per_atom_errors;
};

/// Paths that do not exist are looked up under $MDGP_DATA_DIR.
std::filesystem::path resolve_instance_path(const std::filesystem::path &p);

/// Coordinates file: n_p lines of d whitespace-separated reals.
Conformation read_conformation(const std::filesystem::path &path, int d,
                               std::size_t n_p);

/// Runs init and the selected method on one instance. A disconnected
/// instance yields termination "disconnected" without solving.
RunReport run_solve(const MdgpInstance &inst, const std::string &molecule,
                    const SolveOptions &opts);

struct SolveCommand {
  std::filesystem::path instance;
  SolveOptions opts;
  std::filesystem::path out;  // CSV destination; stdout when empty
  bool header = true;
};

int cmd_solve(const SolveCommand &cmd, std::ostream &out, std::ostream &err);

struct CompareCommand {
  std::vector<std::filesystem::path> instances;
  std::vector<Method> methods { Method::kCd, Method::kSpg };
  SolveOptions opts;
  unsigned jobs = 1;
  std::filesystem::path out;
};

int cmd_compare(const CompareCommand &cmd, std::ostream &out,
                std::ostream &err);

struct PowellCommand {
  double epsilon = 1e-3;
  int cycles = 3;
  int p = 2;
  double alpha = 1e-8;
  std::size_t max_iterations = 100000;
  double threshold = 0.01;
};

int cmd_powell(const PowellCommand &cmd, std::ostream &out, std::ostream &err);

std::string_view to_string(Method m);

}  // namespace hocd::cli

#endif  // HOCD_TOOLS_COMMANDS_H_
