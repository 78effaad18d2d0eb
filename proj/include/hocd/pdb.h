//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef HOCD_PDB_H_
#define HOCD_PDB_H_

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hocd/mdgp.h"

namespace hocd {

enum class RecordKind {
  kAtom,
  kHetatm,
};

struct AtomRecord {
  int serial = 0;
  RecordKind kind = RecordKind::kAtom;
  char alt_loc = ' ';
  Eigen::Vector3d coords;
  int model_index = 1;
};

enum class PdbMode {
  kAtomOnly,
  kAtomHetatm,
};

/// ATOM (and HETATM in kAtomHetatm mode) records of the first model. Only
/// blank or 'A' alternate locations are kept. Throws ParseError on a
/// malformed coordinate field.
std::vector<AtomRecord> parse_pdb(std::string_view text, PdbMode mode);
std::vector<AtomRecord> read_pdb_file(const std::filesystem::path &path,
                                      PdbMode mode);

inline constexpr double kDefaultCutoff = 6.0;

/// Every pair at Euclidean distance <= cutoff becomes a known distance; the
/// coordinates are kept as ground truth.
MdgpInstance build_instance(const std::vector<Eigen::Vector3d> &coords,
                            double cutoff = kDefaultCutoff);
MdgpInstance build_instance(const std::vector<AtomRecord> &atoms,
                            double cutoff = kDefaultCutoff);

/// Plain-text instance format:
///   MDGP d n_p m
///   i j d_ij            (m lines, 1-based, i < j, %.17g)
///   TRUTH               (optional, followed by n_p lines of d reals)
void write_instance(const MdgpInstance &inst, std::ostream &out);
MdgpInstance read_instance(std::istream &in);
MdgpInstance read_instance_file(const std::filesystem::path &path);

}  // namespace hocd

#endif  // HOCD_PDB_H_
