//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "hocd/report.h"

#include <charconv>
#include <cstdio>
#include <ostream>

namespace hocd {

namespace {
  // Shortest representation that reads back to the same double.
  std::string real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  }

  std::string seconds(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
  }

  std::string quote(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
      return s;
    std::string out = "\"";
    for (char c: s) {
      if (c == '"')
        out += '"';
      out += c;
    }
    return out + '"';
  }
}  // namespace

std::string to_csv_row(const RunReport &r) {
  std::string row;
  row += quote(r.method) + ',';
  row += quote(r.molecule) + ',';
  row += std::to_string(r.n) + ',';
  row += std::to_string(r.n_p) + ',';
  row += std::to_string(r.s_ordered) + ',';
  row += std::to_string(r.iters) + ',';
  row += std::to_string(r.evals) + ',';
  row += seconds(r.init_seconds) + ',';
  row += seconds(r.wall_seconds) + ',';
  row += real(r.f_final) + ',';
  row += (r.grad_inf ? real(*r.grad_inf) : std::string()) + ',';
  row += (r.procrustes_E ? real(*r.procrustes_E) : std::string()) + ',';
  row += quote(r.termination);
  return row;
}

void write_csv(std::ostream &out, const RunReport &r) {
  out << to_csv_row(r) << '\n';
}

}  // namespace hocd
