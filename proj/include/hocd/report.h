//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef HOCD_REPORT_H_
#define HOCD_REPORT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace hocd {

inline constexpr std::string_view kCsvHeader =
    "method,molecule,n,n_p,s_ordered,iters,evals,init_seconds,wall_seconds,"
    "f_final,grad_inf,procrustes_E,termination";

struct RunReport {
  std::string method;
  std::string molecule;
  std::uint64_t n = 0;
  std::uint64_t n_p = 0;
  std::uint64_t s_ordered = 0;
  std::uint64_t iters = 0;
  std::uint64_t evals = 0;
  double init_seconds = 0;
  double wall_seconds = 0;
  double f_final = 0;
  std::optional<double> grad_inf;
  std::optional<double> procrustes_E;
  std::string termination;
};

std::string to_csv_row(const RunReport &r);
void write_csv(std::ostream &out, const RunReport &r);

}  // namespace hocd

#endif  // HOCD_REPORT_H_
