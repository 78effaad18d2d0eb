//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <sstream>

#include <gtest/gtest.h>

#include "hocd/report.h"

namespace hocd {
namespace {

TEST(Report, CsvRowMatchesHeader) {
  RunReport r;
  r.method = "cd";
  r.molecule = "a,b";
  r.n = 6;
  r.n_p = 2;
  r.s_ordered = 2;
  r.f_final = 0.5;
  r.procrustes_E = 1e-7;
  r.termination = "target_reached";
  const std::string row = to_csv_row(r);
  EXPECT_EQ(row.substr(0, 11), "cd,\"a,b\",6,");
  // Quoted comma does not count as a separator.
  int fields = 1;
  bool quoted = false;
  for (char c: row) {
    if (c == '"')
      quoted = !quoted;
    else if (c == ',' && !quoted)
      ++fields;
  }
  int header_fields = 1;
  for (char c: kCsvHeader)
    header_fields += c == ',';
  EXPECT_EQ(fields, header_fields);
  EXPECT_NE(row.find(",0.5,,1e-07,target_reached"), std::string::npos);

  std::ostringstream out;
  write_csv(out, r);
  EXPECT_EQ(out.str(), row + "\n");
}

}  // namespace
}  // namespace hocd
