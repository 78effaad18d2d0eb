//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "hocd/pdb.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hocd/error.h"

namespace hocd {

namespace {
  std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
      s.remove_prefix(1);
    while (!s.empty()
           && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
      s.remove_suffix(1);
    return s;
  }

  std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+')
      s.remove_prefix(1);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      return std::nullopt;
    return v;
  }

  template <class Int>
  std::optional<Int> to_int(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+')
      s.remove_prefix(1);
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      return std::nullopt;
    return v;
  }

  // Columns are 1-based and inclusive.
  std::string_view columns(std::string_view line, std::size_t first,
                           std::size_t last) {
    if (line.size() < first)
      return {};
    return line.substr(first - 1, last - first + 1);
  }
}  // namespace

std::vector<AtomRecord> parse_pdb(std::string_view text, PdbMode mode) {
  std::vector<AtomRecord> out;
  int model = 1;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);

    const std::string_view rec = trim(columns(line, 1, 6));
    if (rec == "ENDMDL")
      break;
    if (rec == "MODEL") {
      if (auto m = to_int<int>(columns(line, 11, 14)))
        model = *m;
      continue;
    }

    RecordKind kind;
    if (rec == "ATOM")
      kind = RecordKind::kAtom;
    else if (rec == "HETATM" && mode == PdbMode::kAtomHetatm)
      kind = RecordKind::kHetatm;
    else
      continue;

    const std::string_view alt = columns(line, 17, 17);
    const char alt_loc = alt.empty() ? ' ' : alt[0];
    if (alt_loc != ' ' && alt_loc != 'A')
      continue;

    AtomRecord a;
    a.kind = kind;
    a.alt_loc = alt_loc;
    a.model_index = model;
    a.serial = to_int<int>(columns(line, 7, 11)).value_or(0);
    static constexpr const char *kAxis[] = { "x", "y", "z" };
    for (int c = 0; c < 3; ++c) {
      const std::size_t first = 31 + 8 * static_cast<std::size_t>(c);
      const auto v = to_double(columns(line, first, first + 7));
      if (!v)
        throw ParseError(lineno, std::string("malformed ") + kAxis[c]
                                     + " coordinate in columns "
                                     + std::to_string(first) + "-"
                                     + std::to_string(first + 7));
      a.coords[c] = *v;
    }
    out.push_back(a);
  }
  return out;
}

std::vector<AtomRecord> read_pdb_file(const std::filesystem::path &path,
                                      PdbMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_pdb(buf.str(), mode);
}

MdgpInstance build_instance(const std::vector<Eigen::Vector3d> &coords,
                            double cutoff) {
  if (coords.size() < 2)
    throw std::invalid_argument("build_instance: need at least 2 atoms");
  if (!(cutoff > 0))
    throw std::invalid_argument("build_instance: cutoff must be positive");

  const std::size_t n = coords.size();
  std::vector<DistancePair> pairs;
  Conformation truth(3, n);
  for (std::size_t i = 0; i < n; ++i) {
    truth.atom(i) = coords[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = (coords[i] - coords[j]).norm();
      if (dist <= cutoff) {
        if (!(dist > 0))
          throw std::invalid_argument(
              "build_instance: atoms " + std::to_string(i + 1) + " and "
              + std::to_string(j + 1) + " coincide");
        pairs.push_back({ i, j, dist });
      }
    }
  }
  return MdgpInstance(3, n, std::move(pairs), std::move(truth));
}

MdgpInstance build_instance(const std::vector<AtomRecord> &atoms,
                            double cutoff) {
  std::vector<Eigen::Vector3d> coords;
  coords.reserve(atoms.size());
  for (const auto &a: atoms)
    coords.push_back(a.coords);
  return build_instance(coords, cutoff);
}

void write_instance(const MdgpInstance &inst, std::ostream &out) {
  char buf[64];
  out << "MDGP " << inst.dim() << ' ' << inst.num_points() << ' '
      << inst.pairs().size() << '\n';
  for (const auto &p: inst.pairs()) {
    std::snprintf(buf, sizeof buf, "%.17g", p.dist);
    out << p.i + 1 << ' ' << p.j + 1 << ' ' << buf << '\n';
  }
  if (const auto &truth = inst.ground_truth()) {
    out << "TRUTH\n";
    for (std::size_t j = 0; j < inst.num_points(); ++j) {
      for (int c = 0; c < inst.dim(); ++c) {
        std::snprintf(buf, sizeof buf, "%.17g", truth->atom(j)[c]);
        out << (c == 0 ? "" : " ") << buf;
      }
      out << '\n';
    }
  }
}

namespace {
  class LineReader {
  public:
    explicit LineReader(std::istream &in): in_(&in) { }

    // Next non-blank line split into fields; false at end of input.
    bool next(std::vector<std::string_view> &fields) {
      while (std::getline(*in_, line_)) {
        ++lineno_;
        fields.clear();
        std::string_view s = line_;
        while (true) {
          const std::size_t b = s.find_first_not_of(" \t\r");
          if (b == std::string_view::npos)
            break;
          s.remove_prefix(b);
          const std::size_t e = s.find_first_of(" \t\r");
          fields.push_back(s.substr(0, e));
          if (e == std::string_view::npos)
            break;
          s.remove_prefix(e);
        }
        if (!fields.empty())
          return true;
      }
      return false;
    }

    std::size_t lineno() const { return lineno_; }

  private:
    std::istream *in_;
    std::string line_;
    std::size_t lineno_ = 0;
  };
}  // namespace

MdgpInstance read_instance(std::istream &in) {
  LineReader rd(in);
  std::vector<std::string_view> f;
  if (!rd.next(f) || f.size() != 4 || f[0] != "MDGP")
    throw ParseError(rd.lineno(), "expected header 'MDGP d n_p m'");
  const auto d = to_int<int>(f[1]);
  const auto n_p = to_int<std::size_t>(f[2]);
  const auto m = to_int<std::size_t>(f[3]);
  if (!d || !n_p || !m || *d < 1)
    throw ParseError(rd.lineno(), "malformed header");

  std::vector<DistancePair> pairs;
  pairs.reserve(*m);
  for (std::size_t k = 0; k < *m; ++k) {
    if (!rd.next(f))
      throw ParseError(rd.lineno(), "unexpected end of file in pair list");
    if (f.size() != 3)
      throw ParseError(rd.lineno(), "expected 'i j d_ij'");
    const auto i = to_int<std::size_t>(f[0]);
    const auto j = to_int<std::size_t>(f[1]);
    const auto dist = to_double(f[2]);
    if (!i || !j || !dist)
      throw ParseError(rd.lineno(), "malformed pair");
    if (*i < 1 || *j < 1 || *i > *n_p || *j > *n_p)
      throw ParseError(rd.lineno(), "atom index out of range");
    if (*i == *j)
      throw ParseError(rd.lineno(), "self-pair");
    if (*i > *j)
      throw ParseError(rd.lineno(), "pair must satisfy i < j");
    if (!(*dist > 0) || !std::isfinite(*dist))
      throw ParseError(rd.lineno(), "distance must be positive");
    pairs.push_back({ *i - 1, *j - 1, *dist });
  }

  std::optional<Conformation> truth;
  if (rd.next(f)) {
    if (f.size() != 1 || f[0] != "TRUTH")
      throw ParseError(rd.lineno(), "expected TRUTH or end of file");
    truth.emplace(*d, *n_p);
    for (std::size_t j = 0; j < *n_p; ++j) {
      if (!rd.next(f))
        throw ParseError(rd.lineno(), "unexpected end of file in TRUTH");
      if (f.size() != static_cast<std::size_t>(*d))
        throw ParseError(rd.lineno(), "TRUTH row has the wrong length");
      for (int c = 0; c < *d; ++c) {
        const auto v = to_double(f[c]);
        if (!v)
          throw ParseError(rd.lineno(), "malformed TRUTH coordinate");
        truth->atom(j)[c] = *v;
      }
    }
    if (rd.next(f))
      throw ParseError(rd.lineno(), "trailing content after TRUTH");
  }
  return MdgpInstance(*d, *n_p, std::move(pairs), std::move(truth));
}

MdgpInstance read_instance_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  return read_instance(in);
}

}  // namespace hocd
