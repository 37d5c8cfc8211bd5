#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vpatch/core.hpp"
#include "vpatch/geometry.hpp"

namespace vpatch {

/// Patch as written in a file: coordinates are not required to lie in the
/// unit disc until the spec is turned into a PatchBoundary.
struct PatchSpec {
  Representation rep = Representation::Fourier;
  Real c0 = 0.0;
  std::vector<Real> a, b;       ///< harmonics k = 1..K
  std::vector<Complex> points;  ///< vertex form
  std::optional<Real> time;     ///< snapshot time ("T" line)

  friend bool operator==(const PatchSpec&, const PatchSpec&) = default;
};

inline PatchSpec toSpec(const PatchBoundary& d) {
  PatchSpec s;
  s.rep = d.representation();
  if (s.rep == Representation::Fourier) {
    s.c0 = d.meanRadius();
    s.a = d.cosCoeffs();
    s.b = d.sinCoeffs();
  } else {
    s.points = d.nodes();
  }
  return s;
}

/// Builds the boundary of the spec scaled by `factor`. Fourier specs are
/// sampled on n nodes; vertex specs keep their own count.
inline PatchBoundary toPatch(const PatchSpec& s, Real factor = 1.0, std::size_t n = 256,
                             Real wallGap = kDefaultWallGap) {
  require(factor > 0.0, ErrorCode::InvalidArgument, "scale factor must be positive");
  if (s.rep == Representation::Fourier) {
    std::vector<Real> a = s.a, b = s.b;
    for (auto& v : a) v *= factor;
    for (auto& v : b) v *= factor;
    return PatchBoundary::fourier(s.c0 * factor, std::move(a), std::move(b), n, wallGap);
  }
  std::vector<Complex> pts = s.points;
  for (auto& z : pts) z *= factor;
  return PatchBoundary::vertices(std::move(pts), wallGap);
}

inline std::string formatReal(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void writePatch(std::ostream& os, const PatchSpec& s) {
  if (s.rep == Representation::Fourier) {
    os << "VPATCH 1 FOURIER\n";
    if (s.time) os << "T " << formatReal(*s.time) << "\n";
    os << "C0 " << formatReal(s.c0) << "\n";
    const std::size_t k = std::max(s.a.size(), s.b.size());
    for (std::size_t j = 0; j < k; ++j) {
      const Real a = j < s.a.size() ? s.a[j] : 0.0;
      const Real b = j < s.b.size() ? s.b[j] : 0.0;
      os << j + 1 << " " << formatReal(a) << " " << formatReal(b) << "\n";
    }
  } else {
    os << "VPATCH 1 VERTICES\n";
    if (s.time) os << "T " << formatReal(*s.time) << "\n";
    os << "N " << s.points.size() << "\n";
    for (Complex z : s.points) os << formatReal(z.real()) << " " << formatReal(z.imag()) << "\n";
  }
  os << "END\n";
}

inline void writePatch(std::ostream& os, const PatchBoundary& d, std::optional<Real> time = {}) {
  PatchSpec s = toSpec(d);
  s.time = time;
  writePatch(os, s);
}

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  // next non-blank line that is not a '#' comment
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(is_, line)) {
      ++line_;
      std::istringstream ss(line);
      tokens.clear();
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (tokens.empty() || tokens[0][0] == '#') continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_) + ": " + msg);
  }

  Real real(const std::string& tok) const {
    std::size_t used = 0;
    Real v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      fail("expected a number, got '" + tok + "'");
    }
    if (used != tok.size() || !std::isfinite(v)) fail("expected a number, got '" + tok + "'");
    return v;
  }

  long integer(const std::string& tok) const {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception&) {
      fail("expected an integer, got '" + tok + "'");
    }
    if (used != tok.size()) fail("expected an integer, got '" + tok + "'");
    return v;
  }

  int line() const { return line_; }

 private:
  std::istream& is_;
  int line_ = 0;
};

}  // namespace detail

inline PatchSpec parsePatch(std::istream& is) {
  detail::LineReader in(is);
  std::vector<std::string> tok;
  if (!in.next(tok)) in.fail("empty patch file");
  if (tok.size() != 3 || tok[0] != "VPATCH" || tok[1] != "1" || (tok[2] != "FOURIER" && tok[2] != "VERTICES")) {
    in.fail("expected 'VPATCH 1 FOURIER' or 'VPATCH 1 VERTICES'");
  }
  PatchSpec s;
  s.rep = tok[2] == "FOURIER" ? Representation::Fourier : Representation::Vertices;

  if (!in.next(tok)) in.fail("unexpected end of file");
  if (tok[0] == "T") {
    if (tok.size() != 2) in.fail("expected 'T <time>'");
    s.time = in.real(tok[1]);
    if (!in.next(tok)) in.fail("unexpected end of file");
  }

  if (s.rep == Representation::Fourier) {
    if (tok.size() != 2 || tok[0] != "C0") in.fail("expected 'C0 <c0>'");
    s.c0 = in.real(tok[1]);
    std::vector<bool> seen;
    for (;;) {
      if (!in.next(tok)) in.fail("missing END");
      if (tok.size() == 1 && tok[0] == "END") break;
      if (tok.size() != 3) in.fail("expected '<k> <a_k> <b_k>'");
      const long k = in.integer(tok[0]);
      if (k < 1 || k > 100000) in.fail("harmonic index out of range");
      const auto idx = static_cast<std::size_t>(k - 1);
      if (idx >= s.a.size()) {
        s.a.resize(idx + 1, 0.0);
        s.b.resize(idx + 1, 0.0);
        seen.resize(idx + 1, false);
      }
      if (seen[idx]) in.fail("duplicate harmonic " + tok[0]);
      seen[idx] = true;
      s.a[idx] = in.real(tok[1]);
      s.b[idx] = in.real(tok[2]);
    }
  } else {
    if (tok.size() != 2 || tok[0] != "N") in.fail("expected 'N <count>'");
    const long n = in.integer(tok[1]);
    if (n < 3 || n > 10000000) in.fail("vertex count out of range");
    s.points.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
      if (!in.next(tok)) in.fail("unexpected end of file");
      if (tok.size() != 2) in.fail("expected '<x> <y>'");
      s.points.emplace_back(in.real(tok[0]), in.real(tok[1]));
    }
    if (!in.next(tok) || tok.size() != 1 || tok[0] != "END") in.fail("expected END after vertices");
  }
  return s;
}

inline PatchSpec readPatchFile(const std::string& path) {
  std::ifstream f(path);
  require(static_cast<bool>(f), ErrorCode::ParseError, "cannot open " + path);
  return parsePatch(f);
}

inline void writeTextFile(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorCode::InvalidArgument, "cannot write " + path);
  f << text;
  require(static_cast<bool>(f), ErrorCode::InvalidArgument, "write failed for " + path);
}

struct VStateRecord {
  Real omega = 0.0;
  Real mu = 0.0;
  Real residual = 0.0;
  int m = 0;
  Real b = 0.0;
};

inline void writeVState(std::ostream& os, const VStateRecord& r) {
  os << "VSTATE\n"
     << "OMEGA " << formatReal(r.omega) << "\n"
     << "MU " << formatReal(r.mu) << "\n"
     << "RESIDUAL " << formatReal(r.residual) << "\n"
     << "M " << r.m << "\n"
     << "B " << formatReal(r.b) << "\n";
}

inline VStateRecord parseVState(std::istream& is) {
  detail::LineReader in(is);
  std::vector<std::string> tok;
  if (!in.next(tok) || tok.size() != 1 || tok[0] != "VSTATE") in.fail("expected 'VSTATE'");
  VStateRecord r;
  int found = 0;
  while (in.next(tok)) {
    if (tok.size() != 2) in.fail("expected '<key> <value>'");
    const std::string& key = tok[0];
    int bit = 0;
    if (key == "OMEGA") r.omega = in.real(tok[1]), bit = 1;
    else if (key == "MU") r.mu = in.real(tok[1]), bit = 2;
    else if (key == "RESIDUAL") r.residual = in.real(tok[1]), bit = 4;
    else if (key == "M") r.m = static_cast<int>(in.integer(tok[1])), bit = 8;
    else if (key == "B") r.b = in.real(tok[1]), bit = 16;
    else in.fail("unknown key " + key);
    if (found & bit) in.fail("duplicate key " + key);
    found |= bit;
  }
  if (found != 31) in.fail("VSTATE block needs OMEGA, MU, RESIDUAL, M and B");
  return r;
}

}  // namespace vpatch
