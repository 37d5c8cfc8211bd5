#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "vpatch/io.hpp"

using namespace vpatch;

namespace {

PatchSpec parseText(const std::string& text) {
  std::istringstream in(text);
  return parsePatch(in);
}

void expectParseError(const std::string& text, int line) {
  try {
    parseText(text);
    ADD_FAILURE() << "no throw for:\n" << text;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line " + std::to_string(line) + ":"), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(PatchFile, FourierRoundTripIsExact) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<Real> u(-1e-2, 1e-2);
  PatchSpec s;
  s.c0 = 0.4 + u(rng);
  for (int k = 0; k < 12; ++k) {
    s.a.push_back(u(rng));
    s.b.push_back(u(rng) * 1e-7);
  }
  std::ostringstream os;
  writePatch(os, s);
  EXPECT_EQ(parseText(os.str()), s);
  std::ostringstream again;
  writePatch(again, parseText(os.str()));
  EXPECT_EQ(again.str(), os.str());
}

TEST(PatchFile, VertexRoundTripWithTime) {
  PatchSpec s;
  s.rep = Representation::Vertices;
  s.time = 1.0 / 3.0;
  for (int j = 0; j < 32; ++j) s.points.push_back(std::polar(0.3 + 1e-3 * j, kTwoPi * j / 32));
  std::ostringstream os;
  writePatch(os, s);
  EXPECT_EQ(os.str().substr(0, 20), "VPATCH 1 VERTICES\nT ");
  EXPECT_EQ(parseText(os.str()), s);
}

TEST(PatchFile, BoundaryRoundTrip) {
  const PatchBoundary f = PatchBoundary::fourier(0.5, {0.0, 0.0, 0.05}, {0.0, 0.01}, 128);
  std::ostringstream os;
  writePatch(os, f);
  const PatchBoundary g = toPatch(parseText(os.str()), 1.0, 128);
  EXPECT_EQ(g.cosCoeffs(), f.cosCoeffs());
  EXPECT_EQ(g.sinCoeffs(), f.sinCoeffs());
  EXPECT_EQ(g.nodes(), f.nodes());
}

TEST(PatchFile, ParsesSparseHarmonicsAndComments) {
  const PatchSpec s = parseText("# flower\nVPATCH 1 FOURIER\nC0 0.5\n\n3 0.05 0\nEND\n");
  EXPECT_EQ(s.c0, 0.5);
  ASSERT_EQ(s.a.size(), 3u);
  EXPECT_EQ(s.a[0], 0.0);
  EXPECT_EQ(s.a[2], 0.05);
  EXPECT_FALSE(s.time.has_value());
}

TEST(PatchFile, ScaledConstruction) {
  PatchSpec s = parseText("VPATCH 1 FOURIER\nC0 1.0\n3 0.1 0\nEND\n");
  EXPECT_THROW(toPatch(s), Error);  // reaches outside the unit disc
  const PatchBoundary d = toPatch(s, 0.5);
  EXPECT_EQ(d.meanRadius(), 0.5);
  EXPECT_EQ(d.cosCoeffs()[2], 0.05);
  EXPECT_THROW(toPatch(s, 0.0), Error);
}

TEST(PatchFile, ErrorsCarryLineNumbers) {
  expectParseError("", 0);
  expectParseError("VPATCH 2 FOURIER\n", 1);
  expectParseError("VPATCH 1 FOURIER\nC0 abc\nEND\n", 2);
  expectParseError("VPATCH 1 FOURIER\nC0 0.5\n1 0.1\nEND\n", 3);
  expectParseError("VPATCH 1 FOURIER\nC0 0.5\n0 0.1 0\nEND\n", 3);
  expectParseError("VPATCH 1 FOURIER\nC0 0.5\n1 0.1 0\n1 0.2 0\nEND\n", 4);
  expectParseError("VPATCH 1 FOURIER\nC0 0.5\n1 0.1 0\n", 3);
  expectParseError("VPATCH 1 VERTICES\nN 3\n0 0\n1 0\n", 4);
  expectParseError("VPATCH 1 VERTICES\nN 2\n0 0\n1 0\nEND\n", 2);
  expectParseError("VPATCH 1 VERTICES\nN 3\n0 0\n1 0\n0 1\n0 2\nEND\n", 6);
  expectParseError("VPATCH 1 VERTICES\nN 3\n0 0\n1 0x\n0 1\nEND\n", 4);
  expectParseError("VPATCH 1 VERTICES\nT nan\nN 3\n", 2);
}

TEST(VStateFile, RoundTripAndErrors) {
  const VStateRecord r{0.33099524142, 0.2751, 1.5e-13, 3, 0.5};
  std::ostringstream os;
  writeVState(os, r);
  std::istringstream in(os.str());
  const VStateRecord back = parseVState(in);
  EXPECT_EQ(back.omega, r.omega);
  EXPECT_EQ(back.mu, r.mu);
  EXPECT_EQ(back.residual, r.residual);
  EXPECT_EQ(back.m, 3);
  EXPECT_EQ(back.b, 0.5);
  std::istringstream missing("VSTATE\nOMEGA 1\n");
  EXPECT_THROW(parseVState(missing), Error);
  std::istringstream dup("VSTATE\nOMEGA 1\nOMEGA 2\nMU 0\nRESIDUAL 0\nM 3\n");
  EXPECT_THROW(parseVState(dup), Error);
}

TEST(Format, SeventeenDigits) {
  EXPECT_EQ(formatReal(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(formatReal(kPi)), kPi);
}
