#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "vpatch/vpatch.hpp"

namespace {

using namespace vpatch;

struct Config {
  std::string patch, out, csv;
  double omega = 0.0, lambda = 1.0, radius = 1.0;
  int m = 3;
  double b = 0.5, amplitude = 0.05;
  int n = 256;
  double dt = 0.0, tEnd = 1.0;
  std::uint64_t seed = 42;
  bool complement = false;
  int sampleEvery = 10;
};

PatchBoundary loadPatch(const Config& c) {
  return toPatch(readPatchFile(c.patch), 1.0, static_cast<std::size_t>(c.n));
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
  } else {
    writeTextFile(c.out, text);
  }
}

int runCertify(const Config& c) {
  CertifyOptions opt;
  opt.nodes = static_cast<std::size_t>(c.n);
  const PatchSpec spec = readPatchFile(c.patch);
  Certificate cert;
  if (c.complement) {
    require(c.lambda == 1.0 && c.radius == 1.0, ErrorCode::UsageError, "--complement works on the unit problem only");
    cert = certifyComplement(toPatch(spec, 1.0, opt.nodes), c.omega, opt);
  } else {
    cert = certifyPatch(spec, c.omega, c.lambda, c.radius, opt);
  }
  emit(c, formatCertificate(cert));
  if (!c.csv.empty()) {
    std::ostringstream os;
    writeTermCsv(os, cert.report);
    writeTextFile(c.csv, os.str());
  }
  return 0;
}

int runFunctionals(const Config& c) {
  const PatchBoundary d = loadPatch(c);
  const TorsionSolution t(d);
  const FunctionalReport r = decompose(d, c.omega, t);
  std::ostringstream os;
  writeReportFields(os, r);
  os << "direct_first_variation=" << formatReal(directFirstVariation(d, c.omega, t)) << "\n\n";
  writeTermCsv(os, r);
  emit(c, os.str());
  if (!c.csv.empty()) {
    std::ostringstream csv;
    writeTermCsv(csv, r);
    writeTextFile(c.csv, csv.str());
  }
  return 0;
}

int runTorsion(const Config& c) {
  const PatchBoundary d = loadPatch(c);
  const TorsionSolution t(d);
  std::ostringstream os;
  os << "torsion_mass=" << formatReal(t.mass()) << "\n"
     << "talenti_bound=" << formatReal(t.talentiBound()) << "\n"
     << "talenti_gap=" << formatReal(t.talentiGap()) << "\n"
     << "nystrom_residual=" << formatReal(t.residual()) << "\n";
  emit(c, os.str());
  if (!c.csv.empty()) {
    std::ostringstream csv;
    csv << "x,y,grad_p_x,grad_p_y\n";
    const auto g = t.gradientAtNodes();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Complex z = d.nodes()[i];
      csv << formatReal(z.real()) << "," << formatReal(z.imag()) << "," << formatReal(g[i].real()) << ","
          << formatReal(g[i].imag()) << "\n";
    }
    writeTextFile(c.csv, csv.str());
  }
  return 0;
}

int runVState(const Config& c) {
  require(!c.out.empty(), ErrorCode::UsageError, "vstate needs --out");
  VStateOptions opt;
  opt.nodes = static_cast<std::size_t>(c.n);
  const VStateSolution s = solveVState(c.m, c.b, c.amplitude, opt);
  std::ostringstream vp, side;
  writePatch(vp, s.boundary);
  writeVState(side, {s.omega, s.mu, s.residualMax, s.fold, s.baseRadius});
  writeTextFile(c.out, vp.str());
  writeTextFile(c.out + ".vstate", side.str());
  std::cout << "omega=" << formatReal(s.omega) << "\n"
            << "bifurcation_omega=" << formatReal(bifurcationOmega(c.m, c.b)) << "\n"
            << "residual=" << formatReal(s.residualMax) << "\n"
            << "iterations=" << s.iterations << "\n";
  return 0;
}

int runEvolve(const Config& c) {
  require(c.dt >= 0.0, ErrorCode::UsageError, "--dt must be positive (0 picks the default)");
  const PatchBoundary d = loadPatch(c);
  EvolveOptions opt;
  opt.dt = c.dt;
  opt.sampleEvery = c.sampleEvery;
  opt.referenceOmega = c.omega;
  const EvolutionState s = run(d, c.tEnd, opt);
  if (!c.csv.empty()) {
    std::ostringstream csv;
    writeDiagnosticsCsv(csv, s.history);
    writeTextFile(c.csv, csv.str());
  }
  if (!c.out.empty()) {
    std::ostringstream vp;
    writePatch(vp, s.boundary, s.time);
    writeTextFile(c.out, vp.str());
  }
  const auto& h = s.history;
  std::cout << "steps=" << s.steps << "\n"
            << "dt=" << formatReal(s.dt) << "\n"
            << "area_drift=" << formatReal(std::abs(h.back().area - h.front().area) / h.front().area) << "\n"
            << "energy_drift=" << formatReal(std::abs(h.back().energy - h.front().energy) / std::abs(h.front().energy))
            << "\n"
            << "rigid_rotation_error=" << formatReal(rigidRotationError(h, c.omega)) << "\n";
  return 0;
}

int runSelftest(const Config& c) {
  SelftestOptions opt;
  opt.seed = c.seed;
  const auto results = runAcceptance(opt, &std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " FAILED") << "\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vortex patch rigidity toolkit"};
  app.require_subcommand(1, 1);
  Config c;

  auto* certify = app.add_subcommand("certify", "certify a (patch, omega) pair");
  certify->add_option("--patch", c.patch, "VPATCH file")->required()->check(CLI::ExistingFile);
  certify->add_option("--omega", c.omega, "angular velocity")->required();
  certify->add_option("--lambda", c.lambda, "vorticity strength");
  certify->add_option("--radius", c.radius, "container disc radius")->check(CLI::PositiveNumber);
  certify->add_option("--n", c.n, "nodes for Fourier patches")->check(CLI::Range(16, 1 << 16));
  certify->add_option("--out", c.out, "report file (default stdout)");
  certify->add_option("--csv", c.csv, "term,value CSV file");
  certify->add_flag("--complement", c.complement, "certify the complement of the patch");

  auto* functionals = app.add_subcommand("functionals", "first-variation decomposition");
  functionals->add_option("--patch", c.patch, "VPATCH file")->required()->check(CLI::ExistingFile);
  functionals->add_option("--omega", c.omega, "angular velocity")->required();
  functionals->add_option("--n", c.n, "nodes for Fourier patches")->check(CLI::Range(16, 1 << 16));
  functionals->add_option("--out", c.out, "report file (default stdout)");
  functionals->add_option("--csv", c.csv, "term,value CSV file");

  auto* torsion = app.add_subcommand("torsion", "torsion function of a patch");
  torsion->add_option("--patch", c.patch, "VPATCH file")->required()->check(CLI::ExistingFile);
  torsion->add_option("--n", c.n, "nodes for Fourier patches")->check(CLI::Range(16, 1 << 16));
  torsion->add_option("--out", c.out, "report file (default stdout)");
  torsion->add_option("--csv", c.csv, "boundary gradient CSV file");

  auto* vstate = app.add_subcommand("vstate", "solve for an m-fold V-state");
  vstate->add_option("--m", c.m, "fold")->required()->check(CLI::Range(1, 64));
  vstate->add_option("--b", c.b, "base disc radius")->required();
  vstate->add_option("--amplitude", c.amplitude, "pinned amplitude of mode m")->required();
  vstate->add_option("--n", c.n, "boundary nodes")->check(CLI::Range(16, 1 << 16));
  vstate->add_option("--out", c.out, "VPATCH output (sidecar <out>.vstate)")->required();

  auto* evolve = app.add_subcommand("evolve", "contour dynamics");
  evolve->add_option("--patch", c.patch, "VPATCH file")->required()->check(CLI::ExistingFile);
  evolve->add_option("--t-end", c.tEnd, "final time")->required();
  evolve->add_option("--dt", c.dt, "time step (default 1e-2 b/max|u|)");
  evolve->add_option("--omega", c.omega, "reference rotation rate for hausdorff_vs_rotation");
  evolve->add_option("--n", c.n, "nodes for Fourier patches")->check(CLI::Range(16, 1 << 16));
  evolve->add_option("--out", c.out, "final boundary VPATCH file");
  evolve->add_option("--csv", c.csv, "diagnostics CSV file");

  auto* selftest = app.add_subcommand("selftest", "acceptance battery");
  selftest->add_option("--seed", c.seed, "seed for randomized audits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*certify) return runCertify(c);
    if (*functionals) return runFunctionals(c);
    if (*torsion) return runTorsion(c);
    if (*vstate) return runVState(c);
    if (*evolve) return runEvolve(c);
    if (*selftest) return runSelftest(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::UsageError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
