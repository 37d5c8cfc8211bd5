#include <iostream>

#include "vpatch/selftest.hpp"

int main(int argc, char** argv) {
  vpatch::SelftestOptions opt;
  if (argc > 1) opt.seed = std::stoull(argv[1]);
  const auto results = vpatch::runAcceptance(opt, &std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << results.size() - failed << "/" << results.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
