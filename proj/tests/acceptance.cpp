// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include "fop/acceptance.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  if (argc > 1) {
    auto r = fop::acceptance::run_one(std::atoi(argv[1]));
    std::cout << fop::acceptance::format_line(r) << std::endl;
    return r.pass ? 0 : 1;
  }
  return fop::acceptance::run_all(std::cout) == 0 ? 0 : 1;
}
