// Runs the quantitative acceptance suite and prints one pass/fail line per
// criterion. Usage: acceptance [suite] [threads]
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>

#include "bandlab/verify.hpp"

int main(int argc, char** argv) {
  const std::string suite = argc > 1 ? argv[1] : "all";
  int threads = argc > 2 ? std::atoi(argv[2]) : 0;
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw ? static_cast<int>(hw) : 1;
  }
  try {
    return bandlab::report_criteria(bandlab::run_acceptance_suite(suite, threads));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
