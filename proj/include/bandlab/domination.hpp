#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bandlab {

/// Finite-N operationalization of stochastic domination X ≺ Psi: empirical
/// exceedance frequencies P[|X| > N^eps Psi] over an eps grid. Frequencies
/// are nonincreasing in eps by construction (nested events).
struct DominationCheck {
  std::vector<double> eps_grid;
  std::vector<double> exceedance;
  bool pass = false;  // frequency at the largest grid point <= threshold
};

inline DominationCheck domination_check(const std::vector<double>& samples, double psi, double N,
                                        std::vector<double> eps_grid = {0.05, 0.1, 0.2},
                                        double threshold = 0.05) {
  if (samples.size() < 20) throw std::invalid_argument("domination_check: need >= 20 samples");
  if (eps_grid.empty()) throw std::invalid_argument("domination_check: empty eps grid");
  DominationCheck out;
  out.eps_grid = std::move(eps_grid);
  for (double eps : out.eps_grid) {
    const double bound = std::pow(N, eps) * psi;
    std::size_t count = 0;
    for (double s : samples)
      if (std::abs(s) > bound) ++count;
    out.exceedance.push_back(static_cast<double>(count) / static_cast<double>(samples.size()));
  }
  out.pass = out.exceedance.back() <= threshold;
  return out;
}

}  // namespace bandlab
