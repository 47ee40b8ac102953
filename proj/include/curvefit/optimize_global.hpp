#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "curvefit/dataset.hpp"
#include "curvefit/models.hpp"
#include "curvefit/optimize_local.hpp"

namespace curvefit {

struct OptimizeConfig {
  // Per-parameter (lo, hi); empty means (-1e6, 1e6) for every parameter,
  // standing in for an unbounded search box.
  std::vector<std::pair<double, double>> bounds;
  std::size_t max_iter = 100;  // generations per restart
  std::size_t restarts = 5;
  double mutation_rate = 0.05;  // differential weight F
  int n_jobs = -1;              // -1 = all available threads
  std::uint64_t seed = 0;
  std::size_t population = 0;  // 0 = max(15, 10 * param_count)
  double crossover = 0.7;
};

// Per-restart diagnostics, mainly for tests.
struct GlobalTrace {
  std::vector<double> pre_polish_loss;
  std::vector<double> polished_loss;
  std::size_t winner = 0;
};

// DE/rand/1/bin inside the bound box, `restarts` independent runs, each
// seeded purely from (seed, restart index), best member polished with
// Levenberg-Marquardt and clipped back into bounds. Restarts may run in
// parallel up to n_jobs; results are merged in restart order, so the outcome
// is bit-identical for every n_jobs.
FitResult global_fit(const ModelSpec& spec, const Dataset& d,
                     const OptimizeConfig& cfg = {}, GlobalTrace* trace = nullptr);

}  // namespace curvefit
