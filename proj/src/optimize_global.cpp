#include "curvefit/optimize_global.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "curvefit/errors.hpp"
#include "curvefit/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace curvefit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Bounds {
  std::vector<double> lo;
  std::vector<double> hi;

  double clip(double v, std::size_t j) const {
    return std::min(std::max(v, lo[j]), hi[j]);
  }
};

Bounds resolve_bounds(const ModelSpec& spec, const OptimizeConfig& cfg) {
  const std::size_t np = spec.param_count;
  Bounds b;
  b.lo.assign(np, -1e6);
  b.hi.assign(np, 1e6);
  if (!cfg.bounds.empty()) {
    if (cfg.bounds.size() != np) {
      throw Error(ErrorKind::invalid_bounds,
                  "expected " + std::to_string(np) + " bound pairs, got " +
                      std::to_string(cfg.bounds.size()));
    }
    for (std::size_t j = 0; j < np; ++j) {
      b.lo[j] = cfg.bounds[j].first;
      b.hi[j] = cfg.bounds[j].second;
    }
  }
  for (std::size_t j = 0; j < np; ++j) {
    if (!(b.lo[j] < b.hi[j])) {
      throw Error(ErrorKind::invalid_bounds,
                  "bounds for parameter " + std::to_string(j) + " need lo < hi");
    }
  }
  return b;
}

struct RestartOutcome {
  double pre_polish_loss = kInf;
  FitResult polished;
};

RestartOutcome run_restart(const ModelSpec& spec, const Dataset& d, const Bounds& b,
                           const OptimizeConfig& cfg, std::size_t pop_size,
                           std::size_t restart_index) {
  const std::size_t np = spec.param_count;
  Rng rng(cfg.seed, restart_index);

  std::vector<std::vector<double>> pop(pop_size, std::vector<double>(np));
  std::vector<double> loss(pop_size, kInf);
  for (std::size_t m = 0; m < pop_size; ++m) {
    for (std::size_t j = 0; j < np; ++j) {
      pop[m][j] = rng.uniform(b.lo[j], b.hi[j]);
    }
    loss[m] = rss_or_inf(spec, pop[m], d.x, d.y);
  }

  std::vector<double> trial(np);
  for (std::size_t gen = 0; gen < cfg.max_iter; ++gen) {
    for (std::size_t m = 0; m < pop_size; ++m) {
      // three distinct members, all different from m
      std::size_t r1, r2, r3;
      do {
        r1 = rng.below(pop_size);
      } while (r1 == m);
      do {
        r2 = rng.below(pop_size);
      } while (r2 == m || r2 == r1);
      do {
        r3 = rng.below(pop_size);
      } while (r3 == m || r3 == r1 || r3 == r2);

      const std::size_t forced = rng.below(np);
      for (std::size_t j = 0; j < np; ++j) {
        if (rng.uniform01() < cfg.crossover || j == forced) {
          const double mutant =
              pop[r1][j] + cfg.mutation_rate * (pop[r2][j] - pop[r3][j]);
          trial[j] = b.clip(mutant, j);
        } else {
          trial[j] = pop[m][j];
        }
      }

      const double trial_loss = rss_or_inf(spec, trial, d.x, d.y);
      if (trial_loss <= loss[m]) {
        pop[m] = trial;
        loss[m] = trial_loss;
      }
    }
    if (gen == 0) {
      // Nothing finite after a full generation of trials means the model
      // cannot be evaluated anywhere in the box.
      const bool any_finite =
          std::any_of(loss.begin(), loss.end(), [](double v) { return v < kInf; });
      if (!any_finite) {
        throw Error(ErrorKind::non_finite,
                    "every trial in the first generation was non-finite");
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t m = 1; m < pop_size; ++m) {
    if (loss[m] < loss[best]) best = m;
  }

  RestartOutcome out;
  out.pre_polish_loss = loss[best];

  // Polish with LM, then clip back into the box; keep whichever of the raw
  // best member and the clipped polish is lower.
  FitResult polished;
  polished.theta_hat = pop[best];
  polished.loss = loss[best];
  polished.method = "differential_evolution";
  polished.converged = false;
  try {
    FitResult lm = fit(spec, d, pop[best], LocalConfig{});
    for (std::size_t j = 0; j < np; ++j) {
      lm.theta_hat[j] = b.clip(lm.theta_hat[j], j);
    }
    lm.loss = rss_or_inf(spec, lm.theta_hat, d.x, d.y);
    if (lm.loss <= polished.loss) {
      polished.theta_hat = std::move(lm.theta_hat);
      polished.loss = lm.loss;
      polished.converged = lm.converged;
    }
  } catch (const Error&) {
    // polish failed; the raw DE member stands
  }
  polished.method = "differential_evolution";
  polished.iterations = cfg.max_iter;
  out.polished = std::move(polished);
  return out;
}

}  // namespace

FitResult global_fit(const ModelSpec& spec, const Dataset& d, const OptimizeConfig& cfg,
                     GlobalTrace* trace) {
  if (d.has_missing()) {
    throw Error(ErrorKind::invalid_data, "global_fit needs a complete dataset");
  }
  const Bounds bounds = resolve_bounds(spec, cfg);
  if (cfg.restarts == 0 || cfg.max_iter == 0) {
    throw Error(ErrorKind::invalid_config, "restarts and max_iter must be positive");
  }
  if (!(cfg.mutation_rate > 0.0 && cfg.mutation_rate <= 2.0)) {
    throw Error(ErrorKind::invalid_config, "mutation_rate must lie in (0, 2]");
  }
  if (!(cfg.crossover >= 0.0 && cfg.crossover <= 1.0)) {
    throw Error(ErrorKind::invalid_config, "crossover must lie in [0, 1]");
  }
  const std::size_t pop_size =
      cfg.population != 0 ? cfg.population
                          : std::max<std::size_t>(15, 10 * spec.param_count);
  if (pop_size < 4) {
    throw Error(ErrorKind::invalid_config, "population must be at least 4");
  }

  int jobs = cfg.n_jobs;
#ifdef _OPENMP
  if (jobs < 0) jobs = omp_get_max_threads();
#else
  if (jobs < 0) jobs = 1;
#endif
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(cfg.restarts)));

  std::vector<RestartOutcome> outcomes(cfg.restarts);
  std::vector<std::exception_ptr> failures(cfg.restarts, nullptr);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs) if (jobs > 1)
#endif
  for (long long r = 0; r < static_cast<long long>(cfg.restarts); ++r) {
    const std::size_t idx = static_cast<std::size_t>(r);
    try {
      outcomes[idx] = run_restart(spec, d, bounds, cfg, pop_size, idx);
    } catch (...) {
      failures[idx] = std::current_exception();
    }
  }

  for (const std::exception_ptr& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  // Merge in restart order; strict < keeps the lowest index on ties.
  std::size_t winner = 0;
  for (std::size_t r = 1; r < cfg.restarts; ++r) {
    if (outcomes[r].polished.loss < outcomes[winner].polished.loss) winner = r;
  }

  if (trace) {
    trace->pre_polish_loss.clear();
    trace->polished_loss.clear();
    for (const RestartOutcome& o : outcomes) {
      trace->pre_polish_loss.push_back(o.pre_polish_loss);
      trace->polished_loss.push_back(o.polished.loss);
    }
    trace->winner = winner;
  }
  return outcomes[winner].polished;
}

}  // namespace curvefit
