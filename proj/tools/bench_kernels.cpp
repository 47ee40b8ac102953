// Timing comparison of the serial reference kernels against the production
// (OpenMP) ones: reduction, model evaluation and Savitzky-Golay smoothing.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "curvefit/kernels.hpp"
#include "curvefit/models.hpp"
#include "curvefit/rng.hpp"
#include "curvefit/smooth.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using clock_type = std::chrono::steady_clock;

template <class Fn>
double time_ms(int repeats, Fn&& fn) {
  // one warmup round
  fn();
  const auto start = clock_type::now();
  for (int r = 0; r < repeats; ++r) fn();
  const auto stop = clock_type::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() / repeats;
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-24s %10.3f ms %10.3f ms %8.2fx\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 4'000'000;
  int repeats = 5;
  if (argc > 1) n = std::strtoull(argv[1], nullptr, 10);
  if (argc > 2) repeats = std::atoi(argv[2]);

#ifdef _OPENMP
  std::printf("threads: %d, n = %zu, repeats = %d\n", omp_get_max_threads(), n, repeats);
#else
  std::printf("threads: 1 (no OpenMP), n = %zu, repeats = %d\n", n, repeats);
#endif
  std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  curvefit::Rng rng(7);
  std::vector<double> a(n);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.uniform(-1.0, 1.0);
    b[i] = rng.uniform(-1.0, 1.0);
  }

  volatile double sink = 0.0;

  report("sum",
         time_ms(repeats, [&] { sink = curvefit::kernels::serial::sum(a); }),
         time_ms(repeats, [&] { sink = curvefit::kernels::sum(a); }));

  report("sum_squared_diff",
         time_ms(repeats,
                 [&] { sink = curvefit::kernels::serial::sum_squared_diff(a, b); }),
         time_ms(repeats, [&] { sink = curvefit::kernels::sum_squared_diff(a, b); }));

  const curvefit::ModelSpec& exponential = *curvefit::find_model("exponential");
  const std::vector<double> theta{5.0, 0.7};
  std::vector<double> out(n);
  report("model eval (exp)",
         time_ms(repeats,
                 [&] {
                   curvefit::kernels::serial::map_index(n, [&](std::size_t i) {
                     out[i] = exponential.eval(theta, a[i]);
                   });
                 }),
         time_ms(repeats, [&] {
           curvefit::kernels::map_index(
               n, [&](std::size_t i) { out[i] = exponential.eval(theta, a[i]); });
         }));

  // The filter calls the production map internally; the serial column times
  // an equivalent plain convolution.
  const curvefit::SGConfig sg{5, 2};
  const std::vector<double> center = curvefit::sg_coefficients(sg).coefficients;
  report("savitzky_golay (w=5)",
         time_ms(repeats,
                 [&] {
                   const std::size_t w = sg.half_window;
                   for (std::size_t j = w; j + w < n; ++j) {
                     double s = 0.0;
                     for (std::size_t k = 0; k < center.size(); ++k) {
                       s += center[k] * a[j - w + k];
                     }
                     out[j] = s;
                   }
                   sink = out[n / 2];
                 }),
         time_ms(repeats, [&] {
           const std::vector<double> smoothed = curvefit::savitzky_golay(a, sg);
           sink = smoothed[n / 2];
         }));

  (void)sink;
  return 0;
}
