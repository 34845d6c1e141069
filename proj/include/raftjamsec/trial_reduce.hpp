#pragma once

#include <cstdint>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace raftjamsec {

// Serial reference loop: body(trial_index, tally) accumulates into an
// integer-counting tally. Kept alongside the OpenMP version so tests and the
// benchmark can compare the two bit for bit.
template <class Tally, class Body>
Tally reduce_trials_serial(std::uint64_t trials, Body&& body) {
  Tally total{};
  for (std::uint64_t t = 0; t < trials; ++t) body(t, total);
  return total;
}

// OpenMP trial loop. Each trial derives its own RNG stream from the trial
// index inside body, and tallies are integers merged with +=, so any
// partition of the index range produces identical totals.
template <class Tally, class Body>
Tally reduce_trials(std::uint64_t trials, int workers, Body&& body) {
#ifdef _OPENMP
  if (workers != 1) {
    Tally total{};
    const long long n = static_cast<long long>(trials);
    const int nt = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel num_threads(nt)
    {
      Tally local{};
#pragma omp for schedule(static)
      for (long long t = 0; t < n; ++t) {
        body(static_cast<std::uint64_t>(t), local);
      }
#pragma omp critical
      total += local;
    }
    return total;
  }
#else
  (void)workers;
#endif
  return reduce_trials_serial<Tally>(trials, std::forward<Body>(body));
}

}  // namespace raftjamsec
