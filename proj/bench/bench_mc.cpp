// Timing comparison of the OpenMP trial loops against the serial reference
// implementations, with a bitwise equality check on the tallies. Run with
// --smoke for a fast pass suitable for ctest.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "raftjamsec/authn.hpp"
#include "raftjamsec/mc_engine.hpp"
#include "raftjamsec/raftsim.hpp"

using namespace raftjamsec;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

int failures = 0;

void report(const char* name, std::uint64_t work, double serial_s,
            double parallel_s, bool identical) {
  std::printf("%-24s %12llu trials  serial %8.3f s  parallel %8.3f s  "
              "speedup %5.2fx  results %s\n",
              name, static_cast<unsigned long long>(work), serial_s,
              parallel_s, serial_s / parallel_s,
              identical ? "identical" : "DIFFER");
  if (!identical) ++failures;
}

}  // namespace

int main(int argc, char** argv) {
  const bool smoke = argc > 1 && std::strcmp(argv[1], "--smoke") == 0;
  const std::uint64_t cov_trials = smoke ? 20000 : 400000;
  const std::uint64_t auth_draws = smoke ? 50000 : 2000000;
  const std::uint64_t rounds = smoke ? 1000 : 20000;

#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; parallel path falls back to serial\n");
#endif

  const double rho_f = 15.0 / (M_PI * 500.0 * 500.0);

  {
    CoverageQuery q;
    q.jam = JammerAnnulus{50.0, 300.0, 2.0 * rho_f};
    q.link = Link::joint;
    McConfig mc{cov_trials, 42, 0};
    double t0 = now_seconds();
    const McEstimate serial =
        estimate_coverage_serial(q, mc, GeometryMode::origin_referenced);
    double t1 = now_seconds();
    const McEstimate parallel =
        estimate_coverage(q, mc, GeometryMode::origin_referenced);
    double t2 = now_seconds();
    report("coverage (analytic geo)", cov_trials, t1 - t0, t2 - t1,
           serial.mean == parallel.mean);

    t0 = now_seconds();
    const McEstimate serial_rx =
        estimate_coverage_serial(q, mc, GeometryMode::receiver_referenced);
    t1 = now_seconds();
    const McEstimate parallel_rx =
        estimate_coverage(q, mc, GeometryMode::receiver_referenced);
    t2 = now_seconds();
    report("coverage (receiver geo)", cov_trials, t1 - t0, t2 - t1,
           serial_rx.mean == parallel_rx.mean &&
               serial_rx.resamples == parallel_rx.resamples);
  }

  {
    const AuthScenario sc =
        sample_auth_scenario(5, 5, 3.0, 500.0, std::sqrt(0.1),
                             threshold_for_pfa(0.1, std::sqrt(0.1)), 10);
    double t0 = now_seconds();
    const AuthMcResult serial =
        monte_carlo_auth_serial(sc.reg, sc.eves, auth_draws, 42);
    double t1 = now_seconds();
    const AuthMcResult parallel =
        monte_carlo_auth(sc.reg, sc.eves, auth_draws, 42, 0);
    double t2 = now_seconds();
    report("authentication oracle", auth_draws, t1 - t0, t2 - t1,
           serial.pfa.mean == parallel.pfa.mean &&
               serial.pmd.mean == parallel.pmd.mean &&
               serial.pmc.mean == parallel.pmc.mean);
  }

  {
    DeploymentConfig dep;
    dep.seed = 5;
    const JammerAnnulus jam{50.0, 300.0, rho_f};
    RoundConfig cfg;
    cfg.field = sample_field(dep, jam);
    cfg.ch = ChannelParams{};
    cfg.reg = registry_from_field(cfg.field, 3.0, std::sqrt(0.1),
                                  threshold_for_pfa(0.1, std::sqrt(0.1)),
                                  dep.radius);
    cfg.eves = EveEnsemble::uniform(5);
    cfg.auth_enabled = true;
    cfg.seed = 42;
    double t0 = now_seconds();
    const McEstimate serial = consensus_probability(cfg, rounds, 1);
    double t1 = now_seconds();
    const McEstimate parallel = consensus_probability(cfg, rounds, 0);
    double t2 = now_seconds();
    report("consensus rounds", rounds, t1 - t0, t2 - t1,
           serial.mean == parallel.mean);
  }

  if (failures) {
    std::printf("%d comparison(s) FAILED\n", failures);
    return 1;
  }
  return 0;
}
