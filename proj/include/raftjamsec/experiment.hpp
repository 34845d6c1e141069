#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "raftjamsec/coverage.hpp"
#include "raftjamsec/netmodel.hpp"

namespace raftjamsec {

// Fixed constants committed with the repository so that every documented
// result reruns against a pinned random realization.
inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr std::uint64_t kDefaultRealizationSeed = 15;

enum class ExperimentKind {
  coverage_sweep,
  jamming_area_sweep,
  jamming_distance_sweep,
  auth_error_sweep,
  roc,
  consensus,
  validate,
};

const char* kind_name(ExperimentKind kind);

struct SweepAxis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int steps = 2;

  double value_at(int i) const {
    return steps == 1 ? start
                      : start + (stop - start) * static_cast<double>(i) /
                                    static_cast<double>(steps - 1);
  }
};

// Declarative experiment description: defaults reproduce the documented
// baseline configuration; a flat key-value spec file overrides fields.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::validate;
  ChannelParams ch;
  DeploymentConfig dep;
  JammerAnnulus jam;
  std::optional<double> rho_fr;
  Link link = Link::joint;

  SweepAxis sweep;                      // defaulted per kind when unset
  std::string series_name;              // e.g. rho_j_multiple, epsilon, lq_db
  std::vector<double> series_values;

  // authentication scenario
  std::size_t m_followers = 5;
  std::size_t n_eves = 5;
  double link_quality_db = 10.0;        // LQ = 1 / sigma^2
  double target_pfa = 0.1;
  std::optional<double> epsilon_db;     // explicit threshold, else from target_pfa
  std::uint64_t realization_seed = kDefaultRealizationSeed;

  // execution
  std::uint64_t trials = 100000;
  std::uint64_t rounds = 10000;
  std::uint64_t seed = kDefaultSeed;
  int workers = 0;
  double z_window = 50.0;               // z2 - z1 for distance sweeps
  std::string out_path;                 // default "<kind>.csv"

  void apply_defaults();                // fills sweep/series per kind
  void validate_spec() const;           // throws SpecParseError on bad combos
};

// Parse error carrying the offending file and line for exit-code-2 messages.
class SpecParseError : public std::runtime_error {
 public:
  SpecParseError(std::string file, int line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
        file_(std::move(file)),
        line_(line) {}
  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

ExperimentSpec parse_experiment_file(const std::string& path,
                                     ExperimentKind kind);
ExperimentSpec parse_experiment_text(const std::string& text,
                                     ExperimentKind kind,
                                     const std::string& filename);

struct ExperimentOutcome {
  std::string csv_path;
  std::string summary;      // one-line human summary printed by the CLI
  bool gate_passed = true;  // meaningful for validate
};

// Runs the experiment and writes its CSV artifact. Throws SpecParseError for
// bad specs and std::runtime_error-family failures (with the failing
// parameter point in the message) for numeric trouble.
ExperimentOutcome run_experiment(const ExperimentSpec& spec);

// Converts a result CSV into gnuplot-ready data blocks plus a script stub.
// Columns are grouped into series by the suffix after the final underscore;
// rows are emitted sorted by the axis column. Writes <out_base>.dat and
// <out_base>.gp; returns the number of data blocks.
int emit_plotdata(const std::string& csv_path, const std::string& out_base);

namespace detail {
// Locale-independent shortest-round-trip formatting used for all CSV output.
std::string format_double(double v);
}  // namespace detail

}  // namespace raftjamsec
