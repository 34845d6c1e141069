// Command-line experiment runner: coverage/jamming sweeps, authentication
// error curves, consensus simulation, and the closed-form-vs-Monte-Carlo
// validation gate. Each subcommand reads an optional key-value spec file and
// writes a CSV artifact; see README.md for the file formats.

#include <cstdlib>
#include <iostream>
#include <array>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "raftjamsec/experiment.hpp"

namespace {

constexpr int kExitValidationFailed = 1;
constexpr int kExitBadSpec = 2;
constexpr int kExitNumericFailure = 3;

struct CommonOptions {
  std::string spec_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> rounds;
  std::optional<int> workers;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--spec", opts.spec_path,
                  "experiment spec file (key = value with [sections])")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "override the RNG seed");
  cmd->add_option("--trials", opts.trials, "override the Monte Carlo trials");
  cmd->add_option("--rounds", opts.rounds, "override the consensus rounds");
  cmd->add_option("--workers", opts.workers,
                  "worker threads (0 = library default)");
  cmd->add_option("--out", opts.out_path, "output CSV path");
}

int run_kind(raftjamsec::ExperimentKind kind, const CommonOptions& opts) {
  using namespace raftjamsec;
  try {
    ExperimentSpec spec;
    if (!opts.spec_path.empty()) {
      spec = parse_experiment_file(opts.spec_path, kind);
    } else {
      spec.kind = kind;
      spec.apply_defaults();
    }
    if (opts.seed) spec.seed = *opts.seed;
    if (opts.trials) spec.trials = *opts.trials;
    if (opts.rounds) spec.rounds = *opts.rounds;
    if (opts.workers) {
      spec.workers = *opts.workers;
    } else if (const char* env = std::getenv("RAFTJAMSEC_WORKERS")) {
      spec.workers = std::atoi(env);
    }
    if (!opts.out_path.empty()) spec.out_path = opts.out_path;
    const ExperimentOutcome outcome = run_experiment(spec);
    std::cout << outcome.summary << "\n";
    if (!outcome.gate_passed) return kExitValidationFailed;
    return 0;
  } catch (const SpecParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitBadSpec;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid spec: " << e.what() << "\n";
    return kExitBadSpec;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitNumericFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "raftjamsec: coverage/authentication analysis and consensus simulation "
      "for a jammed wireless voting network"};
  app.require_subcommand(1);

  struct SubSpec {
    const char* name;
    const char* help;
    raftjamsec::ExperimentKind kind;
  };
  const SubSpec subs[] = {
      {"coverage", "joint coverage vs SIR threshold, closed form + MC",
       raftjamsec::ExperimentKind::coverage_sweep},
      {"jamarea", "coverage vs jamming-region outer radius (z1 = 0)",
       raftjamsec::ExperimentKind::jamming_area_sweep},
      {"jamdist", "UL/DL/joint coverage vs jamming distance (z2 = z1 + w)",
       raftjamsec::ExperimentKind::jamming_distance_sweep},
      {"autherr", "authentication error probabilities vs link quality",
       raftjamsec::ExperimentKind::auth_error_sweep},
      {"roc", "detection-vs-false-alarm curves per link quality",
       raftjamsec::ExperimentKind::roc},
      {"consensus", "population consensus rate vs jamming distance",
       raftjamsec::ExperimentKind::consensus},
      {"validate", "closed-form vs Monte Carlo validation grid (gate)",
       raftjamsec::ExperimentKind::validate},
  };

  // CLI11 keeps pointers to the option targets, so give them stable storage
  std::array<CommonOptions, std::size(subs)> options{};
  std::array<CLI::App*, std::size(subs)> cmds{};
  for (std::size_t i = 0; i < std::size(subs); ++i) {
    cmds[i] = app.add_subcommand(subs[i].name, subs[i].help);
    add_common(cmds[i], options[i]);
  }

  // plotdata converts a result CSV into gnuplot blocks + a script stub
  std::string plot_csv;
  std::string plot_out;
  CLI::App* plot = app.add_subcommand(
      "plotdata", "convert a result CSV into gnuplot data blocks");
  plot->add_option("--csv", plot_csv, "input CSV produced by an experiment")
      ->required();
  plot->add_option("--out", plot_out,
                   "output base path (writes <out>.dat and <out>.gp)");

  CLI11_PARSE(app, argc, argv);

  if (plot->parsed()) {
    try {
      if (plot_out.empty()) {
        const auto dot = plot_csv.rfind('.');
        plot_out = dot == std::string::npos ? plot_csv : plot_csv.substr(0, dot);
      }
      const int blocks = raftjamsec::emit_plotdata(plot_csv, plot_out);
      std::cout << "plotdata: " << blocks << " blocks -> " << plot_out
                << ".dat, " << plot_out << ".gp\n";
      return 0;
    } catch (const raftjamsec::SpecParseError& e) {
      std::cerr << e.what() << "\n";
      return kExitBadSpec;
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      return kExitNumericFailure;
    }
  }

  for (std::size_t i = 0; i < cmds.size(); ++i) {
    if (cmds[i]->parsed()) {
      return run_kind(subs[i].kind, options[i]);
    }
  }
  std::cerr << app.help();
  return kExitBadSpec;
}
