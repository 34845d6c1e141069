#pragma once

#include <cstdint>
#include <vector>

#include "raftjamsec/authn.hpp"
#include "raftjamsec/netmodel.hpp"

namespace raftjamsec {

// One consensus round over a fixed realization: the leader broadcasts on the
// DL, link-successful followers vote on the UL, impersonators inject one vote
// each, and the leader counts accepted votes against a strict majority of the
// registered followers.
struct RoundConfig {
  PppField field;
  ChannelParams ch;
  AuthRegistry reg;    // fingerprints one-to-one with field.followers
  EveEnsemble eves;    // empty size via n_eves() == 0 means no impersonators
  bool auth_enabled = true;
  std::uint64_t seed = 1;

  std::size_t n_eves() const { return eves.priors.size(); }
  void validate() const;
};

struct ConsensusRoundOutcome {
  std::vector<std::uint8_t> dl_successes;
  std::vector<std::uint8_t> ul_successes;
  std::uint64_t votes_received = 0;        // arrived legitimate + eve votes
  std::uint64_t spoofed_votes_accepted = 0;  // eve votes passing the filter
  std::uint64_t legitimate_votes_rejected = 0;  // false alarms this round
  std::uint64_t majority_votes = 0;  // distinct-identity accepted votes
  bool consensus = false;
};

ConsensusRoundOutcome run_round(const RoundConfig& cfg);

// Fraction of rounds reaching consensus; round r uses the substream keyed by
// (cfg.seed, r), so results are identical under any worker partition.
McEstimate consensus_probability(const RoundConfig& cfg, std::uint64_t rounds,
                                 int workers = 0);

struct AttackImpactReport {
  McEstimate consensus_auth_on;
  McEstimate consensus_auth_off;
  // per injected eve vote, auth on
  McEstimate spoof_accept_rate;
  // per arrived legitimate vote, auth on
  McEstimate legit_reject_rate;
  std::uint64_t rounds = 0;
};

// Paired comparison: every round is run twice (auth on / off) from the same
// per-round seed, so link outcomes coincide and the report isolates what the
// authentication filter changes.
AttackImpactReport attack_impact_report(const RoundConfig& cfg,
                                        std::uint64_t rounds, int workers = 0);

// Population-level consensus rate: a fresh field (and matching registry) is
// sampled every round, so jammer intensity and geometry enter in expectation.
struct PopulationConfig {
  DeploymentConfig dep;
  JammerAnnulus jam;
  ChannelParams ch;
  double sigma = 0.316227766016838;
  double epsilon = 0.5;
  std::size_t n_eves = 0;
  bool auth_enabled = false;
  std::uint64_t seed = 1;
};

McEstimate consensus_probability_population(const PopulationConfig& cfg,
                                            std::uint64_t rounds,
                                            int workers = 0);

}  // namespace raftjamsec
