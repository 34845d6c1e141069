#include "raftjamsec/raftsim.hpp"

#include <cmath>

#include "raftjamsec/trial_reduce.hpp"

namespace raftjamsec {

namespace {

constexpr std::uint64_t kStreamLink = 0x41;
constexpr std::uint64_t kStreamAuth = 0x42;
constexpr std::uint64_t kStreamEve = 0x43;
constexpr std::uint64_t kStreamRound = 0x44;
constexpr std::uint64_t kStreamPopField = 0x45;

McEstimate to_estimate(std::uint64_t count, std::uint64_t n) {
  McEstimate est;
  est.trials = n;
  est.mean = n == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(n);
  est.std_error =
      n == 0 ? 0.0
             : std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(n));
  return est;
}

}  // namespace

void RoundConfig::validate() const {
  ch.validate();
  reg.validate();
  if (field.followers.empty())
    throw std::invalid_argument("RoundConfig: degenerate network, no followers");
  if (reg.size() != field.followers.size())
    throw std::invalid_argument(
        "RoundConfig: registry fingerprints must correspond one-to-one with "
        "field followers");
  if (n_eves() > 0) eves.validate();
}

ConsensusRoundOutcome run_round(const RoundConfig& cfg) {
  cfg.validate();
  const std::size_t m = cfg.field.followers.size();
  const double beta_dl = cfg.ch.beta_dl_lin();
  const double beta_ul = cfg.ch.beta_ul_lin();
  Rng link(substream(cfg.seed, kStreamLink, 0));
  Rng auth(substream(cfg.seed, kStreamAuth, 0));
  Rng eve(substream(cfg.seed, kStreamEve, 0));

  ConsensusRoundOutcome out;
  out.dl_successes.assign(m, 0);
  out.ul_successes.assign(m, 0);

  // phase 1: DL broadcast reception
  for (std::size_t i = 0; i < m; ++i) {
    out.dl_successes[i] = sir_downlink(cfg.field, i, cfg.ch, link) > beta_dl;
  }
  // phase 2: CSMA uplink votes from DL-successful followers (no
  // follower-to-follower interference; jammers only)
  for (std::size_t i = 0; i < m; ++i) {
    if (!out.dl_successes[i]) continue;
    out.ul_successes[i] = sir_uplink(cfg.field, i, cfg.ch, link) > beta_ul;
  }

  // phases 3-4: arrival-ordered counting, legitimate votes first, then eve
  // votes (they wait for an idle channel). With authentication on, a vote
  // counts toward the majority only if it passes the threshold test and its
  // claimed identity has not voted yet.
  std::vector<std::uint8_t> identity_claimed(m, 0);
  std::uint64_t tally = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!out.dl_successes[i] || !out.ul_successes[i]) continue;
    ++out.votes_received;
    const double z = cfg.reg.ground_truth_db[i] + cfg.reg.sigma * auth.normal();
    if (!cfg.auth_enabled) {
      ++tally;
      continue;
    }
    const AuthDecision d = decide(z, cfg.reg);
    if (d.hypothesis == Hypothesis::h1_impersonation) {
      ++out.legitimate_votes_rejected;
      continue;
    }
    if (!identity_claimed[d.identified_index]) {
      identity_claimed[d.identified_index] = 1;
      ++tally;
    }
  }
  const double support = cfg.reg.psi_max - cfg.reg.psi_min;
  for (std::size_t j = 0; j < cfg.n_eves(); ++j) {
    ++out.votes_received;
    const double psi =
        cfg.eves.uniform_support
            ? cfg.reg.psi_min + support * eve.uniform()
            : cfg.eves.pathloss_db[j];
    const double z = psi + cfg.reg.sigma * eve.normal();
    if (!cfg.auth_enabled) {
      ++out.spoofed_votes_accepted;
      ++tally;
      continue;
    }
    const AuthDecision d = decide(z, cfg.reg);
    if (d.hypothesis == Hypothesis::h1_impersonation) continue;
    ++out.spoofed_votes_accepted;
    if (!identity_claimed[d.identified_index]) {
      identity_claimed[d.identified_index] = 1;
      ++tally;
    }
  }
  out.majority_votes = tally;
  out.consensus = 2 * tally > m;
  return out;
}

namespace {

struct RoundTally {
  std::uint64_t consensus = 0;

  RoundTally& operator+=(const RoundTally& o) {
    consensus += o.consensus;
    return *this;
  }
};

struct ImpactTally {
  std::uint64_t consensus_on = 0;
  std::uint64_t consensus_off = 0;
  std::uint64_t spoofs_accepted = 0;
  std::uint64_t eve_votes = 0;
  std::uint64_t legit_rejected = 0;
  std::uint64_t legit_votes = 0;

  ImpactTally& operator+=(const ImpactTally& o) {
    consensus_on += o.consensus_on;
    consensus_off += o.consensus_off;
    spoofs_accepted += o.spoofs_accepted;
    eve_votes += o.eve_votes;
    legit_rejected += o.legit_rejected;
    legit_votes += o.legit_votes;
    return *this;
  }
};

}  // namespace

McEstimate consensus_probability(const RoundConfig& cfg, std::uint64_t rounds,
                                 int workers) {
  cfg.validate();
  if (rounds < 1)
    throw std::invalid_argument("consensus_probability: rounds must be >= 1");
  auto body = [&](std::uint64_t r, RoundTally& tally) {
    RoundConfig round = cfg;
    round.seed = substream(cfg.seed, kStreamRound, r);
    tally.consensus += run_round(round).consensus ? 1 : 0;
  };
  const RoundTally tally = reduce_trials<RoundTally>(rounds, workers, body);
  return to_estimate(tally.consensus, rounds);
}

AttackImpactReport attack_impact_report(const RoundConfig& cfg,
                                        std::uint64_t rounds, int workers) {
  cfg.validate();
  if (rounds < 1)
    throw std::invalid_argument("attack_impact_report: rounds must be >= 1");
  auto body = [&](std::uint64_t r, ImpactTally& tally) {
    const std::uint64_t round_seed = substream(cfg.seed, kStreamRound, r);
    RoundConfig on = cfg;
    on.auth_enabled = true;
    on.seed = round_seed;
    const ConsensusRoundOutcome out_on = run_round(on);
    RoundConfig off = cfg;
    off.auth_enabled = false;
    off.seed = round_seed;
    const ConsensusRoundOutcome out_off = run_round(off);
    tally.consensus_on += out_on.consensus ? 1 : 0;
    tally.consensus_off += out_off.consensus ? 1 : 0;
    tally.spoofs_accepted += out_on.spoofed_votes_accepted;
    tally.eve_votes += cfg.n_eves();
    tally.legit_rejected += out_on.legitimate_votes_rejected;
    tally.legit_votes += out_on.votes_received - cfg.n_eves();
  };
  const ImpactTally tally = reduce_trials<ImpactTally>(rounds, workers, body);
  AttackImpactReport rep;
  rep.rounds = rounds;
  rep.consensus_auth_on = to_estimate(tally.consensus_on, rounds);
  rep.consensus_auth_off = to_estimate(tally.consensus_off, rounds);
  rep.spoof_accept_rate = to_estimate(tally.spoofs_accepted, tally.eve_votes);
  rep.legit_reject_rate = to_estimate(tally.legit_rejected, tally.legit_votes);
  return rep;
}

McEstimate consensus_probability_population(const PopulationConfig& cfg,
                                            std::uint64_t rounds,
                                            int workers) {
  cfg.dep.validate();
  cfg.jam.validate();
  cfg.ch.validate();
  if (rounds < 1)
    throw std::invalid_argument(
        "consensus_probability_population: rounds must be >= 1");
  auto body = [&](std::uint64_t r, RoundTally& tally) {
    Rng field_rng(substream(cfg.seed, kStreamPopField, r));
    PppField field;
    do {
      field = sample_field(cfg.dep, cfg.jam, field_rng);
    } while (field.followers.empty());
    RoundConfig round;
    round.field = std::move(field);
    round.ch = cfg.ch;
    round.reg = registry_from_field(round.field, cfg.ch.alpha, cfg.sigma,
                                    cfg.epsilon, cfg.dep.radius);
    if (cfg.n_eves > 0) round.eves = EveEnsemble::uniform(cfg.n_eves);
    round.auth_enabled = cfg.auth_enabled;
    round.seed = substream(cfg.seed, kStreamRound, r);
    tally.consensus += run_round(round).consensus ? 1 : 0;
  };
  const RoundTally tally = reduce_trials<RoundTally>(rounds, workers, body);
  return to_estimate(tally.consensus, rounds);
}

}  // namespace raftjamsec
