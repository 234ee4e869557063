#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "preattack/alpha.hpp"
#include "preattack/io.hpp"
#include "preattack/network.hpp"
#include "preattack/sim.hpp"
#include "preattack/types.hpp"

namespace preattack {

// How the synthetic preexisting network is wired.
enum class E0Structure {
  Separated,  // per-class popular target sets and active sender sets, disjoint
  Mirrored,   // every drawn edge is added once per class: exact class symmetry
  None,       // empty E0
};

struct SynthSpec {
  std::uint32_t v_count = 0;
  double v_fake_frac = 0.1;
  E0Structure structure = E0Structure::None;
  std::uint32_t popular_size = 100;  // send-side targets per class
  std::uint64_t send_edges_per_class = 0;
  std::uint32_t sender_size = 100;  // receive-side senders per class
  std::uint64_t recv_edges_per_class = 0;
};

struct SynthesizedNetwork {
  LabelFile labels;
  std::vector<std::pair<UserId, UserId>> edges;
};

SynthesizedNetwork synthesize_network(const SynthSpec& spec, std::uint64_t seed);
LabeledNetwork build_network(const SynthesizedNetwork& synth);

enum class VariantKind { PreAttack, PlusPlus, Homophily };

struct VariantSpec {
  VariantKind kind = VariantKind::PreAttack;
  bool send_only = false;
  std::string name() const;
};

std::vector<VariantSpec> all_variants();
// "all" or a comma list of variant names (preattack, preattack_pp, homophily,
// each optionally suffixed "-send").
std::vector<VariantSpec> parse_variants(const std::string& spec);

struct ExperimentConfig {
  SynthSpec synth;
  SimConfig sim;  // per-seed rng_seed is derived from master_seed
  double cls_alpha = 1.0;
  AlphaSpec cls_alpha8 = AlphaSpec::scalar(1.0);
  std::vector<std::uint64_t> checkpoints;
  std::uint32_t seeds = 1;
  std::uint64_t master_seed = 0;
};

struct CurvePoint {
  std::uint64_t checkpoint = 0;
  double auc = 0.0;
  std::uint64_t n_users = 0;
};

struct ConvergenceCurve {
  std::string variant;
  std::uint64_t seed_index = 0;
  std::vector<CurvePoint> points;
};

// Per seed: synthesize E0, sample ground-truth labels and a stream, score
// every requested variant with classify_prefixes, and compute the AUC of the
// posterior against the sampled labels at each checkpoint. Ground truth is
// the simulator's labels -- there is no external label source here. A seed
// whose label draw is single-class is re-derived with a diagnostic. Curves
// come back variant-major then seed; the seed grid runs in parallel when
// threads > 1 with identical output.
std::vector<ConvergenceCurve> run_experiment(const ExperimentConfig& config,
                                             std::span<const VariantSpec> variants,
                                             int threads = 1);

// Reads the experiment description from a "#preattack-config v1" file.
ExperimentConfig experiment_from_config(const ConfigFile& cfg);

}  // namespace preattack
