#include "preattack/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "preattack/auc.hpp"
#include "preattack/classifier.hpp"
#include "preattack/pa_table.hpp"
#include "preattack/rng.hpp"

namespace preattack {

namespace {

// Sample `count` distinct ids from [0, n) by a partial Fisher-Yates shuffle.
std::vector<UserId> sample_distinct(std::uint64_t n, std::uint64_t count,
                                    SplitMix64& rng) {
  std::vector<UserId> pool(n);
  std::iota(pool.begin(), pool.end(), UserId{0});
  count = std::min(count, n);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::swap(pool[i], pool[i + rng.next_below(n - i)]);
  }
  pool.resize(count);
  return pool;
}

UserId pick(const std::vector<UserId>& ids, SplitMix64& rng) {
  return ids[rng.next_below(ids.size())];
}

}  // namespace

SynthesizedNetwork synthesize_network(const SynthSpec& spec, std::uint64_t seed) {
  if (spec.v_count == 0) throw DomainError("synthetic network needs v_count > 0");
  SplitMix64 rng(seed);

  SynthesizedNetwork out;
  out.labels.k = 2;
  std::vector<std::vector<UserId>> members(2);
  for (UserId v = 0; v < spec.v_count; ++v) {
    const ClassIndex label =
        rng.next_unit() < spec.v_fake_frac ? kFakeClass : kRealClass;
    out.labels.labels.emplace(v, label);
    members[label].push_back(v);
  }

  if (spec.structure == E0Structure::None) return out;
  for (ClassIndex c = 0; c < 2; ++c) {
    if (members[c].empty() &&
        (spec.send_edges_per_class > 0 || spec.recv_edges_per_class > 0)) {
      throw DomainError("synthetic network drew no users of class " +
                        std::to_string(c) + "; raise v_count or v_fake_frac");
    }
  }

  if (spec.structure == E0Structure::Separated) {
    // Disjoint per-class popular sets, drawn label-blind so class-level rates
    // stay balanced and only individual-level preferences carry signal.
    auto targets = sample_distinct(spec.v_count, 2ULL * spec.popular_size, rng);
    auto senders = sample_distinct(spec.v_count, 2ULL * spec.sender_size, rng);
    const std::vector<UserId> target_set[2] = {
        {targets.begin(), targets.begin() + spec.popular_size},
        {targets.begin() + spec.popular_size, targets.end()}};
    const std::vector<UserId> sender_set[2] = {
        {senders.begin(), senders.begin() + spec.sender_size},
        {senders.begin() + spec.sender_size, senders.end()}};

    for (ClassIndex c = 0; c < 2; ++c) {
      for (std::uint64_t i = 0; i < spec.send_edges_per_class; ++i) {
        out.edges.emplace_back(pick(members[c], rng), pick(target_set[c], rng));
      }
      for (std::uint64_t i = 0; i < spec.recv_edges_per_class; ++i) {
        out.edges.emplace_back(pick(sender_set[c], rng), pick(members[c], rng));
      }
    }
  } else {  // Mirrored: exact per-user class symmetry of all counts
    for (std::uint64_t i = 0; i < spec.send_edges_per_class; ++i) {
      const UserId target = rng.next_below(spec.v_count);
      out.edges.emplace_back(pick(members[kRealClass], rng), target);
      out.edges.emplace_back(pick(members[kFakeClass], rng), target);
    }
    for (std::uint64_t i = 0; i < spec.recv_edges_per_class; ++i) {
      const UserId sender = rng.next_below(spec.v_count);
      out.edges.emplace_back(sender, pick(members[kRealClass], rng));
      out.edges.emplace_back(sender, pick(members[kFakeClass], rng));
    }
  }
  return out;
}

LabeledNetwork build_network(const SynthesizedNetwork& synth) {
  LabeledNetwork net(synth.labels.k);
  for (const auto& [id, label] : synth.labels.labels) net.add_user(id, label);
  for (const auto& [src, dst] : synth.edges) net.add_edge(src, dst);
  return net;
}

std::string VariantSpec::name() const {
  std::string base;
  switch (kind) {
    case VariantKind::PreAttack: base = "preattack"; break;
    case VariantKind::PlusPlus: base = "preattack_pp"; break;
    case VariantKind::Homophily: base = "homophily"; break;
  }
  return send_only ? base + "-send" : base;
}

std::vector<VariantSpec> all_variants() {
  std::vector<VariantSpec> out;
  for (VariantKind kind :
       {VariantKind::PreAttack, VariantKind::PlusPlus, VariantKind::Homophily}) {
    out.push_back({kind, false});
    out.push_back({kind, true});
  }
  return out;
}

std::vector<VariantSpec> parse_variants(const std::string& spec) {
  if (spec == "all") return all_variants();
  std::vector<VariantSpec> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    bool matched = false;
    for (const VariantSpec& candidate : all_variants()) {
      if (candidate.name() == item) {
        out.push_back(candidate);
        matched = true;
        break;
      }
    }
    if (!matched) throw DomainError("unknown variant '" + item + "'");
  }
  if (out.empty()) throw DomainError("no variants selected");
  return out;
}

namespace {

struct SeedRun {
  LabeledNetwork net;
  std::vector<ClassIndex> truth;  // per new-user index
  std::vector<EdgeEvent> events;
};

// One fully sampled world. Re-derives the seed (with a diagnostic) when the
// label draw or the scored stream is single-class and AUC would be undefined.
SeedRun sample_world(const ExperimentConfig& config, std::uint64_t seed_index) {
  std::uint64_t seed = derive_seed(config.master_seed, seed_index);
  for (int attempt = 0; attempt < 64; ++attempt) {
    SimConfig sim = config.sim;
    sim.rng_seed = derive_seed(seed, 1);

    SeedRun run{build_network(synthesize_network(config.synth, derive_seed(seed, 0))),
                sample_labels(sim),
                {}};

    bool has[2] = {false, false};
    std::set<std::uint32_t> streamed;
    run.events = sample_stream(run.net, run.truth, sim);
    for (const EdgeEvent& ev : run.events) {
      streamed.insert(static_cast<std::uint32_t>(ev.new_user - sim.new_id_base));
    }
    for (std::uint32_t idx : streamed) has[run.truth[idx]] = true;

    if (has[0] && has[1]) return run;
    std::fprintf(stderr,
                 "eval: seed %llu draw %d is single-class among scored users; "
                 "re-deriving\n",
                 static_cast<unsigned long long>(seed), attempt);
    seed = derive_seed(seed, 0x5eedULL);
  }
  throw DomainError("could not draw a two-class world; check prior and m");
}

}  // namespace

std::vector<ConvergenceCurve> run_experiment(const ExperimentConfig& config,
                                             std::span<const VariantSpec> variants,
                                             int threads) {
  if (config.seeds == 0) throw DomainError("experiment needs seeds >= 1");
  if (config.checkpoints.empty()) throw DomainError("experiment needs checkpoints");
  if (config.sim.prior.k() != 2) throw DomainError("experiments are binary (k=2)");

  std::vector<ConvergenceCurve> curves(variants.size() * config.seeds);

  const auto n_seeds = static_cast<std::int64_t>(config.seeds);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (std::int64_t s = 0; s < n_seeds; ++s) {
    const SeedRun run = sample_world(config, static_cast<std::uint64_t>(s));
    const auto touched = touched_users(run.events);

    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
      const VariantSpec& variant = variants[vi];
      PATable table;
      switch (variant.kind) {
        case VariantKind::PreAttack:
          table = build_preattack_table(run.net, config.cls_alpha, touched);
          break;
        case VariantKind::PlusPlus:
          table = build_plusplus_table(run.net, config.cls_alpha8, touched);
          break;
        case VariantKind::Homophily:
          table = build_homophily_table(run.net, config.cls_alpha8, touched);
          break;
      }
      const ClassifyMode mode =
          variant.send_only ? ClassifyMode::SendOnly : ClassifyMode::Full;
      const auto reports = classify_prefixes(table, run.events, config.sim.prior,
                                             config.checkpoints, mode);

      ConvergenceCurve curve;
      curve.variant = variant.name();
      curve.seed_index = static_cast<std::uint64_t>(s);
      for (std::size_t ci = 0; ci < config.checkpoints.size(); ++ci) {
        std::vector<std::pair<double, bool>> scored;
        for (std::size_t ri = ci; ri < reports.size();
             ri += config.checkpoints.size()) {
          const PosteriorReport& rep = reports[ri].report;
          const auto idx =
              static_cast<std::uint32_t>(rep.user - config.sim.new_id_base);
          scored.emplace_back(rep.posterior_fake(), run.truth[idx] == kFakeClass);
        }
        curve.points.push_back(CurvePoint{config.checkpoints[ci], auc(scored),
                                          scored.size()});
      }
      curves[vi * config.seeds + static_cast<std::size_t>(s)] = std::move(curve);
    }
  }
  return curves;
}

ExperimentConfig experiment_from_config(const ConfigFile& cfg) {
  ExperimentConfig out;

  out.synth.v_count = static_cast<std::uint32_t>(cfg.get_u64("v_count"));
  out.synth.v_fake_frac = cfg.get_double_or("v_fake_frac", 0.1);
  const std::string structure = cfg.get_or("e0_structure", "none");
  if (structure == "separated") {
    out.synth.structure = E0Structure::Separated;
  } else if (structure == "mirrored") {
    out.synth.structure = E0Structure::Mirrored;
  } else if (structure == "none") {
    out.synth.structure = E0Structure::None;
  } else {
    throw DomainError("e0_structure must be separated, mirrored or none");
  }
  out.synth.popular_size =
      static_cast<std::uint32_t>(cfg.get_u64_or("e0_popular_size", 100));
  out.synth.send_edges_per_class = cfg.get_u64_or("e0_send_edges_per_class", 0);
  out.synth.sender_size =
      static_cast<std::uint32_t>(cfg.get_u64_or("e0_sender_size", 100));
  out.synth.recv_edges_per_class = cfg.get_u64_or("e0_recv_edges_per_class", 0);

  std::vector<double> pi = cfg.get_doubles("pi");
  out.sim.prior = pi.size() == 1 ? Prior::binary(pi[0]) : Prior(pi);
  const std::uint32_t k = out.sim.prior.k();

  if (cfg.has("gen_alpha_send") || cfg.has("gen_alpha_recv")) {
    out.sim.alpha = AlphaSpec::tensor(k, cfg.get_doubles("gen_alpha_send"),
                                      cfg.get_doubles("gen_alpha_recv"));
  } else {
    out.sim.alpha = AlphaSpec::scalar(cfg.get_double_or("gen_alpha", 1.0));
  }

  out.sim.new_user_count = static_cast<std::uint32_t>(cfg.get_u64("m"));
  out.sim.n_events = cfg.get_u64("n_events");
  out.sim.new_id_base = cfg.get_u64_or("new_id_base", out.synth.v_count);
  if (out.sim.new_id_base < out.synth.v_count) {
    throw DomainError("new_id_base overlaps the preexisting id range");
  }
  out.sim.activity = ActivityDistribution::uniform(out.sim.new_user_count);

  out.cls_alpha = cfg.get_double_or("cls_alpha", 1.0);
  if (cfg.has("cls_alpha_send") || cfg.has("cls_alpha_recv")) {
    out.cls_alpha8 = AlphaSpec::tensor(k, cfg.get_doubles("cls_alpha_send"),
                                       cfg.get_doubles("cls_alpha_recv"));
  } else if (!out.sim.alpha.is_scalar()) {
    out.cls_alpha8 = out.sim.alpha;  // default: classify with the true rates
  } else {
    out.cls_alpha8 = AlphaSpec::scalar(out.cls_alpha);
  }

  out.checkpoints = cfg.has("checkpoints") ? cfg.get_u64s("checkpoints")
                                           : std::vector<std::uint64_t>{1, 2, 5,
                                                                        10, 20, 50};
  out.seeds = static_cast<std::uint32_t>(cfg.get_u64_or("seeds", 1));
  out.master_seed = cfg.get_u64_or("seed", 0);
  return out;
}

}  // namespace preattack
