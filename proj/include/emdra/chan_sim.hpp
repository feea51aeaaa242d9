#pragma once
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "emdra/rng.hpp"

// Rayleigh block-fading link simulator: N non-cooperating interferers plus a
// desired link. Interference is modeled directly as received power
// (exponential variates = squared Rayleigh magnitudes); nothing downstream
// ever consumes a complex amplitude.
namespace emdra::chan {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Coherence-interval model. `fixed` gives aligned constant-length blocks;
// `geometric` draws each block's length from a geometric distribution with
// the configured mean, so transitions are memoryless and interferers
// decorrelate asynchronously. The i.i.d.-per-TTI case is fixed with length 1.
enum class BlockLenModel { fixed, geometric };

struct LinkConfig {
  int n_interferers = 5;
  std::vector<double> interferer_mean_inr_db = {5.0, 3.0, 0.0, -2.0, -5.0};
  double desired_mean_snr_db = 20.0;
  double noise_power = 1.0;
  int n_samples = 1000;
  // Mean coherence-block length in samples; exact length under `fixed`.
  int coherence_block_len = 8;
  BlockLenModel block_len_model = BlockLenModel::geometric;
  // Optional per-interferer mean block lengths (empty: coherence_block_len
  // for everyone). The default gives the strongest interferer a slower
  // fading rate than the rest, i.e. heterogeneous UE mobility.
  std::vector<int> per_interferer_block_len = {31, 10, 10, 10, 10};
  bool faded_desired = false;
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (n_interferers < 1) throw std::invalid_argument("LinkConfig: n_interferers must be >= 1");
    if (n_samples < 2) throw std::invalid_argument("LinkConfig: n_samples must be >= 2");
    if (coherence_block_len < 1)
      throw std::invalid_argument("LinkConfig: coherence_block_len must be >= 1");
    if (!(noise_power > 0.0) || !std::isfinite(noise_power))
      throw std::invalid_argument("LinkConfig: noise_power must be positive and finite");
    if (static_cast<int>(interferer_mean_inr_db.size()) != n_interferers)
      throw std::invalid_argument("LinkConfig: interferer_mean_inr_db size != n_interferers");
    for (double v : interferer_mean_inr_db)
      if (!std::isfinite(v)) throw std::invalid_argument("LinkConfig: non-finite INR entry");
    if (!std::isfinite(desired_mean_snr_db))
      throw std::invalid_argument("LinkConfig: non-finite desired_mean_snr_db");
    double inr_max = interferer_mean_inr_db.front();
    for (double v : interferer_mean_inr_db) inr_max = std::max(inr_max, v);
    if (!(inr_max < desired_mean_snr_db))
      throw std::invalid_argument("LinkConfig: require max INR < desired SNR");
    if (!per_interferer_block_len.empty()) {
      if (static_cast<int>(per_interferer_block_len.size()) != n_interferers)
        throw std::invalid_argument("LinkConfig: per_interferer_block_len size != n_interferers");
      for (int b : per_interferer_block_len)
        if (b < 1) throw std::invalid_argument("LinkConfig: block lengths must be >= 1");
    }
  }

  int block_len_for(int interferer) const {
    return per_interferer_block_len.empty() ? coherence_block_len
                                            : per_interferer_block_len[interferer];
  }
};

struct InterferenceTrace {
  std::vector<double> samples;                      // aggregate power, length T
  std::vector<std::vector<double>> per_interferer;  // N x T, optional but kept by the generator
};

struct DesiredTrace {
  std::vector<double> samples;  // desired received power S, length T
};

// One interferer's power sequence: piecewise-constant blocks of independent
// exponential levels with the given mean.
inline std::vector<double> gen_block_rayleigh_powers(double mean_power, int n, int block_len,
                                                     std::uint64_t seed,
                                                     BlockLenModel model = BlockLenModel::fixed) {
  if (!(mean_power > 0.0)) throw std::invalid_argument("gen_block_rayleigh_powers: mean_power <= 0");
  if (n < 1) throw std::invalid_argument("gen_block_rayleigh_powers: n < 1");
  if (block_len < 1) throw std::invalid_argument("gen_block_rayleigh_powers: block_len < 1");
  rng::Stream s(seed);
  std::vector<double> out(static_cast<std::size_t>(n));
  std::size_t t = 0;
  while (t < out.size()) {
    std::size_t len = (model == BlockLenModel::fixed)
                          ? static_cast<std::size_t>(block_len)
                          : static_cast<std::size_t>(s.geometric_len(block_len));
    double level = s.exponential(mean_power);
    for (std::size_t k = 0; k < len && t < out.size(); ++k) out[t++] = level;
  }
  return out;
}

// Aggregate interference: per-interferer substreams derived from the config
// seed (interferer i uses stream index i), summed pointwise.
inline InterferenceTrace gen_interference_trace(const LinkConfig& cfg) {
  cfg.validate();
  InterferenceTrace tr;
  tr.per_interferer.reserve(cfg.n_interferers);
  tr.samples.assign(static_cast<std::size_t>(cfg.n_samples), 0.0);
  for (int i = 0; i < cfg.n_interferers; ++i) {
    double mean = cfg.noise_power * db_to_linear(cfg.interferer_mean_inr_db[i]);
    auto p = gen_block_rayleigh_powers(mean, cfg.n_samples, cfg.block_len_for(i),
                                       rng::derive_stream(cfg.rng_seed, static_cast<std::uint64_t>(i)),
                                       cfg.block_len_model);
    for (std::size_t t = 0; t < p.size(); ++t) tr.samples[t] += p[t];
    tr.per_interferer.push_back(std::move(p));
  }
  return tr;
}

// Desired link. Default: constant S (perfect CSI, fading absorbed into the
// known power). Faded mode draws block Rayleigh like an interferer, on
// stream index N.
inline DesiredTrace gen_desired_trace(const LinkConfig& cfg) {
  cfg.validate();
  DesiredTrace tr;
  double mean = cfg.noise_power * db_to_linear(cfg.desired_mean_snr_db);
  if (!cfg.faded_desired) {
    tr.samples.assign(static_cast<std::size_t>(cfg.n_samples), mean);
  } else {
    tr.samples = gen_block_rayleigh_powers(
        mean, cfg.n_samples, cfg.coherence_block_len,
        rng::derive_stream(cfg.rng_seed, static_cast<std::uint64_t>(cfg.n_interferers)),
        cfg.block_len_model);
  }
  return tr;
}

}  // namespace emdra::chan
