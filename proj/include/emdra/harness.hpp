#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "emdra/baselines.hpp"
#include "emdra/config.hpp"
#include "emdra/csv.hpp"
#include "emdra/fbl.hpp"
#include "emdra/forecast.hpp"
#include "emdra/svg.hpp"
#include "emdra/threadpool.hpp"

namespace emdra::harness {

inline constexpr const char* kVersion = "emdra 1.0.0";

struct ExperimentFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-seed, per-method outcome prior to aggregation.
struct MethodSeedStats {
  double rmse = 0.0;
  std::vector<double> mean_achieved;  // indexed like target_eps_list
  std::vector<double> mean_R;
};

struct SeedOutcome {
  bool ok = false;
  std::string error;
  std::vector<MethodSeedStats> per_method;  // indexed like config.methods
  long clamped_negative_preds = 0;
};

struct CurvePoint {
  double target_eps = 0.0;
  double mean = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<std::pair<forecast::Method, std::pair<double, double>>> rmse_table;  // mean, std
  std::vector<std::pair<forecast::Method, std::vector<CurvePoint>>> outage_curve;
  std::vector<std::pair<forecast::Method, std::vector<CurvePoint>>> resource_curve;
  std::vector<std::uint64_t> seeds;                    // trace seeds that contributed
  std::vector<std::pair<long, std::string>> failures;  // seed index -> error
  long clamped_negative_preds = 0;
  std::string config_hash;
  std::string version = kVersion;
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* d = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = d[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace detail

// Predicted interference for one method over the validation region.
inline std::vector<double> predict_method(forecast::Method method,
                                          const chan::InterferenceTrace& trace,
                                          const forecast::TrainValSplit& split,
                                          const ExperimentConfig& cfg, std::uint64_t seed) {
  using forecast::Method;
  switch (method) {
    case Method::AR_DIRECT:
      return forecast::direct_forecast(trace, split, method, cfg.arima).predictions;
    case Method::RNN_DIRECT:
      return forecast::direct_forecast(trace, split, method, cfg.arima, cfg.rnn,
                                       rng::derive_stream(seed, 0xD1))
          .predictions;
    case Method::AR_EMD:
      return forecast::emd_forecast(trace, split, method, cfg.sift, cfg.arima).predictions;
    case Method::RNN_EMD:
      return forecast::emd_forecast(trace, split, method, cfg.sift, cfg.arima, cfg.rnn,
                                    rng::derive_stream(seed, 0xE1))
          .predictions;
    case Method::IIR:
      return baselines::iir_forecast(trace.samples, split, cfg.iir);
    case Method::GENIE:
      return baselines::genie_forecast(trace.samples, split);
  }
  throw std::logic_error("predict_method: unhandled method");
}

// One Monte-Carlo seed: trace generation, per-method prediction, allocation
// at every (target eps, validation step), error-rate evaluation against the
// realized interference. Never throws; failures land in the outcome.
inline SeedOutcome run_seed(const ExperimentConfig& cfg, long seed_index) {
  SeedOutcome out;
  try {
    chan::LinkConfig link = cfg.link;
    link.rng_seed = cfg.link.rng_seed + static_cast<std::uint64_t>(seed_index);
    const forecast::TrainValSplit split = cfg.resolved_split();
    const auto trace = chan::gen_interference_trace(link);
    const auto desired = chan::gen_desired_trace(link);
    const long P = split.train_len, M = split.val_len;
    const double D = static_cast<double>(cfg.payload_bits);

    for (forecast::Method method : cfg.methods) {
      std::vector<double> pred =
          predict_method(method, trace, split, cfg, link.rng_seed);
      MethodSeedStats stats;
      const std::vector<double> actual(trace.samples.begin() + P, trace.samples.end());
      stats.rmse = forecast::rmse(pred, actual);
      stats.mean_achieved.assign(cfg.target_eps_list.size(), 0.0);
      stats.mean_R.assign(cfg.target_eps_list.size(), 0.0);
      for (std::size_t ei = 0; ei < cfg.target_eps_list.size(); ++ei) {
        const double eps = cfg.target_eps_list[ei];
        double sum_eps = 0.0, sum_R = 0.0;
        for (long m = 0; m < M; ++m) {
          double ihat = pred[m];
          if (ihat < 0.0) {
            ihat = 0.0;
            if (ei == 0) ++out.clamped_negative_preds;
          }
          const double S = desired.samples[P + m];
          const double gamma_hat = fbl::sinr(S, ihat, link.noise_power);
          double R = fbl::required_channel_uses(D, gamma_hat, eps);
          if (cfg.integer_R) R = std::ceil(R);
          const double gamma = fbl::sinr(S, trace.samples[P + m], link.noise_power);
          sum_eps += fbl::achieved_error(R, D, gamma);
          sum_R += R;
        }
        stats.mean_achieved[ei] = sum_eps / static_cast<double>(M);
        stats.mean_R[ei] = sum_R / static_cast<double>(M);
      }
      out.per_method.push_back(std::move(stats));
    }
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
    out.per_method.clear();
  }
  return out;
}

// Full Monte-Carlo experiment. Seeds are independent work units; the merge
// is seed-ordered, so the report does not depend on scheduling.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                       unsigned nthreads = util::default_thread_count()) {
  cfg.validate();
  std::vector<SeedOutcome> outcomes(cfg.n_seeds);
  util::parallel_for(cfg.n_seeds, nthreads,
                     [&](long s) { outcomes[s] = run_seed(cfg, s); });

  ExperimentReport rep;
  rep.config = cfg;
  rep.config_hash = detail::hex64(detail::fnv1a(config_echo(cfg)));

  std::vector<long> good;
  for (long s = 0; s < cfg.n_seeds; ++s) {
    if (outcomes[s].ok) {
      good.push_back(s);
      rep.seeds.push_back(cfg.link.rng_seed + static_cast<std::uint64_t>(s));
      rep.clamped_negative_preds += outcomes[s].clamped_negative_preds;
    } else {
      rep.failures.emplace_back(s, outcomes[s].error);
    }
  }
  const double failed_frac =
      static_cast<double>(rep.failures.size()) / static_cast<double>(cfg.n_seeds);
  if (failed_frac > 0.2) {
    std::string detail = rep.failures.empty() ? "" : (": first failure: " + rep.failures[0].second);
    throw ExperimentFailed("experiment failed: " + std::to_string(rep.failures.size()) + "/" +
                           std::to_string(cfg.n_seeds) + " seeds failed" + detail);
  }

  const double n = static_cast<double>(good.size());
  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    double mean = 0.0;
    for (long s : good) mean += outcomes[s].per_method[mi].rmse;
    mean /= n;
    double var = 0.0;
    for (long s : good) {
      const double d = outcomes[s].per_method[mi].rmse - mean;
      var += d * d;
    }
    const double sd = good.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    rep.rmse_table.emplace_back(cfg.methods[mi], std::make_pair(mean, sd));

    std::vector<CurvePoint> oc, rc;
    for (std::size_t ei = 0; ei < cfg.target_eps_list.size(); ++ei) {
      double me = 0.0, mr = 0.0;
      for (long s : good) {
        me += outcomes[s].per_method[mi].mean_achieved[ei];
        mr += outcomes[s].per_method[mi].mean_R[ei];
      }
      oc.push_back({cfg.target_eps_list[ei], me / n});
      rc.push_back({cfg.target_eps_list[ei], mr / n});
    }
    rep.outage_curve.emplace_back(cfg.methods[mi], std::move(oc));
    rep.resource_curve.emplace_back(cfg.methods[mi], std::move(rc));
  }
  return rep;
}

// Writes rmse.csv, outage.csv, resources.csv, the two SVG charts, and a
// manifest (config echo + content hashes). Byte-stable for identical
// reports.
inline void emit_report(const ExperimentReport& rep, const std::string& output_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) throw std::runtime_error("cannot create output dir: " + output_dir);
  auto path = [&](const char* name) { return (fs::path(output_dir) / name).string(); };

  std::vector<std::vector<std::string>> rows;
  for (const auto& [m, ms] : rep.rmse_table)
    rows.push_back({forecast::method_name(m), csv::fmt(ms.first), csv::fmt(ms.second)});
  csv::write_table(path("rmse.csv"), {"method", "rmse_mean", "rmse_std"}, rows);

  rows.clear();
  for (const auto& [m, curve] : rep.outage_curve)
    for (const auto& pt : curve)
      rows.push_back({forecast::method_name(m), csv::fmt(pt.target_eps), csv::fmt(pt.mean)});
  csv::write_table(path("outage.csv"), {"method", "target_eps", "mean_achieved_eps"}, rows);

  rows.clear();
  for (const auto& [m, curve] : rep.resource_curve)
    for (const auto& pt : curve)
      rows.push_back({forecast::method_name(m), csv::fmt(pt.target_eps), csv::fmt(pt.mean)});
  csv::write_table(path("resources.csv"), {"method", "target_eps", "mean_channel_uses"}, rows);

  auto to_series = [](const std::vector<std::pair<forecast::Method, std::vector<CurvePoint>>>& cs) {
    std::vector<svg::Series> out;
    for (const auto& [m, curve] : cs) {
      svg::Series s;
      s.name = forecast::method_name(m);
      for (const auto& pt : curve) s.pts.emplace_back(pt.target_eps, pt.mean);
      out.push_back(std::move(s));
    }
    return out;
  };
  csv::write_text(path("outage.svg"),
                  svg::line_chart("Achieved vs target error rate", "target error rate",
                                  "achieved error rate", to_series(rep.outage_curve), true, true,
                                  true));
  csv::write_text(path("resources.svg"),
                  svg::line_chart("Allocated channel uses vs target error rate",
                                  "target error rate", "mean channel uses",
                                  to_series(rep.resource_curve), true, false, false));

  std::ostringstream mf;
  mf << "# experiment manifest\n";
  mf << "version=" << rep.version << '\n';
  mf << "config_hash=" << rep.config_hash << '\n';
  mf << "seeds=";
  for (std::size_t i = 0; i < rep.seeds.size(); ++i) mf << (i ? "," : "") << rep.seeds[i];
  mf << '\n';
  mf << "failed_seeds=";
  for (std::size_t i = 0; i < rep.failures.size(); ++i)
    mf << (i ? "," : "") << rep.failures[i].first;
  mf << '\n';
  mf << "clamped_negative_predictions=" << rep.clamped_negative_preds << '\n';
  for (const char* f : {"rmse.csv", "outage.csv", "resources.csv", "outage.svg", "resources.svg"}) {
    std::ifstream in(path(f), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    mf << "hash." << f << "=" << detail::hex64(detail::fnv1a(ss.str())) << '\n';
  }
  mf << "# config echo\n";
  mf << config_echo(rep.config);
  csv::write_text(path("manifest"), mf.str());
}

}  // namespace emdra::harness
