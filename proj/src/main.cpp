#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "emdra/emdra.hpp"

namespace {

using namespace emdra;

struct CommonOpts {
  std::string config = "default";
  std::string out;
  std::string in;
  std::int64_t seed = -1;
  unsigned threads = 0;
};

harness::ExperimentConfig load_cfg(const CommonOpts& opt) {
  harness::ExperimentConfig cfg = harness::load_config(opt.config);
  if (opt.seed >= 0) cfg.link.rng_seed = static_cast<std::uint64_t>(opt.seed);
  if (!opt.out.empty()) cfg.output_dir = opt.out;
  return cfg;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

forecast::TrainValSplit split_for(const harness::ExperimentConfig& cfg, std::size_t trace_len) {
  if (static_cast<long>(trace_len) == cfg.link.n_samples) return cfg.resolved_split();
  const auto& s = cfg.split;
  if (s.train_len > 0 || s.val_len > 0) {
    s.validate_for(trace_len);
    return s;
  }
  return forecast::TrainValSplit::from_total(static_cast<long>(trace_len), s.train_fraction);
}

chan::InterferenceTrace read_trace(const std::string& path) {
  csv::Table t = csv::read_table(path);
  chan::InterferenceTrace tr;
  const long total = t.col("total");
  for (const auto& row : t.rows) tr.samples.push_back(csv::parse_double(row[total]));
  return tr;
}

int cmd_simulate(const CommonOpts& opt) {
  harness::ExperimentConfig cfg = load_cfg(opt);
  cfg.link.validate();
  const auto trace = chan::gen_interference_trace(cfg.link);
  std::vector<std::string> header = {"t", "total"};
  for (long i = 1; i <= cfg.link.n_interferers; ++i) header.push_back("i" + std::to_string(i));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t t = 0; t < trace.samples.size(); ++t) {
    std::vector<std::string> row = {std::to_string(t), csv::fmt(trace.samples[t])};
    for (const auto& per : trace.per_interferer) row.push_back(csv::fmt(per[t]));
    rows.push_back(std::move(row));
  }
  const std::string out = opt.out.empty() ? "trace.csv" : opt.out;
  csv::write_table(out, header, rows);
  std::cout << "wrote " << out << " (" << trace.samples.size() << " samples)\n";
  return 0;
}

int cmd_decompose(const CommonOpts& opt) {
  harness::ExperimentConfig cfg = load_cfg(opt);
  chan::InterferenceTrace trace;
  if (!opt.in.empty()) {
    trace = read_trace(opt.in);
  } else {
    cfg.link.validate();
    trace = chan::gen_interference_trace(cfg.link);
  }
  const emd::ImfSet dec = emd::decompose(trace.samples, cfg.sift);
  std::vector<std::string> header = {"t", "total"};
  for (std::size_t k = 1; k <= dec.imfs.size(); ++k) header.push_back("imf_" + std::to_string(k));
  header.push_back("residual");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t t = 0; t < trace.samples.size(); ++t) {
    std::vector<std::string> row = {std::to_string(t), csv::fmt(trace.samples[t])};
    for (const auto& imf : dec.imfs) row.push_back(csv::fmt(imf[t]));
    row.push_back(csv::fmt(dec.residual[t]));
    rows.push_back(std::move(row));
  }
  const std::string out = opt.out.empty() ? "imfs.csv" : opt.out;
  csv::write_table(out, header, rows);
  std::cout << "wrote " << out << " (" << dec.imfs.size() << " modes + residual)\n";
  return 0;
}

std::string pred_column(forecast::Method m) {
  switch (m) {
    case forecast::Method::AR_EMD: return "pred_ar_emd";
    case forecast::Method::AR_DIRECT: return "pred_ar_direct";
    case forecast::Method::RNN_EMD: return "pred_rnn_emd";
    case forecast::Method::RNN_DIRECT: return "pred_rnn_direct";
    case forecast::Method::IIR: return "pred_iir";
    case forecast::Method::GENIE: return "pred_genie";
  }
  return "?";
}

// Canonical column order for the prediction CSV.
std::vector<forecast::Method> ordered_methods(const std::vector<forecast::Method>& ms) {
  std::vector<forecast::Method> order = {forecast::Method::AR_EMD,  forecast::Method::AR_DIRECT,
                                         forecast::Method::RNN_EMD, forecast::Method::RNN_DIRECT,
                                         forecast::Method::IIR,     forecast::Method::GENIE};
  std::vector<forecast::Method> out;
  for (forecast::Method m : order)
    for (forecast::Method c : ms)
      if (c == m) out.push_back(m);
  return out;
}

int cmd_predict(const CommonOpts& opt) {
  harness::ExperimentConfig cfg = load_cfg(opt);
  chan::InterferenceTrace trace;
  if (!opt.in.empty()) {
    trace = read_trace(opt.in);
  } else {
    cfg.link.validate();
    trace = chan::gen_interference_trace(cfg.link);
  }
  const auto split = split_for(cfg, trace.samples.size());
  const long P = split.train_len, M = split.val_len;
  const auto methods = ordered_methods(cfg.methods);

  std::vector<std::pair<forecast::Method, std::vector<double>>> preds;
  for (forecast::Method m : methods) {
    std::cerr << "predicting " << forecast::method_name(m) << "...\n";
    preds.emplace_back(
        m, harness::predict_method(m, trace, split, cfg, cfg.link.rng_seed));
  }

  std::vector<std::string> header = {"t", "actual"};
  for (const auto& [m, v] : preds) header.push_back(pred_column(m));
  std::vector<std::vector<std::string>> rows;
  for (long i = 0; i < M; ++i) {
    std::vector<std::string> row = {std::to_string(P + i), csv::fmt(trace.samples[P + i])};
    for (const auto& [m, v] : preds) row.push_back(csv::fmt(v[i]));
    rows.push_back(std::move(row));
  }
  std::filesystem::create_directories(cfg.output_dir);
  csv::write_table(join_path(cfg.output_dir, "predictions.csv"), header, rows);

  const std::vector<double> actual(trace.samples.begin() + P, trace.samples.end());
  rows.clear();
  for (const auto& [m, v] : preds)
    rows.push_back({forecast::method_name(m), csv::fmt(forecast::rmse(v, actual))});
  csv::write_table(join_path(cfg.output_dir, "rmse_summary.csv"), {"method", "rmse"}, rows);
  std::cout << "wrote " << join_path(cfg.output_dir, "predictions.csv") << " and "
            << join_path(cfg.output_dir, "rmse_summary.csv") << "\n";
  return 0;
}

int cmd_allocate(const CommonOpts& opt) {
  harness::ExperimentConfig cfg = load_cfg(opt);
  if (opt.in.empty()) throw std::runtime_error("allocate: --in predictions.csv is required");
  csv::Table table = csv::read_table(opt.in);
  const long tcol = table.col("t"), acol = table.col("actual");
  const double S = chan::db_to_linear(cfg.link.desired_mean_snr_db) * cfg.link.noise_power;
  const double N0 = cfg.link.noise_power;
  const double D = static_cast<double>(cfg.payload_bits);

  std::filesystem::create_directories(cfg.output_dir);
  const std::vector<std::string> header = {
      "t",          "predicted_interference", "predicted_sinr", "channel_uses",
      "target_eps", "actual_interference",    "actual_sinr",    "achieved_eps"};
  long files = 0;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const std::string& col = table.header[c];
    if (col.rfind("pred_", 0) != 0) continue;
    for (double eps : cfg.target_eps_list) {
      std::vector<std::vector<std::string>> rows;
      for (const auto& row : table.rows) {
        fbl::AllocationRecord rec;
        rec.t = static_cast<long>(csv::parse_double(row[tcol]));
        rec.target_eps = eps;
        rec.predicted_interference = std::max(0.0, csv::parse_double(row[c]));
        rec.actual_interference = csv::parse_double(row[acol]);
        rec.predicted_sinr = fbl::sinr(S, rec.predicted_interference, N0);
        rec.actual_sinr = fbl::sinr(S, rec.actual_interference, N0);
        rec.channel_uses = fbl::required_channel_uses(D, rec.predicted_sinr, eps);
        if (cfg.integer_R) rec.channel_uses = std::ceil(rec.channel_uses);
        rec.achieved_eps = fbl::achieved_error(rec.channel_uses, D, rec.actual_sinr);
        rows.push_back({std::to_string(rec.t), csv::fmt(rec.predicted_interference),
                        csv::fmt(rec.predicted_sinr), csv::fmt(rec.channel_uses),
                        csv::fmt(rec.target_eps), csv::fmt(rec.actual_interference),
                        csv::fmt(rec.actual_sinr), csv::fmt(rec.achieved_eps)});
      }
      const std::string name = "alloc_" + col.substr(5) + "_" + csv::fmt_short(eps) + ".csv";
      csv::write_table(join_path(cfg.output_dir, name), header, rows);
      ++files;
    }
  }
  if (files == 0) throw std::runtime_error("allocate: no pred_* columns in " + opt.in);
  std::cout << "wrote " << files << " allocation files to " << cfg.output_dir << "\n";
  return 0;
}

int cmd_evaluate(const CommonOpts& opt) {
  harness::ExperimentConfig cfg = load_cfg(opt);
  const unsigned threads = opt.threads == 0 ? util::default_thread_count() : opt.threads;
  const harness::ExperimentReport rep = harness::run_experiment(cfg, threads);
  harness::emit_report(rep, cfg.output_dir);
  std::cout << "method,rmse_mean,rmse_std\n";
  for (const auto& [m, ms] : rep.rmse_table)
    std::cout << forecast::method_name(m) << "," << csv::fmt_short(ms.first) << ","
              << csv::fmt_short(ms.second) << "\n";
  if (!rep.failures.empty())
    std::cerr << rep.failures.size() << "/" << cfg.n_seeds << " seeds failed\n";
  std::cout << "report written to " << cfg.output_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interference forecasting and finite-blocklength resource allocation"};
  app.require_subcommand(1);
  CommonOpts opt;

  auto add_common = [&](CLI::App* sub, bool with_in) {
    sub->add_option("--config", opt.config, "config file path or preset name (table1_preset)");
    sub->add_option("--seed", opt.seed, "override link.rng_seed");
    sub->add_option("--out", opt.out, "output file or directory");
    sub->add_option("--threads", opt.threads, "worker threads (evaluate)");
    if (with_in) sub->add_option("--in", opt.in, "input CSV");
  };
  CLI::App* sim = app.add_subcommand("simulate", "generate an interference trace CSV");
  add_common(sim, false);
  CLI::App* dec = app.add_subcommand("decompose", "decompose a trace into modes + residual");
  add_common(dec, true);
  CLI::App* pre = app.add_subcommand("predict", "rolling forecasts + baselines on a trace");
  add_common(pre, true);
  CLI::App* alo = app.add_subcommand("allocate", "channel-use allocation from predictions");
  add_common(alo, true);
  CLI::App* eva = app.add_subcommand("evaluate", "full Monte-Carlo pipeline + report");
  add_common(eva, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(opt);
    if (dec->parsed()) return cmd_decompose(opt);
    if (pre->parsed()) return cmd_predict(opt);
    if (alo->parsed()) return cmd_allocate(opt);
    if (eva->parsed()) return cmd_evaluate(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << app.help();
  return 2;
}
