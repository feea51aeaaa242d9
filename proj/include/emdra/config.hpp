#pragma once
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "emdra/arima.hpp"
#include "emdra/baselines.hpp"
#include "emdra/chan_sim.hpp"
#include "emdra/csv.hpp"
#include "emdra/emd.hpp"
#include "emdra/forecast_types.hpp"
#include "emdra/lstm.hpp"

namespace emdra::harness {

// Full experiment parameterization. Field defaults reproduce the reference
// scenario (five interferers at {5,3,0,-2,-5} dB INR over 20 dB SNR, D=50
// bits) at a statistically meaningful scale: T=1000 samples, 20 seeds.
struct ExperimentConfig {
  chan::LinkConfig link;
  forecast::TrainValSplit split;
  emd::SiftParams sift;
  forecast::ArimaSpec arima;
  forecast::RecurrentSpec rnn;
  baselines::IirParams iir;
  long payload_bits = 50;
  std::vector<double> target_eps_list = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
  long n_seeds = 20;
  std::vector<forecast::Method> methods = {
      forecast::Method::AR_EMD,  forecast::Method::AR_DIRECT, forecast::Method::RNN_EMD,
      forecast::Method::RNN_DIRECT, forecast::Method::IIR,    forecast::Method::GENIE};
  bool integer_R = false;
  std::string output_dir = "out";

  void validate() const {
    link.validate();
    sift.validate();
    arima.validate();
    rnn.validate();
    iir.validate();
    if (payload_bits < 1) throw std::invalid_argument("config: payload_bits must be >= 1");
    if (n_seeds < 1) throw std::invalid_argument("config: n_seeds must be >= 1");
    if (target_eps_list.empty()) throw std::invalid_argument("config: empty target_eps_list");
    for (std::size_t i = 0; i < target_eps_list.size(); ++i) {
      double e = target_eps_list[i];
      if (!(e > 0.0 && e < 1.0))
        throw std::invalid_argument("config: target eps values must lie in (0,1)");
      if (i > 0 && !(target_eps_list[i - 1] < e))
        throw std::invalid_argument("config: target_eps_list must be sorted ascending");
    }
    if (methods.empty()) throw std::invalid_argument("config: methods list is empty");
    resolved_split();
  }

  // The split actually used: explicit lengths when set, otherwise derived
  // from train_fraction and the trace length.
  forecast::TrainValSplit resolved_split() const {
    if (split.train_len > 0 || split.val_len > 0) {
      split.validate_for(static_cast<std::size_t>(link.n_samples));
      return split;
    }
    return forecast::TrainValSplit::from_total(link.n_samples, split.train_fraction);
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline long to_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long r = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return r;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for " + key + ": '" + v + "'");
  }
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    return csv::parse_double(v);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
  }
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": '" + v + "'");
}

inline std::vector<double> to_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(key, item));
  return out;
}

}  // namespace detail

// Applies one dotted-key assignment. Unknown keys are errors by contract.
inline void apply_config_key(ExperimentConfig& cfg, const std::string& key,
                             const std::string& value) {
  using detail::to_bool;
  using detail::to_double;
  using detail::to_double_list;
  using detail::to_long;
  if (key == "link.n_interferers") cfg.link.n_interferers = to_long(key, value);
  else if (key == "link.interferer_mean_inr_db") cfg.link.interferer_mean_inr_db = to_double_list(key, value);
  else if (key == "link.desired_mean_snr_db") cfg.link.desired_mean_snr_db = to_double(key, value);
  else if (key == "link.noise_power") cfg.link.noise_power = to_double(key, value);
  else if (key == "link.n_samples") cfg.link.n_samples = to_long(key, value);
  else if (key == "link.coherence_block_len") cfg.link.coherence_block_len = to_long(key, value);
  else if (key == "link.block_len_model") {
    if (value == "fixed") cfg.link.block_len_model = chan::BlockLenModel::fixed;
    else if (value == "geometric") cfg.link.block_len_model = chan::BlockLenModel::geometric;
    else throw std::invalid_argument("config: link.block_len_model must be fixed|geometric");
  } else if (key == "link.per_interferer_block_len") {
    cfg.link.per_interferer_block_len.clear();
    for (const auto& item : detail::split_list(value))
      cfg.link.per_interferer_block_len.push_back(to_long(key, item));
  } else if (key == "link.faded_desired") cfg.link.faded_desired = to_bool(key, value);
  else if (key == "link.rng_seed") cfg.link.rng_seed = static_cast<std::uint64_t>(to_long(key, value));
  else if (key == "split.train_fraction") cfg.split.train_fraction = to_double(key, value);
  else if (key == "sift.sd_threshold") cfg.sift.sd_threshold = to_double(key, value);
  else if (key == "sift.max_sift_iters") cfg.sift.max_sift_iters = to_long(key, value);
  else if (key == "sift.max_imfs") cfg.sift.max_imfs = to_long(key, value);
  else if (key == "arima.p") cfg.arima.p = to_long(key, value);
  else if (key == "arima.d") cfg.arima.d = to_long(key, value);
  else if (key == "arima.q") cfg.arima.q = to_long(key, value);
  else if (key == "arima.window") cfg.arima.window = to_long(key, value);
  else if (key == "rnn.layers") cfg.rnn.layers = static_cast<int>(to_long(key, value));
  else if (key == "rnn.units") cfg.rnn.units = static_cast<int>(to_long(key, value));
  else if (key == "rnn.epochs") cfg.rnn.epochs = static_cast<int>(to_long(key, value));
  else if (key == "rnn.window") cfg.rnn.window = static_cast<int>(to_long(key, value));
  else if (key == "rnn.batch_size") cfg.rnn.batch_size = static_cast<int>(to_long(key, value));
  else if (key == "rnn.learning_rate") cfg.rnn.learning_rate = to_double(key, value);
  else if (key == "rnn.beta1") cfg.rnn.beta1 = to_double(key, value);
  else if (key == "rnn.beta2") cfg.rnn.beta2 = to_double(key, value);
  else if (key == "rnn.adam_eps") cfg.rnn.adam_eps = to_double(key, value);
  else if (key == "rnn.activation") {
    if (value == "relu") cfg.rnn.activation = forecast::RecurrentSpec::Activation::relu;
    else if (value == "tanh") cfg.rnn.activation = forecast::RecurrentSpec::Activation::tanh;
    else throw std::invalid_argument("config: rnn.activation must be relu|tanh");
  } else if (key == "rnn.refit_steps") cfg.rnn.refit_steps = static_cast<int>(to_long(key, value));
  else if (key == "rnn.refit_batch") cfg.rnn.refit_batch = static_cast<int>(to_long(key, value));
  else if (key == "rnn.refit_learning_rate") cfg.rnn.refit_learning_rate = to_double(key, value);
  else if (key == "iir.alpha") cfg.iir.alpha = to_double(key, value);
  else if (key == "iir.init_estimate") cfg.iir.init_estimate = to_double(key, value);
  else if (key == "iir.literal_indexing") cfg.iir.literal_indexing = to_bool(key, value);
  else if (key == "payload_bits") cfg.payload_bits = to_long(key, value);
  else if (key == "target_eps_list") cfg.target_eps_list = to_double_list(key, value);
  else if (key == "n_seeds") cfg.n_seeds = to_long(key, value);
  else if (key == "methods") {
    cfg.methods.clear();
    for (const auto& item : detail::split_list(value))
      cfg.methods.push_back(forecast::method_from_name(item));
  } else if (key == "integer_R") cfg.integer_R = to_bool(key, value);
  else if (key == "output_dir") cfg.output_dir = value;
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

// Parses flat dotted-key text: `key = value` lines, '#' comments, blank
// lines ignored. All keys optional; unknown keys raise.
inline ExperimentConfig parse_config_text(const std::string& text,
                                          ExperimentConfig base = ExperimentConfig{}) {
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = detail::trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = detail::trim(s.substr(0, eq));
    std::string value = detail::trim(s.substr(eq + 1));
    apply_config_key(base, key, value);
  }
  return base;
}

// The reference scenario at its literal scale: T=100 samples. Short but
// exactly as tabulated; the default config keeps the same link and raises T.
inline ExperimentConfig table1_preset() {
  ExperimentConfig cfg;
  cfg.link.n_samples = 100;
  return cfg;
}

// Loads a config by file path, or by preset name ("table1_preset",
// "default").
inline ExperimentConfig load_config(const std::string& path_or_preset) {
  if (path_or_preset == "table1_preset") return table1_preset();
  if (path_or_preset == "default" || path_or_preset.empty()) return ExperimentConfig{};
  std::ifstream in(path_or_preset, std::ios::binary);
  if (!in) throw std::runtime_error("config file not found: " + path_or_preset);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

// Canonical dotted-key echo of a config: every key, fixed order, fixed
// number formatting. Used for the manifest and the config hash.
inline std::string config_echo(const ExperimentConfig& cfg) {
  std::ostringstream os;
  auto num = [](double v) { return csv::fmt(v); };
  auto list = [&](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
    return s;
  };
  os << "link.n_interferers=" << cfg.link.n_interferers << '\n';
  os << "link.interferer_mean_inr_db=" << list(cfg.link.interferer_mean_inr_db) << '\n';
  os << "link.desired_mean_snr_db=" << num(cfg.link.desired_mean_snr_db) << '\n';
  os << "link.noise_power=" << num(cfg.link.noise_power) << '\n';
  os << "link.n_samples=" << cfg.link.n_samples << '\n';
  os << "link.coherence_block_len=" << cfg.link.coherence_block_len << '\n';
  os << "link.block_len_model="
     << (cfg.link.block_len_model == chan::BlockLenModel::fixed ? "fixed" : "geometric") << '\n';
  os << "link.per_interferer_block_len=";
  for (std::size_t i = 0; i < cfg.link.per_interferer_block_len.size(); ++i)
    os << (i ? "," : "") << cfg.link.per_interferer_block_len[i];
  os << '\n';
  os << "link.faded_desired=" << (cfg.link.faded_desired ? "true" : "false") << '\n';
  os << "link.rng_seed=" << cfg.link.rng_seed << '\n';
  os << "split.train_fraction=" << num(cfg.split.train_fraction) << '\n';
  os << "sift.sd_threshold=" << num(cfg.sift.sd_threshold) << '\n';
  os << "sift.max_sift_iters=" << cfg.sift.max_sift_iters << '\n';
  os << "sift.max_imfs=" << cfg.sift.max_imfs << '\n';
  os << "arima.p=" << cfg.arima.p << '\n';
  os << "arima.d=" << cfg.arima.d << '\n';
  os << "arima.q=" << cfg.arima.q << '\n';
  os << "arima.window=" << cfg.arima.window << '\n';
  os << "rnn.layers=" << cfg.rnn.layers << '\n';
  os << "rnn.units=" << cfg.rnn.units << '\n';
  os << "rnn.epochs=" << cfg.rnn.epochs << '\n';
  os << "rnn.window=" << cfg.rnn.window << '\n';
  os << "rnn.batch_size=" << cfg.rnn.batch_size << '\n';
  os << "rnn.learning_rate=" << num(cfg.rnn.learning_rate) << '\n';
  os << "rnn.beta1=" << num(cfg.rnn.beta1) << '\n';
  os << "rnn.beta2=" << num(cfg.rnn.beta2) << '\n';
  os << "rnn.adam_eps=" << num(cfg.rnn.adam_eps) << '\n';
  os << "rnn.activation="
     << (cfg.rnn.activation == forecast::RecurrentSpec::Activation::relu ? "relu" : "tanh")
     << '\n';
  os << "rnn.refit_steps=" << cfg.rnn.refit_steps << '\n';
  os << "rnn.refit_batch=" << cfg.rnn.refit_batch << '\n';
  os << "rnn.refit_learning_rate=" << num(cfg.rnn.refit_learning_rate) << '\n';
  os << "iir.alpha=" << num(cfg.iir.alpha) << '\n';
  os << "iir.init_estimate="
     << (std::isnan(cfg.iir.init_estimate) ? std::string("nan") : num(cfg.iir.init_estimate))
     << '\n';
  os << "iir.literal_indexing=" << (cfg.iir.literal_indexing ? "true" : "false") << '\n';
  os << "payload_bits=" << cfg.payload_bits << '\n';
  os << "target_eps_list=" << list(cfg.target_eps_list) << '\n';
  os << "n_seeds=" << cfg.n_seeds << '\n';
  os << "methods=";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i)
    os << (i ? "," : "") << forecast::method_name(cfg.methods[i]);
  os << '\n';
  os << "integer_R=" << (cfg.integer_R ? "true" : "false") << '\n';
  os << "output_dir=" << cfg.output_dir << '\n';
  return os.str();
}

}  // namespace emdra::harness
