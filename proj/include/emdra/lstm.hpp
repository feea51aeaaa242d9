#pragma once
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "emdra/rng.hpp"

// Compact trainable recurrent predictor: stacked gated (LSTM) layers with a
// linear head, squared-error loss, adaptive-moment optimizer, full
// backpropagation through time. Deterministic for a fixed seed: fixed
// iteration order, seeded shuffles, no data-dependent parallel reductions.
namespace emdra::forecast {

struct RecurrentSpec {
  int layers = 2;
  int units = 100;
  int dense_out = 1;
  int epochs = 100;
  int window = 30;
  int batch_size = 32;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  // Gates stay sigmoid. This is the freely choosable nonlinearity applied to
  // the candidate and the cell output (the stated hidden activation).
  enum class Activation { relu, tanh } activation = Activation::relu;
  // Rolling-forecast refit policy: fine-tune steps per validation step on a
  // batch of the most recent pairs (0 disables refitting). The batch reaches
  // well past the newest samples and the rate stays below the training rate
  // so refits adapt without chasing the newest observations.
  int refit_steps = 5;
  int refit_batch = 128;
  double refit_learning_rate = 1e-4;

  void validate() const {
    if (layers < 1 || units < 1 || dense_out != 1 || epochs < 1 || window < 1 || batch_size < 1)
      throw std::invalid_argument("RecurrentSpec: counts must be >= 1 (dense_out must be 1)");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("RecurrentSpec: learning rate <= 0");
    if (refit_steps < 0 || refit_batch < 1 || !(refit_learning_rate > 0.0))
      throw std::invalid_argument("RecurrentSpec: bad refit policy");
  }
};

struct TrainingDiverged : std::runtime_error {
  int epoch;
  explicit TrainingDiverged(int ep)
      : std::runtime_error("rnn training diverged (non-finite loss) at epoch " + std::to_string(ep)),
        epoch(ep) {}
};

template <class Scalar>
class LstmNet {
 public:
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Arr = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using RowVec = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

  LstmNet(int input_size, const RecurrentSpec& spec, std::uint64_t seed)
      : spec_(spec), in_(input_size) {
    spec.validate();
    rng::Stream s(seed);
    const int H = spec.units;
    for (int l = 0; l < spec.layers; ++l) {
      int rows = (l == 0 ? in_ : H) + H;
      Layer L;
      L.W = init_uniform(s, rows, 4 * H, rows);
      L.b = RowVec::Zero(4 * H);
      L.b.segment(H, H).setConstant(Scalar(1));  // forget-gate bias
      layers_.push_back(std::move(L));
    }
    w_head_ = init_uniform(s, H, 1, H).col(0);
    b_head_ = Scalar(0);
    init_adam();
  }

  int window() const { return spec_.window; }

  // Forward over a batch of sequences; X is (B x T), one scalar input per
  // timestep. Returns the linear head output per row.
  Vec forward(const Mat& X) const {
    const int B = static_cast<int>(X.rows()), T = static_cast<int>(X.cols()), H = spec_.units;
    Mat below;  // (B x T*H) hidden sequence handed to the next layer
    Mat h, c, concat, z;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const auto& L = layers_[l];
      const int din = (l == 0) ? in_ : H;
      h = Mat::Zero(B, H);
      c = Mat::Zero(B, H);
      concat.resize(B, din + H);
      z.resize(B, 4 * H);
      Mat hseq(B, T * H);
      for (int t = 0; t < T; ++t) {
        if (l == 0) concat.leftCols(din) = X.col(t);
        else concat.leftCols(din) = below.middleCols(t * H, H);
        concat.rightCols(H) = h;
        z.noalias() = concat * L.W;
        z.rowwise() += L.b;
        step_cell(z, c, h, nullptr);
        hseq.middleCols(t * H, H) = h;
      }
      below = std::move(hseq);
    }
    return ((h * w_head_).array() + b_head_).matrix();
  }

  // Forward with caches, then full BPTT. Returns the batch-mean squared
  // error; gradients land in the g_* members.
  Scalar compute_gradients(const Mat& X, const Vec& y) {
    const int B = static_cast<int>(X.rows()), T = static_cast<int>(X.cols()), H = spec_.units;
    const std::size_t NL = layers_.size();
    caches_.assign(NL, Cache{});
    for (std::size_t l = 0; l < NL; ++l) {
      const int din = (l == 0) ? in_ : H;
      caches_[l].concat.assign(T, Mat(B, din + H));
      caches_[l].gates.assign(T, Mat(B, 4 * H));
      caches_[l].c.assign(T, Mat(B, H));
      caches_[l].c_act.assign(T, Mat(B, H));
      caches_[l].h.assign(T, Mat(B, H));
    }
    for (std::size_t l = 0; l < NL; ++l) {
      auto& cc = caches_[l];
      const auto& L = layers_[l];
      const int din = (l == 0) ? in_ : H;
      Mat h = Mat::Zero(B, H), c = Mat::Zero(B, H);
      for (int t = 0; t < T; ++t) {
        Mat& concat = cc.concat[t];
        if (l == 0) concat.leftCols(din) = X.col(t);
        else concat.leftCols(din) = caches_[l - 1].h[t];
        concat.rightCols(H) = h;
        Mat& z = cc.gates[t];
        z.noalias() = concat * L.W;
        z.rowwise() += L.b;
        step_cell(z, c, h, &cc.c_act[t]);  // z holds post-activation gates on exit
        cc.c[t] = c;
        cc.h[t] = h;
      }
    }
    const Mat& h_last = caches_[NL - 1].h[T - 1];
    Vec pred = ((h_last * w_head_).array() + b_head_).matrix();
    Vec diff = pred - y;
    Scalar loss = diff.squaredNorm() / Scalar(B);

    zero_grads();
    Vec dpred = diff * (Scalar(2) / Scalar(B));
    g_w_head_.noalias() = h_last.transpose() * dpred;
    g_b_head_ = dpred.sum();
    std::vector<Mat> dh_in(T, Mat::Zero(B, H));  // incoming hidden-output grads per step
    dh_in[T - 1].noalias() = dpred * w_head_.transpose();
    for (std::size_t li = NL; li-- > 0;) {
      auto& cc = caches_[li];
      const auto& L = layers_[li];
      const int din = (li == 0) ? in_ : H;
      Mat dh = Mat::Zero(B, H), dc = Mat::Zero(B, H);
      std::vector<Mat> dh_below;
      if (li > 0) dh_below.assign(T, Mat());
      Mat dz(B, 4 * H);
      for (int t = T - 1; t >= 0; --t) {
        dh += dh_in[t];
        const Mat& z = cc.gates[t];
        auto gi = z.middleCols(0 * H, H).array();
        auto gf = z.middleCols(1 * H, H).array();
        auto gg = z.middleCols(2 * H, H).array();
        auto go = z.middleCols(3 * H, H).array();
        dc.array() += dh.array() * go * act_deriv(cc.c[t], cc.c_act[t]);
        dz.middleCols(0 * H, H).array() = (dc.array() * gg) * gi * (Scalar(1) - gi);
        if (t > 0)
          dz.middleCols(1 * H, H).array() = (dc.array() * cc.c[t - 1].array()) * gf * (Scalar(1) - gf);
        else
          dz.middleCols(1 * H, H).setZero();  // c_prev = 0
        dz.middleCols(2 * H, H).array() = (dc.array() * gi) * post_deriv(gg);
        dz.middleCols(3 * H, H).array() = (dh.array() * cc.c_act[t].array()) * go * (Scalar(1) - go);
        g_layers_[li].W.noalias() += cc.concat[t].transpose() * dz;
        g_layers_[li].b += dz.colwise().sum();
        Mat dconcat = dz * L.W.transpose();
        if (li > 0) dh_below[t] = dconcat.leftCols(din);
        dh = dconcat.rightCols(H);
        dc.array() *= gf;
      }
      if (li > 0) dh_in = std::move(dh_below);
    }
    return loss;
  }

  void adam_step(Scalar lr) {
    ++adam_t_;
    const Scalar b1 = Scalar(spec_.beta1), b2 = Scalar(spec_.beta2), ae = Scalar(spec_.adam_eps);
    const Scalar bc1 = Scalar(1) - std::pow(b1, Scalar(adam_t_));
    const Scalar bc2 = Scalar(1) - std::pow(b2, Scalar(adam_t_));
    auto upd = [&](auto& w, const auto& g, auto& m, auto& v) {
      m = b1 * m + (Scalar(1) - b1) * g;
      v.array() = b2 * v.array() + (Scalar(1) - b2) * g.array().square();
      w.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + ae);
    };
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      upd(layers_[l].W, g_layers_[l].W, m_layers_[l].W, v_layers_[l].W);
      upd(layers_[l].b, g_layers_[l].b, m_layers_[l].b, v_layers_[l].b);
    }
    upd(w_head_, g_w_head_, m_w_head_, v_w_head_);
    m_b_head_ = b1 * m_b_head_ + (Scalar(1) - b1) * g_b_head_;
    v_b_head_ = b2 * v_b_head_ + (Scalar(1) - b2) * g_b_head_ * g_b_head_;
    b_head_ -= lr * (m_b_head_ / bc1) / (std::sqrt(v_b_head_ / bc2) + ae);
  }

  Scalar train_step(const Mat& X, const Vec& y) {
    return train_step(X, y, Scalar(spec_.learning_rate));
  }
  Scalar train_step(const Mat& X, const Vec& y, Scalar lr) {
    Scalar loss = compute_gradients(X, y);
    adam_step(lr);
    return loss;
  }

  // Flat parameter/gradient access (used by the finite-difference check).
  std::vector<Scalar*> parameter_data() {
    std::vector<Scalar*> out;
    for (auto& L : layers_) {
      out.push_back(L.W.data());
      out.push_back(L.b.data());
    }
    out.push_back(w_head_.data());
    out.push_back(&b_head_);
    return out;
  }
  std::vector<const Scalar*> gradient_data() const {
    std::vector<const Scalar*> out;
    for (const auto& G : g_layers_) {
      out.push_back(G.W.data());
      out.push_back(G.b.data());
    }
    out.push_back(g_w_head_.data());
    out.push_back(&g_b_head_);
    return out;
  }
  std::vector<std::ptrdiff_t> parameter_sizes() const {
    std::vector<std::ptrdiff_t> out;
    for (const auto& L : layers_) {
      out.push_back(L.W.size());
      out.push_back(L.b.size());
    }
    out.push_back(w_head_.size());
    out.push_back(1);
    return out;
  }
  std::vector<std::string> parameter_names() const {
    std::vector<std::string> out;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      out.push_back("W" + std::to_string(l));
      out.push_back("b" + std::to_string(l));
    }
    out.push_back("w_head");
    out.push_back("b_head");
    return out;
  }

 private:
  struct Layer {
    Mat W;    // fused (din + H) x 4H, gate order i, f, g, o
    RowVec b;
  };
  struct Cache {
    std::vector<Mat> concat, gates, c, c_act, h;
  };

  static Mat init_uniform(rng::Stream& s, int rows, int cols, int fan_in) {
    Mat W(rows, cols);
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) W(r, c) = Scalar((2.0 * s.uniform() - 1.0) * bound);
    return W;
  }

  // derivative of the hidden activation from pre-activation c / post act(c)
  Arr act_deriv(const Mat& c, const Mat& cact) const {
    if (spec_.activation == RecurrentSpec::Activation::relu)
      return (c.array() > Scalar(0)).template cast<Scalar>();
    return Scalar(1) - cact.array().square();
  }
  // same, recovered from the post-activation value alone (candidate gate)
  template <class A>
  Arr post_deriv(const A& post) const {
    if (spec_.activation == RecurrentSpec::Activation::relu)
      return (post > Scalar(0)).template cast<Scalar>();
    return Scalar(1) - post.square();
  }

  // In-place cell step: z holds pre-activations on entry, post-activation
  // gates on exit; c and h are updated. c_act_out receives act(c) if given.
  void step_cell(Mat& z, Mat& c, Mat& h, Mat* c_act_out) const {
    const int H = spec_.units;
    auto sig = [](auto block) { return ((-block.array()).exp() + Scalar(1)).inverse(); };
    z.middleCols(0 * H, H) = sig(z.middleCols(0 * H, H)).matrix();
    z.middleCols(1 * H, H) = sig(z.middleCols(1 * H, H)).matrix();
    if (spec_.activation == RecurrentSpec::Activation::relu)
      z.middleCols(2 * H, H) = z.middleCols(2 * H, H).array().max(Scalar(0)).matrix();
    else
      z.middleCols(2 * H, H) = z.middleCols(2 * H, H).array().tanh().matrix();
    z.middleCols(3 * H, H) = sig(z.middleCols(3 * H, H)).matrix();
    c.array() = z.middleCols(1 * H, H).array() * c.array() +
                z.middleCols(0 * H, H).array() * z.middleCols(2 * H, H).array();
    Mat ca;
    if (spec_.activation == RecurrentSpec::Activation::relu)
      ca = c.array().max(Scalar(0)).matrix();
    else
      ca = c.array().tanh().matrix();
    h.array() = z.middleCols(3 * H, H).array() * ca.array();
    if (c_act_out) *c_act_out = std::move(ca);
  }

  void init_adam() {
    auto zero_like = [](const Layer& L) {
      Layer Z;
      Z.W = Mat::Zero(L.W.rows(), L.W.cols());
      Z.b = RowVec::Zero(L.b.cols());
      return Z;
    };
    for (const auto& L : layers_) {
      g_layers_.push_back(zero_like(L));
      m_layers_.push_back(zero_like(L));
      v_layers_.push_back(zero_like(L));
    }
    g_w_head_ = m_w_head_ = v_w_head_ = Vec::Zero(w_head_.rows());
    g_b_head_ = m_b_head_ = v_b_head_ = Scalar(0);
  }

  void zero_grads() {
    for (auto& G : g_layers_) {
      G.W.setZero();
      G.b.setZero();
    }
    g_w_head_.setZero();
    g_b_head_ = Scalar(0);
  }

  RecurrentSpec spec_;
  int in_;
  std::vector<Layer> layers_, g_layers_, m_layers_, v_layers_;
  Vec w_head_, g_w_head_, m_w_head_, v_w_head_;
  Scalar b_head_ = 0, g_b_head_ = 0, m_b_head_ = 0, v_b_head_ = 0;
  int adam_t_ = 0;
  std::vector<Cache> caches_;
};

// Min-max normalization fitted on the training region only.
struct NormParams {
  double lo = 0.0, scale = 1.0;
  static NormParams fit(const std::vector<double>& train) {
    NormParams n;
    double lo = train[0], hi = train[0];
    for (double v : train) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    n.lo = lo;
    n.scale = (hi > lo) ? (hi - lo) : 1.0;
    return n;
  }
  double norm(double v) const { return (v - lo) / scale; }
  double denorm(double v) const { return lo + v * scale; }
};

template <class Scalar = float>
struct RnnModel {
  LstmNet<Scalar> net;
  RecurrentSpec spec;
  NormParams norm;
};

// Supervised (window -> next value) training on the min-max-normalized
// series. Deterministic for a fixed seed.
template <class Scalar = float>
RnnModel<Scalar> train_rnn(const std::vector<double>& series, const RecurrentSpec& spec,
                           std::uint64_t seed) {
  spec.validate();
  const long n = static_cast<long>(series.size());
  if (n < spec.window + 1) throw std::invalid_argument("train_rnn: series shorter than window + 1");
  NormParams norm = NormParams::fit(series);
  RnnModel<Scalar> model{LstmNet<Scalar>(1, spec, seed), spec, norm};

  using Mat = typename LstmNet<Scalar>::Mat;
  using Vec = typename LstmNet<Scalar>::Vec;
  const long npairs = n - spec.window;
  std::vector<long> order(npairs);
  std::iota(order.begin(), order.end(), 0L);
  rng::Stream shuffle_stream(rng::derive_stream(seed, 1));
  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    shuffle_stream.shuffle(order);
    for (long start = 0; start < npairs; start += spec.batch_size) {
      const long B = std::min<long>(spec.batch_size, npairs - start);
      Mat X(B, spec.window);
      Vec y(B);
      for (long r = 0; r < B; ++r) {
        const long s0 = order[start + r];
        for (int t = 0; t < spec.window; ++t) X(r, t) = Scalar(norm.norm(series[s0 + t]));
        y(r) = Scalar(norm.norm(series[s0 + spec.window]));
      }
      Scalar loss = model.net.train_step(X, y);
      if (!std::isfinite(static_cast<double>(loss))) throw TrainingDiverged(epoch);
    }
  }
  return model;
}

// One-step prediction from the last `window` observed values.
template <class Scalar>
double predict_one_rnn(const RnnModel<Scalar>& model, const std::vector<double>& history) {
  const int W = model.spec.window;
  if (static_cast<long>(history.size()) < W)
    throw std::invalid_argument("predict_one_rnn: history shorter than window");
  typename LstmNet<Scalar>::Mat X(1, W);
  for (int t = 0; t < W; ++t)
    X(0, t) = Scalar(model.norm.norm(history[history.size() - W + t]));
  return model.norm.denorm(static_cast<double>(model.net.forward(X)(0)));
}

}  // namespace emdra::forecast
