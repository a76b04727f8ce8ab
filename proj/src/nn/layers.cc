#include "nn/layers.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "common/error.h"

namespace preply::nn {

Parameter::Parameter(std::string name, Matrix value)
    : name(std::move(name)),
      value(std::move(value)),
      grad(this->value.rows(), this->value.cols()) {}

Matrix init_uniform(Rng& rng, std::size_t rows, std::size_t cols, double scale) {
  require(scale > 0.0, ErrorCode::kInvalidArgument, "init_uniform: scale must be > 0");
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.uniform(-scale, scale);
  return m;
}

LstmParams::LstmParams(std::string prefix, std::size_t input_dim,
                       std::size_t hidden_dim, Rng& rng, double scale)
    : input_dim(input_dim),
      hidden_dim(hidden_dim),
      W(prefix + ".W", init_uniform(rng, 4 * hidden_dim, input_dim, scale)),
      U(prefix + ".U", init_uniform(rng, 4 * hidden_dim, hidden_dim, scale)),
      b(prefix + ".b", init_uniform(rng, 4 * hidden_dim, 1, scale)) {}

EmbeddingTable::EmbeddingTable(std::string name, std::size_t vocab_size,
                               std::size_t dim, Rng& rng, double scale)
    : table(std::move(name), init_uniform(rng, vocab_size, dim, scale)) {}

Dense::Dense(std::string prefix, std::size_t in_dim, std::size_t out_dim, Rng& rng,
             double scale)
    : W(prefix + ".W", init_uniform(rng, out_dim, in_dim, scale)),
      b(prefix + ".b", init_uniform(rng, out_dim, 1, scale)) {}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::pair<Vector, Vector> lstm_step(const LstmParams& p, std::span<const double> x,
                                    std::span<const double> h,
                                    std::span<const double> c) {
  const std::size_t H = p.hidden_dim;
  require(x.size() == p.input_dim && h.size() == H && c.size() == H,
          ErrorCode::kShapeMismatch,
          "lstm_step: expected x[" + std::to_string(p.input_dim) + "], h/c[" +
              std::to_string(H) + "]");
  Matrix xm = Matrix::column(x);
  Matrix hc(2 * H, 1);
  std::copy(h.begin(), h.end(), hc.data().begin());
  std::copy(c.begin(), c.end(), hc.data().begin() + H);
  Matrix out;
  lstm_forward(p.W.value, p.U.value, p.b.value, xm, hc, {}, out, nullptr);
  Vector h_out(out.data().begin(), out.data().begin() + H);
  Vector c_out(out.data().begin() + H, out.data().end());
  return {std::move(h_out), std::move(c_out)};
}

Vector affine(const Matrix& W, std::span<const double> b, std::span<const double> x) {
  require(W.cols() == x.size() && W.rows() == b.size(), ErrorCode::kShapeMismatch,
          "affine: W is " + std::to_string(W.rows()) + "x" + std::to_string(W.cols()) +
              ", b[" + std::to_string(b.size()) + "], x[" + std::to_string(x.size()) +
              "]");
  Vector out(b.begin(), b.end());
  for (std::size_t r = 0; r < W.rows(); ++r) {
    auto row = W.row(r);
    double acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) acc += row[k] * x[k];
    out[r] += acc;
  }
  return out;
}

Vector softmax(std::span<const double> z) {
  require(!z.empty(), ErrorCode::kInvalidArgument, "softmax: empty input");
  const double mx = *std::max_element(z.begin(), z.end());
  Vector out(z.size());
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = std::exp(z[i] - mx);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

Vector log_softmax(std::span<const double> z) {
  require(!z.empty(), ErrorCode::kInvalidArgument, "log_softmax: empty input");
  const double mx = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (double v : z) total += std::exp(v - mx);
  const double log_norm = mx + std::log(total);
  Vector out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] - log_norm;
  return out;
}

double bce_loss(double p, int y) {
  const double q = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
  return y != 0 ? -std::log(q) : -std::log(1.0 - q);
}

double xent_loss(std::span<const double> probs, std::size_t target) {
  require(target < probs.size(), ErrorCode::kInvalidArgument,
          "xent_loss: target " + std::to_string(target) + " out of range " +
              std::to_string(probs.size()));
  return -std::log(std::max(probs[target], kProbClamp));
}

Vector dropout_mask(Rng& rng, std::size_t len, double p) {
  require(p >= 0.0 && p < 1.0, ErrorCode::kInvalidArgument,
          "dropout_mask: p must be in [0, 1)");
  Vector mask(len, 1.0);
  if (p == 0.0) return mask;
  const double keep_scale = 1.0 / (1.0 - p);
  for (double& m : mask) m = rng.uniform() < p ? 0.0 : keep_scale;
  return mask;
}

double global_grad_norm(std::span<Parameter* const> params) {
  double sq = 0.0;
  for (const Parameter* p : params) sq += p->grad.squared_norm();
  return std::sqrt(sq);
}

void zero_grads(std::span<Parameter* const> params) {
  for (Parameter* p : params) p->zero_grad();
}

double sgd_step(std::span<Parameter* const> params, double lr, double clip) {
  require(lr > 0.0, ErrorCode::kInvalidArgument, "sgd_step: lr must be > 0");
  const double norm = global_grad_norm(params);
  double step = lr;
  if (clip > 0.0 && norm > clip) step *= clip / norm;
  for (Parameter* p : params) {
    auto v = p->value.data();
    auto g = p->grad.data();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= step * g[i];
  }
  return norm;
}

Adam::Adam(std::span<Parameter* const> params, Options opts)
    : params_(params.begin(), params.end()), opts_(opts) {
  require(opts.lr > 0.0, ErrorCode::kInvalidArgument, "Adam: lr must be > 0");
  for (const Parameter* p : params_) {
    m_.emplace_back(p->value.size(), 0.0);
    v_.emplace_back(p->value.size(), 0.0);
  }
}

double Adam::step() {
  const double norm = global_grad_norm(params_);
  const double scale = opts_.clip > 0.0 && norm > opts_.clip ? opts_.clip / norm : 1.0;
  ++t_;
  const double c1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    auto w = params_[k]->value.data();
    auto g = params_[k]->grad.data();
    Vector& m = m_[k];
    Vector& v = v_[k];
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gi = g[i] * scale;
      m[i] = opts_.beta1 * m[i] + (1.0 - opts_.beta1) * gi;
      v[i] = opts_.beta2 * v[i] + (1.0 - opts_.beta2) * gi * gi;
      w[i] -= opts_.lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + opts_.eps);
    }
  }
  return norm;
}

// ---------------------------------------------------------------------------

void lstm_forward(const Matrix& W, const Matrix& U, const Matrix& b, const Matrix& x,
                  const Matrix& hc_prev, std::span<const double> mask, Matrix& hc_out,
                  LstmCache* cache) {
  const std::size_t H = U.cols();
  const std::size_t B = x.cols();
  require(W.rows() == 4 * H && U.rows() == 4 * H && b.rows() == 4 * H &&
              b.cols() == 1 && W.cols() == x.rows() && hc_prev.rows() == 2 * H &&
              hc_prev.cols() == B && (mask.empty() || mask.size() == B),
          ErrorCode::kShapeMismatch, "lstm_forward: inconsistent shapes");

  Matrix pre(4 * H, B);
  auto pre_m = pre.map();
  pre_m.noalias() = W.map() * x.map();
  pre_m.noalias() += U.map() * hc_prev.map().topRows(H);
  for (std::size_t r = 0; r < 4 * H; ++r) {
    const double bias = b[r];
    double* row = pre.row(r).data();
    for (std::size_t j = 0; j < B; ++j) {
      const double z = row[j] + bias;
      row[j] = (r >= 2 * H && r < 3 * H) ? std::tanh(z) : sigmoid(z);
    }
  }

  hc_out = Matrix(2 * H, B);
  Matrix tanh_c(H, B);
  for (std::size_t k = 0; k < H; ++k) {
    const double* gi = pre.row(k).data();
    const double* gf = pre.row(H + k).data();
    const double* gg = pre.row(2 * H + k).data();
    const double* go = pre.row(3 * H + k).data();
    const double* c_prev = hc_prev.row(H + k).data();
    const double* h_prev = hc_prev.row(k).data();
    double* h_new = hc_out.row(k).data();
    double* c_new = hc_out.row(H + k).data();
    double* tc = tanh_c.row(k).data();
    for (std::size_t j = 0; j < B; ++j) {
      const double c = gf[j] * c_prev[j] + gi[j] * gg[j];
      tc[j] = std::tanh(c);
      if (mask.empty() || mask[j] != 0.0) {
        c_new[j] = c;
        h_new[j] = go[j] * tc[j];
      } else {
        c_new[j] = c_prev[j];
        h_new[j] = h_prev[j];
      }
    }
  }
  if (cache != nullptr) {
    cache->gates = std::move(pre);
    cache->tanh_c = std::move(tanh_c);
  }
}

void lstm_backward(const Matrix& W, const Matrix& U, const Matrix& x,
                   const Matrix& hc_prev, std::span<const double> mask,
                   const LstmCache& cache, const Matrix& d_hc_out, Matrix* dW,
                   Matrix* dU, Matrix* db, Matrix* dx, Matrix* d_hc_prev) {
  const std::size_t H = U.cols();
  const std::size_t B = x.cols();
  const Matrix& gates = cache.gates;

  Matrix d_pre(4 * H, B);
  Matrix d_c_prev(H, B);
  for (std::size_t k = 0; k < H; ++k) {
    const double* gi = gates.row(k).data();
    const double* gf = gates.row(H + k).data();
    const double* gg = gates.row(2 * H + k).data();
    const double* go = gates.row(3 * H + k).data();
    const double* tc = cache.tanh_c.row(k).data();
    const double* c_prev = hc_prev.row(H + k).data();
    const double* dh = d_hc_out.row(k).data();
    const double* dc_in = d_hc_out.row(H + k).data();
    double* di = d_pre.row(k).data();
    double* df = d_pre.row(H + k).data();
    double* dg = d_pre.row(2 * H + k).data();
    double* dout = d_pre.row(3 * H + k).data();
    double* dcp = d_c_prev.row(k).data();
    for (std::size_t j = 0; j < B; ++j) {
      if (!mask.empty() && mask[j] == 0.0) continue;  // handled as pass-through
      const double dc = dc_in[j] + dh[j] * go[j] * (1.0 - tc[j] * tc[j]);
      const double d_o = dh[j] * tc[j];
      const double d_i = dc * gg[j];
      const double d_g = dc * gi[j];
      const double d_f = dc * c_prev[j];
      dcp[j] = dc * gf[j];
      di[j] = d_i * gi[j] * (1.0 - gi[j]);
      df[j] = d_f * gf[j] * (1.0 - gf[j]);
      dg[j] = d_g * (1.0 - gg[j] * gg[j]);
      dout[j] = d_o * go[j] * (1.0 - go[j]);
    }
  }

  const auto dp = d_pre.map();
  if (dW != nullptr) dW->map().noalias() += dp * x.map().transpose();
  if (dU != nullptr) dU->map().noalias() += dp * hc_prev.map().topRows(H).transpose();
  if (db != nullptr) db->map().col(0) += dp.rowwise().sum();
  if (dx != nullptr) dx->map().noalias() += W.map().transpose() * dp;
  if (d_hc_prev != nullptr) {
    auto out = d_hc_prev->map();
    out.topRows(H).noalias() += U.map().transpose() * dp;
    out.bottomRows(H) += d_c_prev.map();
    if (!mask.empty()) {
      for (std::size_t j = 0; j < B; ++j) {
        if (mask[j] != 0.0) continue;
        for (std::size_t r = 0; r < 2 * H; ++r) (*d_hc_prev)(r, j) += d_hc_out(r, j);
      }
    }
  }
}

}  // namespace preply::nn
