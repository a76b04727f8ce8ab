#ifndef PREPLY_NN_LAYERS_H_
#define PREPLY_NN_LAYERS_H_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nn/matrix.h"
#include "nn/rng.h"

namespace preply::nn {

inline constexpr double kDefaultInitScale = 0.08;

// A trainable tensor together with its gradient accumulator.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Matrix value);

  void zero_grad() { grad.fill(0.0); }

  std::string name;
  Matrix value;
  Matrix grad;
};

Matrix init_uniform(Rng& rng, std::size_t rows, std::size_t cols,
                    double scale = kDefaultInitScale);

// Gate order in W, U and b is [input, forget, cell, output]; each block is
// hidden_dim rows. Serialized models depend on this order.
struct LstmParams {
  LstmParams() = default;
  LstmParams(std::string prefix, std::size_t input_dim, std::size_t hidden_dim,
             Rng& rng, double scale = kDefaultInitScale);

  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  Parameter W;  // 4H x input_dim
  Parameter U;  // 4H x H
  Parameter b;  // 4H x 1
};

struct EmbeddingTable {
  EmbeddingTable() = default;
  EmbeddingTable(std::string name, std::size_t vocab_size, std::size_t dim, Rng& rng,
                 double scale = kDefaultInitScale);

  std::size_t vocab_size() const { return table.value.rows(); }
  std::size_t dim() const { return table.value.cols(); }

  Parameter table;  // vocab_size x dim
};

struct Dense {
  Dense() = default;
  Dense(std::string prefix, std::size_t in_dim, std::size_t out_dim, Rng& rng,
        double scale = kDefaultInitScale);

  Parameter W;  // out x in
  Parameter b;  // out x 1
};

// Single-example LSTM cell: returns (h', c').
std::pair<Vector, Vector> lstm_step(const LstmParams& p, std::span<const double> x,
                                    std::span<const double> h,
                                    std::span<const double> c);

Vector affine(const Matrix& W, std::span<const double> b, std::span<const double> x);

// Max-subtracted softmax. Input must be non-empty and finite.
Vector softmax(std::span<const double> z);
Vector log_softmax(std::span<const double> z);

double sigmoid(double z);

inline constexpr double kProbClamp = 1e-12;

// Binary log loss on a probability, clamped to [1e-12, 1 - 1e-12].
double bce_loss(double p, int y);
// Negative log of probs[target].
double xent_loss(std::span<const double> probs, std::size_t target);

// Inverted dropout: 0 with probability p, else 1/(1-p).
Vector dropout_mask(Rng& rng, std::size_t len, double p);

inline constexpr double kDefaultClip = 5.0;

// Rescales all gradients jointly when their global L2 norm exceeds `clip`
// (clip <= 0 disables clipping), then applies value -= lr * grad.
// Returns the pre-clipping norm.
double sgd_step(std::span<Parameter* const> params, double lr,
                double clip = kDefaultClip);

double global_grad_norm(std::span<Parameter* const> params);

// Adam with bias correction, applied after the same global-norm clipping as
// sgd_step. Moment buffers are bound to the parameter list given at
// construction; step() must always see that same list.
class Adam {
 public:
  struct Options {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double clip = kDefaultClip;
  };

  Adam(std::span<Parameter* const> params, Options opts);

  // Returns the pre-clipping gradient norm.
  double step();

 private:
  std::vector<Parameter*> params_;
  Options opts_;
  std::vector<Vector> m_;
  std::vector<Vector> v_;
  std::size_t t_ = 0;
};
void zero_grads(std::span<Parameter* const> params);

// ---------------------------------------------------------------------------
// Batched LSTM kernels shared by the tape and by inference. The recurrent
// state is stacked as hc = [h; c] with shape 2H x B. A column whose mask
// entry is 0 carries its previous state through unchanged.

struct LstmCache {
  Matrix gates;   // 4H x B, post-activation
  Matrix tanh_c;  // H x B
};

void lstm_forward(const Matrix& W, const Matrix& U, const Matrix& b, const Matrix& x,
                  const Matrix& hc_prev, std::span<const double> mask, Matrix& hc_out,
                  LstmCache* cache);

// Accumulates into every non-null gradient output.
void lstm_backward(const Matrix& W, const Matrix& U, const Matrix& x,
                   const Matrix& hc_prev, std::span<const double> mask,
                   const LstmCache& cache, const Matrix& d_hc_out, Matrix* dW,
                   Matrix* dU, Matrix* db, Matrix* dx, Matrix* d_hc_prev);

}  // namespace preply::nn

#endif  // PREPLY_NN_LAYERS_H_
