#include "nn/tape.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>

#include "common/error.h"

namespace preply::nn {

namespace {

void check_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  require(a.same_shape(b), ErrorCode::kShapeMismatch,
          std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
              std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
              std::to_string(b.cols()));
}

}  // namespace

Tape::Var Tape::push(Matrix value, bool requires_grad,
                     std::function<void(Tape&, std::size_t)> backward) {
  Node node;
  node.value = std::move(value);
  node.requires_grad = requires_grad;
  if (requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{nodes_.size() - 1};
}

void Tape::check(Var v) const {
  require(v.id < nodes_.size(), ErrorCode::kState, "Tape: variable not on this tape");
}

const Matrix& Tape::val(std::size_t id) const {
  const Node& n = nodes_[id];
  return n.ext_value != nullptr ? *n.ext_value : n.value;
}

Matrix& Tape::grad(std::size_t id) {
  Node& n = nodes_[id];
  if (n.ext_grad != nullptr) return *n.ext_grad;
  if (n.grad.empty() && !n.value.empty()) {
    n.grad = Matrix(n.value.rows(), n.value.cols());
  }
  return n.grad;
}

const Matrix& Tape::value(Var v) const {
  check(v);
  return val(v.id);
}

double Tape::scalar(Var v) const {
  const Matrix& m = value(v);
  require(m.rows() == 1 && m.cols() == 1, ErrorCode::kShapeMismatch,
          "Tape::scalar: value is not 1x1");
  return m[0];
}

Tape::Var Tape::input(Matrix value) { return push(std::move(value), false, nullptr); }

Tape::Var Tape::param(Parameter& p) {
  Node node;
  node.ext_value = &p.value;
  node.ext_grad = &p.grad;
  node.requires_grad = true;
  nodes_.push_back(std::move(node));
  return Var{nodes_.size() - 1};
}

Tape::Var Tape::matmul(Var a, Var b) {
  check(a);
  check(b);
  const Matrix& A = val(a.id);
  const Matrix& B = val(b.id);
  require(A.cols() == B.rows(), ErrorCode::kShapeMismatch, "matmul: inner dims differ");
  Matrix out(A.rows(), B.cols());
  out.map().noalias() = A.map() * B.map();
  const bool rg = needs(a.id) || needs(b.id);
  return push(std::move(out), rg, [a, b](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    if (t.needs(a.id)) t.grad(a.id).map().noalias() += g.map() * t.val(b.id).map().transpose();
    if (t.needs(b.id)) t.grad(b.id).map().noalias() += t.val(a.id).map().transpose() * g.map();
  });
}

Tape::Var Tape::add(Var a, Var b) {
  check(a);
  check(b);
  const Matrix& A = val(a.id);
  const Matrix& B = val(b.id);
  check_same_shape(A, B, "add");
  Matrix out = A;
  out.map() += B.map();
  const bool rg = needs(a.id) || needs(b.id);
  return push(std::move(out), rg, [a, b](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    if (t.needs(a.id)) t.grad(a.id).map() += g.map();
    if (t.needs(b.id)) t.grad(b.id).map() += g.map();
  });
}

Tape::Var Tape::add_bias(Var a, Var bias) {
  check(a);
  check(bias);
  const Matrix& A = val(a.id);
  const Matrix& b = val(bias.id);
  require(b.cols() == 1 && b.rows() == A.rows(), ErrorCode::kShapeMismatch,
          "add_bias: bias must be rows x 1");
  Matrix out = A;
  out.map().colwise() += b.map().col(0);
  const bool rg = needs(a.id) || needs(bias.id);
  return push(std::move(out), rg, [a, bias](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    if (t.needs(a.id)) t.grad(a.id).map() += g.map();
    if (t.needs(bias.id)) t.grad(bias.id).map().col(0) += g.map().rowwise().sum();
  });
}

Tape::Var Tape::sigmoid(Var a) {
  check(a);
  Matrix out = val(a.id);
  for (double& v : out.data()) v = nn::sigmoid(v);
  return push(std::move(out), needs(a.id), [a](Tape& t, std::size_t self) {
    const auto y = t.val(self).data();
    const auto g = t.grad(self).data();
    auto ga = t.grad(a.id).data();
    for (std::size_t i = 0; i < y.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

Tape::Var Tape::tanh(Var a) {
  check(a);
  Matrix out = val(a.id);
  for (double& v : out.data()) v = std::tanh(v);
  return push(std::move(out), needs(a.id), [a](Tape& t, std::size_t self) {
    const auto y = t.val(self).data();
    const auto g = t.grad(self).data();
    auto ga = t.grad(a.id).data();
    for (std::size_t i = 0; i < y.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
  });
}

Tape::Var Tape::softmax(Var a) {
  check(a);
  const Matrix& A = val(a.id);
  Matrix out(A.rows(), A.cols());
  Vector column(A.rows());
  for (std::size_t j = 0; j < A.cols(); ++j) {
    for (std::size_t r = 0; r < A.rows(); ++r) column[r] = A(r, j);
    Vector p = nn::softmax(column);
    for (std::size_t r = 0; r < A.rows(); ++r) out(r, j) = p[r];
  }
  return push(std::move(out), needs(a.id), [a](Tape& t, std::size_t self) {
    const Matrix& y = t.val(self);
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad(a.id);
    for (std::size_t j = 0; j < y.cols(); ++j) {
      double dot = 0.0;
      for (std::size_t r = 0; r < y.rows(); ++r) dot += g(r, j) * y(r, j);
      for (std::size_t r = 0; r < y.rows(); ++r) ga(r, j) += y(r, j) * (g(r, j) - dot);
    }
  });
}

Tape::Var Tape::mul_const(Var a, Matrix factor) {
  check(a);
  const Matrix& A = val(a.id);
  check_same_shape(A, factor, "mul_const");
  Matrix out = A;
  out.map().array() *= factor.map().array();
  return push(std::move(out), needs(a.id),
              [a, f = std::move(factor)](Tape& t, std::size_t self) {
                t.grad(a.id).map().array() += t.grad(self).map().array() * f.map().array();
              });
}

Tape::Var Tape::lookup(Parameter& table, std::span<const int> ids) {
  const Matrix& T = table.value;
  const std::size_t dim = T.cols();
  Matrix out(dim, ids.size());
  std::vector<int> idv(ids.begin(), ids.end());
  for (std::size_t j = 0; j < idv.size(); ++j) {
    require(idv[j] >= 0 && static_cast<std::size_t>(idv[j]) < T.rows(),
            ErrorCode::kInvalidArgument,
            "lookup: id " + std::to_string(idv[j]) + " out of range");
    auto row = T.row(static_cast<std::size_t>(idv[j]));
    for (std::size_t k = 0; k < dim; ++k) out(k, j) = row[k];
  }
  Matrix* g_table = &table.grad;
  return push(std::move(out), true,
              [g_table, idv = std::move(idv)](Tape& t, std::size_t self) {
                const Matrix& g = t.grad(self);
                for (std::size_t j = 0; j < idv.size(); ++j) {
                  auto row = g_table->row(static_cast<std::size_t>(idv[j]));
                  for (std::size_t k = 0; k < row.size(); ++k) row[k] += g(k, j);
                }
              });
}

Tape::Var Tape::lstm(Var W, Var U, Var b, Var x, Var hc, std::vector<double> mask) {
  for (Var v : {W, U, b, x, hc}) check(v);
  auto cache = std::make_shared<LstmCache>();
  Matrix out;
  lstm_forward(val(W.id), val(U.id), val(b.id), val(x.id), val(hc.id), mask, out,
               cache.get());
  const bool rg =
      needs(W.id) || needs(U.id) || needs(b.id) || needs(x.id) || needs(hc.id);
  return push(std::move(out), rg,
              [W, U, b, x, hc, cache, mask = std::move(mask)](Tape& t, std::size_t self) {
                lstm_backward(t.val(W.id), t.val(U.id), t.val(x.id), t.val(hc.id), mask,
                              *cache, t.grad(self),
                              t.needs(W.id) ? &t.grad(W.id) : nullptr,
                              t.needs(U.id) ? &t.grad(U.id) : nullptr,
                              t.needs(b.id) ? &t.grad(b.id) : nullptr,
                              t.needs(x.id) ? &t.grad(x.id) : nullptr,
                              t.needs(hc.id) ? &t.grad(hc.id) : nullptr);
              });
}

Tape::Var Tape::top_rows(Var a, std::size_t n) {
  check(a);
  const Matrix& A = val(a.id);
  require(n <= A.rows(), ErrorCode::kShapeMismatch, "top_rows: n exceeds rows");
  Matrix out(n, A.cols());
  out.map() = A.map().topRows(n);
  return push(std::move(out), needs(a.id), [a, n](Tape& t, std::size_t self) {
    t.grad(a.id).map().topRows(n) += t.grad(self).map();
  });
}

Tape::Var Tape::concat_cols(std::span<const Var> parts) {
  require(!parts.empty(), ErrorCode::kInvalidArgument, "concat_cols: no inputs");
  std::vector<Var> ids(parts.begin(), parts.end());
  const std::size_t rows = val(ids[0].id).rows();
  std::size_t cols = 0;
  bool rg = false;
  for (Var v : ids) {
    check(v);
    require(val(v.id).rows() == rows, ErrorCode::kShapeMismatch,
            "concat_cols: row counts differ");
    cols += val(v.id).cols();
    rg = rg || needs(v.id);
  }
  Matrix out(rows, cols);
  std::size_t offset = 0;
  for (Var v : ids) {
    const Matrix& part = val(v.id);
    out.map().middleCols(offset, part.cols()) = part.map();
    offset += part.cols();
  }
  return push(std::move(out), rg, [ids = std::move(ids)](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    std::size_t off = 0;
    for (Var v : ids) {
      const std::size_t c = t.val(v.id).cols();
      if (t.needs(v.id)) t.grad(v.id).map() += g.map().middleCols(off, c);
      off += c;
    }
  });
}

Tape::Var Tape::softmax_xent(Var logits, std::vector<int> targets, double scale) {
  check(logits);
  const Matrix& Z = val(logits.id);
  require(targets.size() == Z.cols(), ErrorCode::kShapeMismatch,
          "softmax_xent: one target per column required");
  auto probs = std::make_shared<Matrix>(Z.rows(), Z.cols());
  double loss = 0.0;
  Vector column(Z.rows());
  for (std::size_t j = 0; j < Z.cols(); ++j) {
    if (targets[j] < 0) continue;
    require(static_cast<std::size_t>(targets[j]) < Z.rows(), ErrorCode::kInvalidArgument,
            "softmax_xent: target out of range");
    for (std::size_t r = 0; r < Z.rows(); ++r) column[r] = Z(r, j);
    Vector lp = log_softmax(column);
    loss -= lp[static_cast<std::size_t>(targets[j])];
    for (std::size_t r = 0; r < Z.rows(); ++r) (*probs)(r, j) = std::exp(lp[r]);
  }
  Matrix out(1, 1, loss * scale);
  return push(std::move(out), needs(logits.id),
              [logits, probs, scale, targets = std::move(targets)](Tape& t,
                                                                   std::size_t self) {
                const double g = t.grad(self)[0] * scale;
                Matrix& gz = t.grad(logits.id);
                for (std::size_t j = 0; j < targets.size(); ++j) {
                  if (targets[j] < 0) continue;
                  for (std::size_t r = 0; r < gz.rows(); ++r) {
                    gz(r, j) += g * (*probs)(r, j);
                  }
                  gz(static_cast<std::size_t>(targets[j]), j) -= g;
                }
              });
}

Tape::Var Tape::sigmoid_bce(Var logits, std::vector<double> labels, double scale) {
  check(logits);
  const Matrix& Z = val(logits.id);
  require(Z.rows() == 1 && labels.size() == Z.cols(), ErrorCode::kShapeMismatch,
          "sigmoid_bce: expected 1 x B logits and B labels");
  double loss = 0.0;
  for (std::size_t j = 0; j < Z.cols(); ++j) {
    // log(1 + e^z) - y z, written to stay finite for large |z|.
    const double z = Z[j];
    loss += std::max(z, 0.0) - labels[j] * z + std::log1p(std::exp(-std::abs(z)));
  }
  Matrix out(1, 1, loss * scale);
  return push(std::move(out), needs(logits.id),
              [logits, scale, labels = std::move(labels)](Tape& t, std::size_t self) {
                const double g = t.grad(self)[0] * scale;
                Matrix& gz = t.grad(logits.id);
                const Matrix& z = t.val(logits.id);
                for (std::size_t j = 0; j < labels.size(); ++j) {
                  gz[j] += g * (nn::sigmoid(z[j]) - labels[j]);
                }
              });
}

Tape::Var Tape::xent(Var probs, std::vector<int> targets, double scale) {
  check(probs);
  const Matrix& P = val(probs.id);
  require(targets.size() == P.cols(), ErrorCode::kShapeMismatch,
          "xent: one target per column required");
  double loss = 0.0;
  for (std::size_t j = 0; j < P.cols(); ++j) {
    if (targets[j] < 0) continue;
    require(static_cast<std::size_t>(targets[j]) < P.rows(), ErrorCode::kInvalidArgument,
            "xent: target out of range");
    loss -= std::log(std::max(P(static_cast<std::size_t>(targets[j]), j), kProbClamp));
  }
  Matrix out(1, 1, loss * scale);
  return push(std::move(out), needs(probs.id),
              [probs, scale, targets = std::move(targets)](Tape& t, std::size_t self) {
                const double g = t.grad(self)[0] * scale;
                const Matrix& p = t.val(probs.id);
                Matrix& gp = t.grad(probs.id);
                for (std::size_t j = 0; j < targets.size(); ++j) {
                  if (targets[j] < 0) continue;
                  const auto r = static_cast<std::size_t>(targets[j]);
                  if (p(r, j) > kProbClamp) gp(r, j) -= g / p(r, j);
                }
              });
}

Tape::Var Tape::bce(Var probs, std::vector<double> labels, double scale) {
  check(probs);
  const Matrix& P = val(probs.id);
  require(P.rows() == 1 && labels.size() == P.cols(), ErrorCode::kShapeMismatch,
          "bce: expected 1 x B probabilities and B labels");
  double loss = 0.0;
  for (std::size_t j = 0; j < P.cols(); ++j) {
    const double q = std::clamp(P[j], kProbClamp, 1.0 - kProbClamp);
    loss -= labels[j] * std::log(q) + (1.0 - labels[j]) * std::log(1.0 - q);
  }
  Matrix out(1, 1, loss * scale);
  return push(std::move(out), needs(probs.id),
              [probs, scale, labels = std::move(labels)](Tape& t, std::size_t self) {
                const double g = t.grad(self)[0] * scale;
                const Matrix& p = t.val(probs.id);
                Matrix& gp = t.grad(probs.id);
                for (std::size_t j = 0; j < labels.size(); ++j) {
                  const double q = p[j];
                  if (q <= kProbClamp || q >= 1.0 - kProbClamp) continue;
                  gp[j] += g * (-labels[j] / q + (1.0 - labels[j]) / (1.0 - q));
                }
              });
}

Tape::Var Tape::sum_squares(Var a) {
  check(a);
  Matrix out(1, 1, val(a.id).squared_norm());
  return push(std::move(out), needs(a.id), [a](Tape& t, std::size_t self) {
    const double g = t.grad(self)[0];
    t.grad(a.id).map() += 2.0 * g * t.val(a.id).map();
  });
}

Tape::Var Tape::sum(std::span<const Var> scalars) {
  std::vector<Var> ids(scalars.begin(), scalars.end());
  double total = 0.0;
  bool rg = false;
  for (Var v : ids) {
    total += scalar(v);
    rg = rg || needs(v.id);
  }
  return push(Matrix(1, 1, total), rg, [ids = std::move(ids)](Tape& t, std::size_t self) {
    const double g = t.grad(self)[0];
    for (Var v : ids) {
      if (t.needs(v.id)) t.grad(v.id)[0] += g;
    }
  });
}

void Tape::backward(Var loss) {
  require(!nodes_.empty(), ErrorCode::kState, "backward: nothing recorded on the tape");
  check(loss);
  const Matrix& l = val(loss.id);
  require(l.rows() == 1 && l.cols() == 1, ErrorCode::kShapeMismatch,
          "backward: loss must be a 1x1 scalar");
  if (!needs(loss.id)) return;
  grad(loss.id)[0] += 1.0;
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || !n.backward) continue;
    if (n.ext_grad == nullptr && n.grad.empty()) continue;  // unreachable from loss
    n.backward(*this, i);
  }
}

}  // namespace preply::nn
