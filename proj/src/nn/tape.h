#ifndef PREPLY_NN_TAPE_H_
#define PREPLY_NN_TAPE_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nn/layers.h"
#include "nn/matrix.h"

namespace preply::nn {

// Reverse-mode recorder. Each op computes its value eagerly and registers a
// closure that pushes the output gradient back to its inputs. Parameter
// leaves write straight into Parameter::grad, so a backward() call leaves
// the full gradient in the model. Values are column-batched: one column per
// example.
class Tape {
 public:
  struct Var {
    std::size_t id;
  };

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var input(Matrix value);
  Var param(Parameter& p);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var add_bias(Var a, Var bias);  // bias is rows x 1, broadcast over columns
  Var sigmoid(Var a);
  Var tanh(Var a);
  Var softmax(Var a);  // column-wise
  Var mul_const(Var a, Matrix factor);  // elementwise, e.g. a dropout mask

  // Rows of `table` gathered as columns: dim x ids.size().
  Var lookup(Parameter& table, std::span<const int> ids);
  Var lstm(Var W, Var U, Var b, Var x, Var hc, std::vector<double> mask = {});
  Var top_rows(Var a, std::size_t n);
  Var concat_cols(std::span<const Var> parts);

  // Scalar losses (1 x 1). Columns with a negative target are ignored; the
  // summed loss is multiplied by `scale`.
  Var softmax_xent(Var logits, std::vector<int> targets, double scale);
  Var sigmoid_bce(Var logits, std::vector<double> labels, double scale);
  Var xent(Var probs, std::vector<int> targets, double scale);
  Var bce(Var probs, std::vector<double> labels, double scale);
  Var sum_squares(Var a);
  Var sum(std::span<const Var> scalars);

  const Matrix& value(Var v) const;
  double scalar(Var v) const;

  // Requires a 1 x 1 loss recorded on this tape.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    const Matrix* ext_value = nullptr;
    Matrix* ext_grad = nullptr;
    bool requires_grad = false;
    std::function<void(Tape&, std::size_t)> backward;
  };

  Var push(Matrix value, bool requires_grad,
           std::function<void(Tape&, std::size_t)> backward);
  const Matrix& val(std::size_t id) const;
  Matrix& grad(std::size_t id);
  bool needs(std::size_t id) const { return nodes_[id].requires_grad; }
  void check(Var v) const;

  std::vector<Node> nodes_;
};

}  // namespace preply::nn

#endif  // PREPLY_NN_TAPE_H_
