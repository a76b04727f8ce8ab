#include "nn/matrix.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "common/error.h"

namespace preply::nn {

Matrix::Matrix(std::size_t rows, std::size_t cols, Vector data)
    : rows_(rows), cols_(cols), data_(data.begin(), data.end()) {
  require(data_.size() == rows * cols, ErrorCode::kShapeMismatch,
          "Matrix: data size " + std::to_string(data_.size()) + " != " +
              std::to_string(rows) + "x" + std::to_string(cols));
}

Matrix Matrix::column(std::span<const double> values) {
  return Matrix(values.size(), 1, Vector(values.begin(), values.end()));
}

void Matrix::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

double Matrix::squared_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return s;
}

}  // namespace preply::nn
