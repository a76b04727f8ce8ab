#ifndef PREPLY_NN_MATRIX_H_
#define PREPLY_NN_MATRIX_H_

#include <cstddef>
#include <new>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace preply::nn {

using Vector = std::vector<double>;

// Eigen peels unaligned leading elements off its vectorized reductions, so
// the rounding of a sum depends on where the buffer starts. Pinning every
// buffer to a cache line makes results bit-identical across runs.
template <typename T>
struct CacheAligned {
  using value_type = T;
  static constexpr std::align_val_t kAlign{64};

  CacheAligned() = default;
  template <typename U>
  CacheAligned(const CacheAligned<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), kAlign));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, kAlign); }

  template <typename U>
  bool operator==(const CacheAligned<U>&) const noexcept {
    return true;
  }
};

using AlignedVector = std::vector<double, CacheAligned<double>>;

using EigenRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<EigenRowMajor>;
using ConstMatrixMap = Eigen::Map<const EigenRowMajor>;

// Dense row-major matrix of doubles. Eigen is only used as a view for the
// heavy products.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, Vector data);

  static Matrix column(std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  MatrixMap map() { return MatrixMap(data_.data(), rows_, cols_); }
  ConstMatrixMap map() const { return ConstMatrixMap(data_.data(), rows_, cols_); }

  void fill(double value);
  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool all_finite() const;
  double squared_norm() const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  AlignedVector data_;
};

}  // namespace preply::nn

#endif  // PREPLY_NN_MATRIX_H_
