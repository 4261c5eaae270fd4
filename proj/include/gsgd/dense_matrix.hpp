#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gsgd {

// Row-major dense real matrix; the universal numeric carrier.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  DenseMatrix& operator+=(const DenseMatrix& rhs);
  DenseMatrix& operator-=(const DenseMatrix& rhs);
  DenseMatrix& operator*=(double s);

  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator*(DenseMatrix m, double s);
DenseMatrix operator*(double s, DenseMatrix m);

DenseMatrix transpose(const DenseMatrix& m);

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);     // A * B
DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b);  // A^T * B
DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b);  // A * B^T

double frobenius_norm(const DenseMatrix& m);
double max_abs(const DenseMatrix& m);
// Frobenius inner product <A, B> = tr(A^T B).
double frobenius_dot(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace gsgd
