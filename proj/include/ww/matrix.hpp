#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ww/error.hpp"
#include "ww/rational.hpp"

namespace ww {

/// Row-major dense matrix over an arbitrary scalar; used for exact matrices.
/// Exposes the same (i, j) / rows() / cols() surface as Eigen so the
/// algorithms in hafnian.hpp accept either.
template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows * cols), T(0)) {}

  DenseMatrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = static_cast<int>(init.size());
    cols_ = rows_ ? static_cast<int>(init.begin()->size()) : 0;
    for (const auto& row : init) {
      if (static_cast<int>(row.size()) != cols_) throw InvalidArgument("ragged matrix initializer");
      for (const auto& x : row) data_.push_back(x);
    }
  }

  static DenseMatrix identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  T& operator()(int i, int j) { return data_[static_cast<size_t>(i * cols_ + j)]; }
  const T& operator()(int i, int j) const { return data_[static_cast<size_t>(i * cols_ + j)]; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using ExactMatrix = DenseMatrix<Rational>;

template <class M>
using scalar_of = std::decay_t<decltype(std::declval<const M&>()(0, 0))>;

template <class M>
bool is_exactly_symmetric(const M& a) {
  if (a.rows() != a.cols()) return false;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j)
      if (a(i, j) != a(j, i)) return false;
  return true;
}

}  // namespace ww
