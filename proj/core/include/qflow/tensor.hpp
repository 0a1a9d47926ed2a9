#pragma once

#include <vector>

#include "qflow/linalg.hpp"

namespace qflow {

// Dense complex tensor, row-major (last index fastest).
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(std::vector<Index> dims);
  DenseTensor(std::vector<Index> dims, std::vector<Complex> data);

  const std::vector<Index>& dims() const noexcept { return dims_; }
  Index dim(std::size_t axis) const { return dims_.at(axis); }
  std::size_t rank() const noexcept { return dims_.size(); }
  Index size() const noexcept { return static_cast<Index>(data_.size()); }

  Complex* data() noexcept { return data_.data(); }
  const Complex* data() const noexcept { return data_.data(); }
  const std::vector<Complex>& values() const noexcept { return data_; }

  Complex& operator[](Index flat) { return data_[static_cast<std::size_t>(flat)]; }
  const Complex& operator[](Index flat) const { return data_[static_cast<std::size_t>(flat)]; }
  Complex& at(const std::vector<Index>& idx);
  const Complex& at(const std::vector<Index>& idx) const;

  // result.dims()[i] == dims()[perm[i]]
  DenseTensor permuted(const std::vector<int>& perm) const;
  DenseTensor reshaped(std::vector<Index> dims) const;
  DenseTensor conjugated() const;

  // First `row_axes` axes become rows, the rest columns.
  ComplexMatrix as_matrix(std::size_t row_axes) const;
  static DenseTensor from_matrix(const ComplexMatrix& m, std::vector<Index> dims);

  double norm() const;

 private:
  Index flat_index(const std::vector<Index>& idx) const;

  std::vector<Index> dims_;
  std::vector<Complex> data_;
};

Index product(const std::vector<Index>& dims);

}  // namespace qflow
