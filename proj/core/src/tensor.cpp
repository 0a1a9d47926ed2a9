#include "qflow/tensor.hpp"

#include <numeric>
#include <string>

#include "qflow/errors.hpp"

namespace qflow {

Index product(const std::vector<Index>& dims) {
  Index p = 1;
  for (Index d : dims) p *= d;
  return p;
}

DenseTensor::DenseTensor(std::vector<Index> dims)
    : dims_(std::move(dims)), data_(static_cast<std::size_t>(product(dims_)), Complex(0.0, 0.0)) {
  for (Index d : dims_)
    if (d < 1) throw InvalidArgument("DenseTensor: dimensions must be positive");
}

DenseTensor::DenseTensor(std::vector<Index> dims, std::vector<Complex> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  for (Index d : dims_)
    if (d < 1) throw InvalidArgument("DenseTensor: dimensions must be positive");
  if (static_cast<Index>(data_.size()) != product(dims_)) {
    throw InvalidArgument("DenseTensor: data length does not match dimensions");
  }
}

Index DenseTensor::flat_index(const std::vector<Index>& idx) const {
  if (idx.size() != dims_.size()) throw InvalidArgument("DenseTensor: index rank mismatch");
  Index f = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= dims_[i]) throw InvalidArgument("DenseTensor: index out of range");
    f = f * dims_[i] + idx[i];
  }
  return f;
}

Complex& DenseTensor::at(const std::vector<Index>& idx) { return data_[static_cast<std::size_t>(flat_index(idx))]; }
const Complex& DenseTensor::at(const std::vector<Index>& idx) const {
  return data_[static_cast<std::size_t>(flat_index(idx))];
}

DenseTensor DenseTensor::permuted(const std::vector<int>& perm) const {
  const std::size_t r = dims_.size();
  if (perm.size() != r) throw InvalidArgument("permuted: permutation rank mismatch");
  std::vector<bool> seen(r, false);
  for (int p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= r || seen[static_cast<std::size_t>(p)]) {
      throw InvalidArgument("permuted: not a permutation");
    }
    seen[static_cast<std::size_t>(p)] = true;
  }
  bool identity = true;
  for (std::size_t i = 0; i < r; ++i) identity = identity && perm[i] == static_cast<int>(i);
  if (identity) return *this;

  std::vector<Index> in_strides(r, 1);
  for (std::size_t i = r; i-- > 1;) in_strides[i - 1] = in_strides[i] * dims_[i];
  std::vector<Index> out_dims(r), strides(r);
  for (std::size_t i = 0; i < r; ++i) {
    out_dims[i] = dims_[static_cast<std::size_t>(perm[i])];
    strides[i] = in_strides[static_cast<std::size_t>(perm[i])];
  }
  DenseTensor out(out_dims);
  const Index n = out.size();
  if (n == 0) return out;
  // odometer over output indices; innermost loop unrolled over the last axis
  std::vector<Index> counter(r, 0);
  const Index last_dim = out_dims[r - 1];
  const Index last_stride = strides[r - 1];
  Index src = 0;
  Complex* dst = out.data();
  for (Index o = 0; o < n; o += last_dim) {
    const Complex* base = data_.data() + src;
    for (Index t = 0; t < last_dim; ++t) dst[o + t] = base[t * last_stride];
    for (std::size_t ax = r - 1; ax-- > 0;) {
      if (++counter[ax] < out_dims[ax]) {
        src += strides[ax];
        break;
      }
      src -= strides[ax] * (out_dims[ax] - 1);
      counter[ax] = 0;
    }
  }
  return out;
}

DenseTensor DenseTensor::reshaped(std::vector<Index> dims) const {
  if (product(dims) != size()) throw InvalidArgument("reshaped: size mismatch");
  return DenseTensor(std::move(dims), data_);
}

DenseTensor DenseTensor::conjugated() const {
  DenseTensor out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

ComplexMatrix DenseTensor::as_matrix(std::size_t row_axes) const {
  if (row_axes > dims_.size()) throw InvalidArgument("as_matrix: too many row axes");
  Index rows = 1;
  for (std::size_t i = 0; i < row_axes; ++i) rows *= dims_[i];
  const Index cols = size() / rows;
  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMat>(data_.data(), rows, cols);
}

DenseTensor DenseTensor::from_matrix(const ComplexMatrix& m, std::vector<Index> dims) {
  if (product(dims) != m.size()) throw InvalidArgument("from_matrix: size mismatch");
  DenseTensor out(std::move(dims));
  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<RowMat>(out.data(), m.rows(), m.cols()) = m;
  return out;
}

double DenseTensor::norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace qflow
