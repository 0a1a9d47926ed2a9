#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qflow/errors.hpp"
#include "qflow/network.hpp"
#include "qflow/tensor.hpp"

using namespace qflow;

namespace {
DenseTensor random_tensor(std::uint64_t seed, std::vector<Index> dims) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> n;
  DenseTensor t(dims);
  for (Index i = 0; i < t.size(); ++i) t[i] = Complex(n(g), n(g));
  return t;
}

oracle::Operand operand(const LabeledTensor& t) {
  oracle::Operand o;
  o.dims.assign(t.tensor.dims().begin(), t.tensor.dims().end());
  o.data = t.tensor.values();
  o.labels = t.labels;
  return o;
}

double max_diff(const DenseTensor& t, const std::vector<Complex>& ref) {
  double m = 0.0;
  for (Index i = 0; i < t.size(); ++i) m = std::max(m, std::abs(t[i] - ref[static_cast<std::size_t>(i)]));
  return m;
}
}  // namespace

TEST_CASE("permutation follows the axis map") {
  const DenseTensor t = random_tensor(1, {2, 3, 4});
  const DenseTensor p = t.permuted({2, 0, 1});
  CHECK(p.dims() == std::vector<Index>{4, 2, 3});
  for (Index a = 0; a < 2; ++a)
    for (Index b = 0; b < 3; ++b)
      for (Index c = 0; c < 4; ++c) CHECK(p.at({c, a, b}) == t.at({a, b, c}));
}

TEST_CASE("matrix views and reshapes") {
  const DenseTensor t = random_tensor(2, {2, 3, 2});
  const ComplexMatrix m = t.as_matrix(1);
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 6);
  CHECK(m(1, 4) == t.at({1, 2, 0}));
  const DenseTensor back = DenseTensor::from_matrix(m, {2, 3, 2});
  CHECK(max_diff(back, t.values()) == 0.0);
  CHECK_THROWS_AS(t.reshaped({5, 2}), InvalidArgument);
  CHECK(std::abs(t.norm() - m.norm()) < 1e-12);
}

TEST_CASE("network contraction agrees with a brute-force einsum") {
  // ring of four tensors with one open leg each, plus a self-trace on the last
  std::vector<LabeledTensor> net = {
      {random_tensor(3, {2, 3, 2}), {1, 2, 10}},
      {random_tensor(4, {3, 2, 3}), {2, 3, 11}},
      {random_tensor(5, {2, 2, 2}), {3, 4, 12}},
      {random_tensor(6, {2, 2, 3, 3}), {4, 1, 5, 5}},
  };
  std::vector<oracle::Operand> ops;
  for (const auto& t : net) ops.push_back(operand(t));
  ContractionStats stats;
  const DenseTensor out = contract_network(net, {12, 10, 11}, {}, &stats);
  CHECK(out.dims() == std::vector<Index>{2, 2, 3});
  CHECK(max_diff(out, oracle::einsum(ops, {12, 10, 11})) < 1e-11);
  CHECK(stats.steps >= 3);
}

TEST_CASE("full contraction to a scalar") {
  std::vector<LabeledTensor> net = {
      {random_tensor(7, {3, 4}), {1, 2}},
      {random_tensor(8, {4, 3}), {2, 1}},
  };
  std::vector<oracle::Operand> ops;
  for (const auto& t : net) ops.push_back(operand(t));
  const DenseTensor out = contract_network(net, {});
  REQUIRE(out.size() == 1);
  CHECK(std::abs(out[0] - oracle::einsum(ops, {})[0]) < 1e-12);
}

TEST_CASE("contraction rejects bad labels and respects the cap") {
  std::vector<LabeledTensor> bad = {{random_tensor(1, {2, 2}), {1, 1}}, {random_tensor(2, {2}), {1}}};
  CHECK_THROWS_AS(contract_network(bad, {}), InvalidArgument);
  std::vector<LabeledTensor> big = {{random_tensor(1, {8, 8}), {1, 2}}, {random_tensor(2, {8, 8}), {3, 4}}};
  ContractionOptions opts;
  opts.max_intermediate = 100;
  CHECK_THROWS_AS(contract_network(big, {1, 2, 3, 4}, opts), ResourceCapExceeded);
}
