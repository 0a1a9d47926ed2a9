#include "qflow/network.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

#include "qflow/errors.hpp"

namespace qflow {
namespace {

using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

// Sums over labels repeated inside one tensor.
LabeledTensor trace_repeated(LabeledTensor t) {
  for (;;) {
    int i_rep = -1, j_rep = -1;
    for (std::size_t i = 0; i < t.labels.size() && i_rep < 0; ++i)
      for (std::size_t j = i + 1; j < t.labels.size(); ++j)
        if (t.labels[i] == t.labels[j]) {
          i_rep = static_cast<int>(i);
          j_rep = static_cast<int>(j);
          break;
        }
    if (i_rep < 0) return t;
    const Index d = t.tensor.dim(static_cast<std::size_t>(i_rep));
    if (t.tensor.dim(static_cast<std::size_t>(j_rep)) != d) throw InvalidArgument("contract: traced axes differ in size");
    std::vector<int> perm;
    std::vector<int> rest_labels;
    std::vector<Index> rest_dims;
    for (std::size_t k = 0; k < t.labels.size(); ++k) {
      if (static_cast<int>(k) == i_rep || static_cast<int>(k) == j_rep) continue;
      perm.push_back(static_cast<int>(k));
      rest_labels.push_back(t.labels[k]);
      rest_dims.push_back(t.tensor.dim(k));
    }
    perm.push_back(i_rep);
    perm.push_back(j_rep);
    const DenseTensor p = t.tensor.permuted(perm);
    const Index rest = product(rest_dims);
    DenseTensor out(rest_dims.empty() ? std::vector<Index>{} : rest_dims);
    for (Index r = 0; r < rest; ++r) {
      Complex s(0.0, 0.0);
      for (Index k = 0; k < d; ++k) s += p[(r * d + k) * d + k];
      out[r] = s;
    }
    t = LabeledTensor{std::move(out), std::move(rest_labels)};
  }
}

struct Shape {
  std::vector<int> labels;
  std::vector<Index> dims;
};

Index shape_size(const Shape& s) { return product(s.dims); }

Shape merged_shape(const Shape& a, const Shape& b) {
  Shape out;
  for (std::size_t i = 0; i < a.labels.size(); ++i)
    if (!contains(b.labels, a.labels[i])) {
      out.labels.push_back(a.labels[i]);
      out.dims.push_back(a.dims[i]);
    }
  for (std::size_t i = 0; i < b.labels.size(); ++i)
    if (!contains(a.labels, b.labels[i])) {
      out.labels.push_back(b.labels[i]);
      out.dims.push_back(b.dims[i]);
    }
  return out;
}

double pair_flops(const Shape& a, const Shape& b) {
  double f = 1.0;
  for (std::size_t i = 0; i < a.labels.size(); ++i) f *= static_cast<double>(a.dims[i]);
  for (std::size_t i = 0; i < b.labels.size(); ++i)
    if (!contains(a.labels, b.labels[i])) f *= static_cast<double>(b.dims[i]);
  return f;
}

bool shares_label(const Shape& a, const Shape& b) {
  for (int l : a.labels)
    if (contains(b.labels, l)) return true;
  return false;
}

enum class Heuristic { size_delta, flops };

struct Plan {
  std::vector<std::pair<std::size_t, std::size_t>> steps;
  double flops = 0.0;
  Index largest = 0;
};

Plan plan_greedy(std::vector<Shape> shapes, Heuristic h) {
  Plan plan;
  while (shapes.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    double best_tie = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 1;
    bool found = false;
    for (std::size_t i = 0; i < shapes.size(); ++i)
      for (std::size_t j = i + 1; j < shapes.size(); ++j) {
        if (!shares_label(shapes[i], shapes[j])) continue;
        const Shape m = merged_shape(shapes[i], shapes[j]);
        const double fl = pair_flops(shapes[i], shapes[j]);
        const double sz = static_cast<double>(shape_size(m)) - static_cast<double>(shape_size(shapes[i])) -
                          static_cast<double>(shape_size(shapes[j]));
        const double key = h == Heuristic::size_delta ? sz : fl;
        const double tie = h == Heuristic::size_delta ? fl : sz;
        if (key < best || (key == best && tie < best_tie)) {
          best = key;
          best_tie = tie;
          bi = i;
          bj = j;
          found = true;
        }
      }
    if (!found) {
      // disconnected: outer product of the two smallest
      std::vector<std::size_t> order(shapes.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](std::size_t x, std::size_t y) { return shape_size(shapes[x]) < shape_size(shapes[y]); });
      bi = std::min(order[0], order[1]);
      bj = std::max(order[0], order[1]);
    }
    const Shape m = merged_shape(shapes[bi], shapes[bj]);
    plan.flops += pair_flops(shapes[bi], shapes[bj]);
    plan.largest = std::max(plan.largest, shape_size(m));
    plan.steps.emplace_back(bi, bj);
    shapes.erase(shapes.begin() + static_cast<std::ptrdiff_t>(bj));
    shapes[bi] = m;
  }
  return plan;
}

}  // namespace

LabeledTensor contract_pair(const LabeledTensor& a, const LabeledTensor& b) {
  std::vector<int> shared;
  for (int l : a.labels)
    if (contains(b.labels, l)) shared.push_back(l);
  std::vector<int> perm_a, perm_b;
  std::vector<int> out_labels;
  std::vector<Index> out_dims;
  Index m = 1, n = 1, k = 1;
  for (std::size_t i = 0; i < a.labels.size(); ++i)
    if (!contains(shared, a.labels[i])) {
      perm_a.push_back(static_cast<int>(i));
      out_labels.push_back(a.labels[i]);
      out_dims.push_back(a.tensor.dim(i));
      m *= a.tensor.dim(i);
    }
  for (int l : shared) {
    const auto ia = static_cast<std::size_t>(std::find(a.labels.begin(), a.labels.end(), l) - a.labels.begin());
    const auto ib = static_cast<std::size_t>(std::find(b.labels.begin(), b.labels.end(), l) - b.labels.begin());
    if (a.tensor.dim(ia) != b.tensor.dim(ib)) {
      throw InvalidArgument("contract: label " + std::to_string(l) + " joins axes of different size");
    }
    perm_a.push_back(static_cast<int>(ia));
    perm_b.push_back(static_cast<int>(ib));
    k *= a.tensor.dim(ia);
  }
  for (std::size_t i = 0; i < b.labels.size(); ++i)
    if (!contains(shared, b.labels[i])) {
      perm_b.push_back(static_cast<int>(i));
      out_labels.push_back(b.labels[i]);
      out_dims.push_back(b.tensor.dim(i));
      n *= b.tensor.dim(i);
    }
  const DenseTensor pa = a.tensor.permuted(perm_a);
  const DenseTensor pb = b.tensor.permuted(perm_b);
  DenseTensor out(out_dims);
  Eigen::Map<const RowMat> ma(pa.data(), m, k);
  Eigen::Map<const RowMat> mb(pb.data(), k, n);
  Eigen::Map<RowMat> mc(out.data(), m, n);
  mc.noalias() = ma * mb;
  return LabeledTensor{std::move(out), std::move(out_labels)};
}

DenseTensor contract_network(std::vector<LabeledTensor> tensors, const std::vector<int>& output_labels,
                             const ContractionOptions& options, ContractionStats* stats) {
  if (tensors.empty()) throw InvalidArgument("contract_network: empty network");
  std::map<int, int> count;
  for (auto& t : tensors) {
    if (t.labels.size() != t.tensor.rank()) throw InvalidArgument("contract_network: label count != tensor rank");
    t = trace_repeated(std::move(t));
    for (int l : t.labels) ++count[l];
  }
  for (int l : output_labels) ++count[l];
  for (const auto& [label, c] : count)
    if (c != 2) {
      throw InvalidArgument("contract_network: label " + std::to_string(label) + " occurs " + std::to_string(c) +
                            " times; expected 2");
    }

  std::vector<Shape> shapes;
  for (const auto& t : tensors) shapes.push_back(Shape{t.labels, t.tensor.dims()});
  Plan p1 = plan_greedy(shapes, Heuristic::size_delta);
  Plan p2 = plan_greedy(shapes, Heuristic::flops);
  const Plan& plan = p2.flops < p1.flops && p2.largest <= options.max_intermediate ? p2 : p1;
  if (plan.largest > options.max_intermediate) {
    throw ResourceCapExceeded("contract_network: intermediate of " + std::to_string(plan.largest) +
                              " elements exceeds cap " + std::to_string(options.max_intermediate));
  }
  for (const auto& [i, j] : plan.steps) {
    LabeledTensor merged = contract_pair(tensors[i], tensors[j]);
    tensors.erase(tensors.begin() + static_cast<std::ptrdiff_t>(j));
    tensors[i] = std::move(merged);
  }
  if (stats) {
    stats->flops = plan.flops;
    stats->largest_intermediate = plan.largest;
    stats->steps = plan.steps.size();
  }
  LabeledTensor& last = tensors.front();
  std::vector<int> perm;
  for (int l : output_labels) {
    auto it = std::find(last.labels.begin(), last.labels.end(), l);
    perm.push_back(static_cast<int>(it - last.labels.begin()));
  }
  return last.tensor.permuted(perm);
}

}  // namespace qflow
