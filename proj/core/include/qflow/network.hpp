#pragma once

#include <cstdint>
#include <vector>

#include "qflow/tensor.hpp"

namespace qflow {

// A tensor whose axes carry integer labels. Each label must occur exactly twice
// across a network (once per endpoint), or once in the network and once in the
// requested output.
struct LabeledTensor {
  DenseTensor tensor;
  std::vector<int> labels;
};

struct ContractionStats {
  double flops = 0.0;               // complex multiply-adds
  Index largest_intermediate = 0;   // elements
  std::size_t steps = 0;
};

struct ContractionOptions {
  Index max_intermediate = Index(1) << 27;  // elements (2 GiB of complex<double>)
};

// Pairwise greedy contraction. Result axes follow `output_labels`.
DenseTensor contract_network(std::vector<LabeledTensor> tensors, const std::vector<int>& output_labels,
                             const ContractionOptions& options = {}, ContractionStats* stats = nullptr);

// Contracts two tensors over their shared labels.
LabeledTensor contract_pair(const LabeledTensor& a, const LabeledTensor& b);

}  // namespace qflow
