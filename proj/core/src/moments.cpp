#include <string>

#include "qflow/errors.hpp"
#include "qflow/mpo.hpp"

namespace qflow {
namespace {

// Legs of the site-resolved cell: 0 = a, 1 = b, 2..2+s-1 = j, 2+s..2+2s-1 = k.
struct CellPieces {
  DenseTensor left;   // legs left_legs..., internal
  DenseTensor right;  // internal, right_legs...
  std::vector<int> left_legs;
  std::vector<int> right_legs;
  Index rank = 0;
};

// Splits the cell along the bipartition (a + S | b + rest) of lowest rank.
CellPieces split_cell(const MpoTensor& m) {
  const int s = m.cell_sites();
  std::vector<Index> dims{m.cell_chi_left(), m.cell_chi_right()};
  for (int i = 0; i < 2 * s; ++i) dims.push_back(m.site_space());
  const DenseTensor t = m.cell().reshaped(dims);
  const int nphys = 2 * s;

  int best_mask = -1;
  Index best_rank = 0;
  for (int mask = 0; mask < (1 << nphys); ++mask) {
    std::vector<int> left{0}, right{1};
    for (int i = 0; i < nphys; ++i) ((mask >> i) & 1 ? left : right).push_back(2 + i);
    std::vector<int> perm = left;
    perm.insert(perm.end(), right.begin(), right.end());
    const ComplexMatrix mat = t.permuted(perm).as_matrix(left.size());
    const ComplexMatrix gram = mat.cols() <= mat.rows() ? ComplexMatrix(mat.adjoint() * mat)
                                                        : ComplexMatrix(mat * mat.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram, Eigen::EigenvaluesOnly);
    const RealVector ev = eig.eigenvalues().reverse().cwiseMax(0.0);
    const Index r = std::max<Index>(1, ev.maxCoeff() > 0 ? numerical_rank(ev, 1e-12) : 1);
    if (best_mask < 0 || r < best_rank) {
      best_mask = mask;
      best_rank = r;
    }
  }
  std::vector<int> left{0}, right{1};
  for (int i = 0; i < nphys; ++i) ((best_mask >> i) & 1 ? left : right).push_back(2 + i);
  std::vector<int> perm = left;
  perm.insert(perm.end(), right.begin(), right.end());
  SvdResult dec = svd(t.permuted(perm).as_matrix(left.size()));
  const Index r = std::max<Index>(1, numerical_rank(dec.singular_values, 1e-13));
  const RealVector w = dec.singular_values.head(r).cwiseSqrt();
  const ComplexMatrix pl = dec.left_vectors.leftCols(r) * w.asDiagonal();
  const ComplexMatrix pr = w.asDiagonal() * dec.right_vectors_adjoint.topRows(r);
  std::vector<Index> ldims, rdims{r};
  for (int l : left) ldims.push_back(dims[static_cast<std::size_t>(l)]);
  ldims.push_back(r);
  for (int l : right) rdims.push_back(dims[static_cast<std::size_t>(l)]);
  CellPieces best{DenseTensor::from_matrix(pl, ldims), DenseTensor::from_matrix(pr, rdims), left, right, r};
  return best;
}

}  // namespace

namespace {

double moment_from_pieces(const MpoTensor& m, const CellPieces& pieces, Side side, int k,
                          const ContractionOptions& options, ContractionStats* stats) {
  if (k < 1) throw InvalidArgument("network_trace_moment: k must be >= 1");
  const DenseTensor left_conj = pieces.left.conjugated();
  const DenseTensor right_conj = pieces.right.conjugated();

  const int reps = 2 * k;
  const int w = m.width();
  const int layers = m.layers();
  const int s = m.cell_sites();
  const int nsites = m.n_sites();
  int next = 0;

  // Row index shared by replicas (2i, 2i-1), column index by (2i, 2i+1); even replicas are conjugated.
  enum class Kind { row, col };
  auto shared = [&](Kind kind) {
    std::vector<int> lab(static_cast<std::size_t>(reps));
    for (int i = 0; i < k; ++i) {
      const int l = next++;
      const int partner = kind == Kind::row ? (2 * i - 1 + reps) % reps : 2 * i + 1;
      lab[static_cast<std::size_t>(2 * i)] = l;
      lab[static_cast<std::size_t>(partner)] = l;
    }
    return lab;
  };
  const Kind out_kind = side == Side::left ? Kind::row : Kind::col;
  const Kind in_kind = side == Side::left ? Kind::col : Kind::row;

  std::vector<std::vector<int>> left_bond, right_bond, inputs, outputs;
  for (int l = 0; l < layers; ++l) {
    left_bond.push_back(shared(Kind::row));
    right_bond.push_back(shared(Kind::col));
  }
  for (int i = 0; i < nsites; ++i) {
    inputs.push_back(shared(in_kind));
    outputs.push_back(shared(out_kind));
  }

  std::vector<LabeledTensor> net;
  for (int r = 0; r < reps; ++r) {
    const bool conj = r % 2 == 0;
    const auto ru = static_cast<std::size_t>(r);
    std::vector<std::vector<int>> hb(static_cast<std::size_t>(layers), std::vector<int>(static_cast<std::size_t>(w + 1)));
    std::vector<std::vector<int>> vert(static_cast<std::size_t>(layers + 1), std::vector<int>(static_cast<std::size_t>(nsites)));
    for (int l = 0; l < layers; ++l)
      for (int c = 0; c <= w; ++c) {
        if (c == 0) hb[l][c] = left_bond[l][ru];
        else if (c == w) hb[l][c] = right_bond[l][ru];
        else hb[l][c] = next++;
      }
    for (int l = 0; l <= layers; ++l)
      for (int i = 0; i < nsites; ++i) {
        if (l == 0) vert[l][i] = inputs[i][ru];
        else if (l == layers) vert[l][i] = outputs[i][ru];
        else vert[l][i] = next++;
      }
    for (int l = 0; l < layers; ++l)
      for (int c = 0; c < w; ++c) {
        std::vector<int> leg(2 + 2 * s);
        leg[0] = hb[l][c];
        leg[1] = hb[l][c + 1];
        for (int i = 0; i < s; ++i) {
          leg[2 + i] = vert[l][c * s + i];
          leg[2 + s + i] = vert[l + 1][c * s + i];
        }
        const int internal = next++;
        std::vector<int> ll, rl{internal};
        for (int g : pieces.left_legs) ll.push_back(leg[static_cast<std::size_t>(g)]);
        ll.push_back(internal);
        for (int g : pieces.right_legs) rl.push_back(leg[static_cast<std::size_t>(g)]);
        net.push_back(LabeledTensor{conj ? left_conj : pieces.left, std::move(ll)});
        net.push_back(LabeledTensor{conj ? right_conj : pieces.right, std::move(rl)});
      }
  }
  const DenseTensor value = contract_network(std::move(net), {}, options, stats);
  return value[0].real();
}

}  // namespace

double network_trace_moment(const MpoTensor& m, Side side, int k, const ContractionOptions& options,
                            ContractionStats* stats) {
  return moment_from_pieces(m, split_cell(m), side, k, options, stats);
}

NetworkMoments network_moments(const MpoTensor& m, const ContractionOptions& options) {
  const CellPieces pieces = split_cell(m);
  NetworkMoments out;
  out.m1_left = moment_from_pieces(m, pieces, Side::left, 1, options, nullptr);
  out.m1_right = moment_from_pieces(m, pieces, Side::right, 1, options, nullptr);
  out.m2_left = moment_from_pieces(m, pieces, Side::left, 2, options, nullptr);
  out.m2_right = moment_from_pieces(m, pieces, Side::right, 2, options, nullptr);
  return out;
}

}  // namespace qflow
