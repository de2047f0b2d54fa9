#pragma once

// Representations pi(a) = (+)_k a_k (x) 1_{m_k} on H = (+)_k C^{n_k} (x) C^{m_k}.
// Inside a block the basis index is i * m_k + r.

#include <vector>

#include "qgraph/algebra.hpp"

namespace qgraph {

class Representation {
 public:
  Representation() = default;
  Representation(BlockAlgebra alg, std::vector<int> mult)
      : algebra_(std::move(alg)), mult_(std::move(mult)) {
    require(int(mult_.size()) == algebra_.num_blocks(), ErrorCode::kBadShape,
            "one multiplicity per block required");
    int off = 0;
    for (int k = 0; k < algebra_.num_blocks(); ++k) {
      require(mult_[std::size_t(k)] > 0, ErrorCode::kBadShape, "multiplicity must be positive");
      offsets_.push_back(off);
      off += algebra_.block_dim(k) * mult_[std::size_t(k)];
    }
    dim_ = off;
  }

  // L^2(B) itself: multiplicity n_k, and the basis agrees with the GNS basis.
  static Representation gns(const BlockAlgebra& alg) { return {alg, alg.dims()}; }
  static Representation minimal(const BlockAlgebra& alg) {
    return {alg, std::vector<int>(std::size_t(alg.num_blocks()), 1)};
  }

  const BlockAlgebra& algebra() const { return algebra_; }
  const std::vector<int>& multiplicities() const { return mult_; }
  int multiplicity(int k) const { return mult_[std::size_t(k)]; }
  int dim() const { return dim_; }
  int offset(int k) const { return offsets_[std::size_t(k)]; }
  int index(int k, int i, int r) const { return offset(k) + i * multiplicity(k) + r; }

  friend bool operator==(const Representation& a, const Representation& b) {
    return a.algebra_ == b.algebra_ && a.mult_ == b.mult_;
  }

  Mat pi(const AlgebraElement& a) const {
    a.check_shape(algebra_);
    Mat out = Mat::Zero(dim_, dim_);
    for (int k = 0; k < algebra_.num_blocks(); ++k) {
      const int n = algebra_.block_dim(k), m = multiplicity(k);
      out.block(offset(k), offset(k), n * m, n * m) = kron(a.blocks[std::size_t(k)], Mat::Identity(m, m));
    }
    return out;
  }

  // Nonzero entries of pi(e_alpha): (row, col) pairs, one per copy.
  std::vector<std::pair<int, int>> unit_entries(int alpha) const {
    const auto& u = algebra_.unit(alpha);
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r < multiplicity(u.block); ++r)
      out.emplace_back(index(u.block, u.row, r), index(u.block, u.col, r));
    return out;
  }

  // B' = (+)_k 1_{n_k} (x) M_{m_k}, spanned by 1 (x) e_{rs}.
  std::vector<Mat> commutant_basis() const {
    std::vector<Mat> out;
    for (int k = 0; k < algebra_.num_blocks(); ++k) {
      const int n = algebra_.block_dim(k), m = multiplicity(k);
      for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s) {
          Mat x = Mat::Zero(dim_, dim_);
          for (int i = 0; i < n; ++i) x(index(k, i, r), index(k, i, s)) = 1.0;
          out.push_back(std::move(x));
        }
    }
    return out;
  }

  // Orthogonal projection of an operator on H onto pi(B); returns the element.
  AlgebraElement project(const Mat& x, double* residual = nullptr) const {
    require(x.rows() == dim_ && x.cols() == dim_, ErrorCode::kSpaceMismatch,
            "operator does not act on the representation space");
    AlgebraElement a = AlgebraElement::zero(algebra_);
    for (int al = 0; al < algebra_.dim(); ++al) {
      const auto& u = algebra_.unit(al);
      cd s = 0.0;
      for (auto [p, q] : unit_entries(al)) s += x(p, q);
      a.blocks[std::size_t(u.block)](u.row, u.col) = s / double(multiplicity(u.block));
    }
    if (residual) *residual = (x - pi(a)).norm();
    return a;
  }

 private:
  BlockAlgebra algebra_;
  std::vector<int> mult_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

}  // namespace qgraph
