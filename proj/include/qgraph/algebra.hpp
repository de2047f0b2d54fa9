#pragma once

// Finite-dimensional C*-algebras B = M_{n_1} + ... + M_{n_K}, faithful
// functionals psi(a) = Tr(Qa) and the GNS space L^2(B, psi).
//
// A GnsContext fixes the canonical frame: each Q_k is diagonalised with
// nonincreasing entries, and every element handed to context methods is
// expressed in that frame. In the frame, f_{k,i,j} = e^{(k)}_{ij} / sqrt(Q_jj)
// is an orthonormal basis of L^2(B), ordered block by block and then
// lexicographically in (i, j).

#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "qgraph/error.hpp"
#include "qgraph/linalg.hpp"

namespace qgraph {

struct MatrixUnit {
  int block;
  int row;
  int col;
};

class BlockAlgebra {
 public:
  BlockAlgebra() = default;
  explicit BlockAlgebra(std::vector<int> dims) : dims_(std::move(dims)) {
    require(!dims_.empty(), ErrorCode::kBadShape, "algebra needs at least one block");
    int off = 0;
    for (int n : dims_) {
      require(n > 0, ErrorCode::kBadShape, "block dimension must be positive");
      offsets_.push_back(off);
      off += n * n;
    }
    dim_ = off;
    for (int k = 0; k < num_blocks(); ++k)
      for (int i = 0; i < dims_[k]; ++i)
        for (int j = 0; j < dims_[k]; ++j) units_.push_back({k, i, j});
  }

  const std::vector<int>& dims() const { return dims_; }
  int num_blocks() const { return int(dims_.size()); }
  int block_dim(int k) const { return dims_[std::size_t(k)]; }
  int dim() const { return dim_; }
  int offset(int k) const { return offsets_[std::size_t(k)]; }
  int index(int k, int i, int j) const { return offset(k) + i * block_dim(k) + j; }
  const MatrixUnit& unit(int alpha) const { return units_[std::size_t(alpha)]; }
  int transpose_index(int alpha) const {
    const auto& u = unit(alpha);
    return index(u.block, u.col, u.row);
  }
  bool is_commutative() const {
    return std::all_of(dims_.begin(), dims_.end(), [](int n) { return n == 1; });
  }

  friend bool operator==(const BlockAlgebra& a, const BlockAlgebra& b) {
    return a.dims_ == b.dims_;
  }

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  std::vector<MatrixUnit> units_;
  int dim_ = 0;
};

struct AlgebraElement {
  std::vector<Mat> blocks;

  static AlgebraElement zero(const BlockAlgebra& b) {
    AlgebraElement x;
    for (int n : b.dims()) x.blocks.push_back(Mat::Zero(n, n));
    return x;
  }
  static AlgebraElement identity(const BlockAlgebra& b) {
    AlgebraElement x;
    for (int n : b.dims()) x.blocks.push_back(Mat::Identity(n, n));
    return x;
  }
  static AlgebraElement unit(const BlockAlgebra& b, int alpha) {
    AlgebraElement x = zero(b);
    const auto& u = b.unit(alpha);
    x.blocks[std::size_t(u.block)](u.row, u.col) = 1.0;
    return x;
  }
  // Matrix-unit coordinates, same ordering as the GNS basis.
  static AlgebraElement from_coords(const BlockAlgebra& b, const Vec& c) {
    require(c.size() == b.dim(), ErrorCode::kBadShape, "coordinate length mismatch");
    AlgebraElement x = zero(b);
    for (int a = 0; a < b.dim(); ++a) {
      const auto& u = b.unit(a);
      x.blocks[std::size_t(u.block)](u.row, u.col) = c(a);
    }
    return x;
  }
  Vec coords(const BlockAlgebra& b) const {
    check_shape(b);
    Vec c(b.dim());
    for (int a = 0; a < b.dim(); ++a) {
      const auto& u = b.unit(a);
      c(a) = blocks[std::size_t(u.block)](u.row, u.col);
    }
    return c;
  }

  void check_shape(const BlockAlgebra& b) const {
    require(int(blocks.size()) == b.num_blocks(), ErrorCode::kBadShape,
            "element has wrong number of blocks");
    for (int k = 0; k < b.num_blocks(); ++k) {
      const auto& m = blocks[std::size_t(k)];
      require(m.rows() == b.block_dim(k) && m.cols() == b.block_dim(k),
              ErrorCode::kBadShape, "element block has wrong size");
    }
  }

  AlgebraElement adjoint() const {
    AlgebraElement y;
    for (const auto& m : blocks) y.blocks.push_back(m.adjoint());
    return y;
  }
  double norm() const {
    double n = 0.0;
    for (const auto& m : blocks) n = std::max(n, op_norm(m));
    return n;
  }

  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    require(a.blocks.size() == b.blocks.size(), ErrorCode::kBadShape, "block count mismatch");
    AlgebraElement c;
    for (std::size_t k = 0; k < a.blocks.size(); ++k) c.blocks.push_back(a.blocks[k] * b.blocks[k]);
    return c;
  }
  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    require(a.blocks.size() == b.blocks.size(), ErrorCode::kBadShape, "block count mismatch");
    AlgebraElement c;
    for (std::size_t k = 0; k < a.blocks.size(); ++k) c.blocks.push_back(a.blocks[k] + b.blocks[k]);
    return c;
  }
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    return a + (-1.0) * b;
  }
  friend AlgebraElement operator*(cd s, const AlgebraElement& a) {
    AlgebraElement c;
    for (const auto& m : a.blocks) c.blocks.push_back(s * m);
    return c;
  }
};

// Block-diagonal matrix of the element (multiplicity-one representation).
inline Mat block_diag(const AlgebraElement& a) {
  Eigen::Index n = 0;
  for (const auto& m : a.blocks) n += m.rows();
  Mat out = Mat::Zero(n, n);
  Eigen::Index off = 0;
  for (const auto& m : a.blocks) {
    out.block(off, off, m.rows(), m.rows()) = m;
    off += m.rows();
  }
  return out;
}

struct FaithfulFunctional {
  BlockAlgebra algebra;
  AlgebraElement Q;  // density, psi(a) = Tr(Q a)
};

namespace detail {

struct Coord {
  int block, row, col;
  double qi, qj;  // Q_ii and Q_jj in the canonical frame
};

struct MulEntry {
  int out, left, right;
  double value;
};

struct ContextData {
  BlockAlgebra algebra;
  AlgebraElement q_input;
  std::vector<Mat> frame;                 // Q_k = U_k D_k U_k^*
  std::vector<std::vector<double>> qdiag;  // D_k, nonincreasing
  bool normalized = false;
  std::vector<Coord> coords;
  std::vector<MulEntry> mul;  // sparse structure of m
};

inline void diagonalise_block(const Mat& q, Mat& frame, std::vector<double>& d) {
  const Eigen::Index n = q.rows();
  const double offdiag = (q - Mat(q.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  frame = Mat::Zero(n, n);
  d.assign(std::size_t(n), 0.0);
  if (offdiag == 0.0) {
    // already diagonal: a stable sorting permutation keeps the frame exact
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return q(a, a).real() > q(b, b).real(); });
    for (Eigen::Index c = 0; c < n; ++c) {
      frame(order[std::size_t(c)], c) = 1.0;
      d[std::size_t(c)] = q(order[std::size_t(c)], order[std::size_t(c)]).real();
    }
    return;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(q);
  for (Eigen::Index c = 0; c < n; ++c) {
    frame.col(c) = es.eigenvectors().col(n - 1 - c);
    d[std::size_t(c)] = es.eigenvalues()(n - 1 - c);
  }
}

}  // namespace detail

class GnsContext {
 public:
  GnsContext() = default;
  explicit GnsContext(std::shared_ptr<const detail::ContextData> d) : d_(std::move(d)) {}

  const BlockAlgebra& algebra() const { return d_->algebra; }
  int dim() const { return d_->algebra.dim(); }
  bool normalized() const { return d_->normalized; }
  const AlgebraElement& q_input() const { return d_->q_input; }
  const std::vector<Mat>& frame() const { return d_->frame; }
  const std::vector<std::vector<double>>& q_diagonal() const { return d_->qdiag; }
  const detail::Coord& coord(int alpha) const { return d_->coords[std::size_t(alpha)]; }
  const std::vector<detail::MulEntry>& mul_entries() const { return d_->mul; }
  bool valid() const { return d_ != nullptr; }

  bool same_as(const GnsContext& o) const {
    if (d_ == o.d_) return true;
    if (!d_ || !o.d_) return false;
    if (!(algebra() == o.algebra()) || normalized() != o.normalized()) return false;
    for (std::size_t k = 0; k < d_->frame.size(); ++k) {
      if (d_->qdiag[k] != o.d_->qdiag[k]) return false;
      if ((d_->frame[k] - o.d_->frame[k]).cwiseAbs().maxCoeff() != 0.0) return false;
    }
    return true;
  }

  bool is_tracial(double tol = kDefaultTol) const {
    for (const auto& d : d_->qdiag)
      for (double x : d)
        if (std::abs(x - d.front()) > tol * std::max(1.0, d.front())) return false;
    return true;
  }

  // ---- frame changes ----
  AlgebraElement to_canonical(const AlgebraElement& a) const {
    a.check_shape(algebra());
    AlgebraElement b;
    for (std::size_t k = 0; k < a.blocks.size(); ++k)
      b.blocks.push_back(d_->frame[k].adjoint() * a.blocks[k] * d_->frame[k]);
    return b;
  }
  AlgebraElement from_canonical(const AlgebraElement& a) const {
    a.check_shape(algebra());
    AlgebraElement b;
    for (std::size_t k = 0; k < a.blocks.size(); ++k)
      b.blocks.push_back(d_->frame[k] * a.blocks[k] * d_->frame[k].adjoint());
    return b;
  }

  // ---- the functional ----
  AlgebraElement q_power(double p) const {
    AlgebraElement x = AlgebraElement::zero(algebra());
    for (int k = 0; k < algebra().num_blocks(); ++k)
      for (int i = 0; i < algebra().block_dim(k); ++i)
        x.blocks[std::size_t(k)](i, i) = std::pow(d_->qdiag[std::size_t(k)][std::size_t(i)], p);
    return x;
  }
  cd psi(const AlgebraElement& a) const {
    cd s = 0.0;
    for (int k = 0; k < algebra().num_blocks(); ++k)
      for (int i = 0; i < algebra().block_dim(k); ++i)
        s += d_->qdiag[std::size_t(k)][std::size_t(i)] * a.blocks[std::size_t(k)](i, i);
    return s;
  }
  double trace_q_inverse(int k) const {
    double s = 0.0;
    for (double x : d_->qdiag[std::size_t(k)]) s += 1.0 / x;
    return s;
  }

  // ---- GNS map ----
  Vec lambda(const AlgebraElement& a) const {
    a.check_shape(algebra());
    Vec v(dim());
    for (int al = 0; al < dim(); ++al) {
      const auto& c = coord(al);
      v(al) = a.blocks[std::size_t(c.block)](c.row, c.col) * std::sqrt(c.qj);
    }
    return v;
  }
  AlgebraElement lambda_inverse(const Vec& v) const {
    require(v.size() == dim(), ErrorCode::kBadShape, "GNS vector has wrong length");
    AlgebraElement a = AlgebraElement::zero(algebra());
    for (int al = 0; al < dim(); ++al) {
      const auto& c = coord(al);
      a.blocks[std::size_t(c.block)](c.row, c.col) = v(al) / std::sqrt(c.qj);
    }
    return a;
  }
  // Lambda: matrix-unit coordinates -> GNS coordinates is diag(sqrt(Q_jj)).
  Eigen::VectorXd lambda_scale() const {
    Eigen::VectorXd s(dim());
    for (int al = 0; al < dim(); ++al) s(al) = std::sqrt(coord(al).qj);
    return s;
  }

  Vec eta() const { return lambda(AlgebraElement::identity(algebra())); }

  // m : L^2(B) (x) L^2(B) -> L^2(B), dense. Column index is left*dim+right.
  Mat m() const {
    require(dim() <= 96, ErrorCode::kTooLarge, "dense multiplication matrix too large");
    Mat out = Mat::Zero(dim(), Eigen::Index(dim()) * dim());
    for (const auto& e : d_->mul) out(e.out, Eigen::Index(e.left) * dim() + e.right) = e.value;
    return out;
  }
  Mat m_star() const { return m().adjoint(); }

  // m m^* acts on block k as Tr(Q_k^{-1}).
  Mat mm_star() const {
    Mat out = Mat::Zero(dim(), dim());
    for (int al = 0; al < dim(); ++al) out(al, al) = trace_q_inverse(coord(al).block);
    return out;
  }

  bool is_delta_form(double tol = kDefaultTol) const {
    const double d0 = trace_q_inverse(0);
    for (int k = 1; k < algebra().num_blocks(); ++k)
      if (std::abs(trace_q_inverse(k) - d0) > tol * d0) return false;
    return true;
  }

  // ---- modular data ----
  // sigma_z(a) = Q^{iz} a Q^{-iz}
  AlgebraElement sigma(const AlgebraElement& a, cd z) const {
    a.check_shape(algebra());
    AlgebraElement b = a;
    const cd iz = cd(0, 1) * z;
    for (int k = 0; k < algebra().num_blocks(); ++k) {
      const auto& d = d_->qdiag[std::size_t(k)];
      for (int i = 0; i < algebra().block_dim(k); ++i)
        for (int j = 0; j < algebra().block_dim(k); ++j)
          b.blocks[std::size_t(k)](i, j) *=
              std::exp(iz * (std::log(d[std::size_t(i)]) - std::log(d[std::size_t(j)])));
    }
    return b;
  }
  // Eigenvalue of sigma_z on e_{ij}: (Q_ii / Q_jj)^{iz}.
  cd sigma_factor(int alpha, cd z) const {
    const auto& c = coord(alpha);
    return std::exp(cd(0, 1) * z * std::log(c.qi / c.qj));
  }
  // nabla^z f_ij = (Q_ii/Q_jj)^z f_ij
  Vec nabla_power(cd z) const {
    Vec v(dim());
    for (int al = 0; al < dim(); ++al) {
      const auto& c = coord(al);
      v(al) = std::exp(z * std::log(c.qi / c.qj));
    }
    return v;
  }
  Mat nabla(cd z = 1.0) const { return nabla_power(z).asDiagonal(); }

  // J f_ij = f_ji, extended antilinearly: J v = K conj(v).
  Mat j_permutation() const {
    Mat k = Mat::Zero(dim(), dim());
    for (int al = 0; al < dim(); ++al) k(algebra().transpose_index(al), al) = 1.0;
    return k;
  }
  Vec apply_j(const Vec& v) const { return j_permutation() * v.conjugate(); }

 private:
  std::shared_ptr<const detail::ContextData> d_;
};

inline GnsContext make_context(const FaithfulFunctional& psi, bool normalized,
                               double tol = kDefaultTol) {
  const BlockAlgebra& alg = psi.algebra;
  require(int(psi.Q.blocks.size()) == alg.num_blocks(), ErrorCode::kBadShape,
          "Q has wrong number of blocks");
  auto data = std::make_shared<detail::ContextData>();
  data->algebra = alg;
  data->q_input = psi.Q;
  data->normalized = normalized;
  double trace = 0.0;
  for (int k = 0; k < alg.num_blocks(); ++k) {
    const Mat& q = psi.Q.blocks[std::size_t(k)];
    require(q.rows() == alg.block_dim(k) && q.cols() == alg.block_dim(k), ErrorCode::kBadShape,
            "Q block " + std::to_string(k) + " has wrong size");
    require(q.allFinite(), ErrorCode::kBadQ, "Q has non-finite entries");
    require((q - q.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, q.cwiseAbs().maxCoeff()),
            ErrorCode::kBadQ, "Q block " + std::to_string(k) + " is not Hermitian");
    Mat h = 0.5 * (q + q.adjoint());
    Mat u;
    std::vector<double> d;
    detail::diagonalise_block(h, u, d);
    const double top = *std::max_element(d.begin(), d.end());
    const double low = d.back();
    require(low > tol * std::max(1.0, top), ErrorCode::kNotPositive,
            "Q block " + std::to_string(k) + " is not positive invertible");
    for (double x : d) trace += x;
    data->frame.push_back(std::move(u));
    data->qdiag.push_back(std::move(d));
  }
  if (normalized)
    require(std::abs(trace - 1.0) <= tol * std::max(1, alg.dim()), ErrorCode::kNotNormalized,
            "Tr(Q) = " + std::to_string(trace) + ", expected 1");
  for (int al = 0; al < alg.dim(); ++al) {
    const auto& u = alg.unit(al);
    const auto& d = data->qdiag[std::size_t(u.block)];
    data->coords.push_back({u.block, u.row, u.col, d[std::size_t(u.row)], d[std::size_t(u.col)]});
  }
  // f_{k,i,j} f_{k,j,l} = f_{k,i,l} / sqrt(Q_jj)
  for (int k = 0; k < alg.num_blocks(); ++k) {
    const int n = alg.block_dim(k);
    const auto& d = data->qdiag[std::size_t(k)];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          data->mul.push_back({alg.index(k, i, l), alg.index(k, i, j), alg.index(k, j, l),
                               1.0 / std::sqrt(d[std::size_t(j)])});
  }
  return GnsContext(std::move(data));
}

// Counting measure on C^n: the context used for classical graphs.
inline GnsContext counting_context(int n) {
  BlockAlgebra alg(std::vector<int>(std::size_t(n), 1));
  return make_context({alg, AlgebraElement::identity(alg)}, false);
}

inline GnsContext trace_context(const BlockAlgebra& alg) {
  return make_context({alg, AlgebraElement::identity(alg)}, false);
}

// psi = Tr(Q .) with Q = diag(1, q^2) / (1 + q^2) on M_2.
inline GnsContext powers_context(double q) {
  BlockAlgebra alg({2});
  AlgebraElement Q = AlgebraElement::zero(alg);
  Q.blocks[0](0, 0) = 1.0 / (1.0 + q * q);
  Q.blocks[0](1, 1) = q * q / (1.0 + q * q);
  return make_context({alg, Q}, true);
}

}  // namespace qgraph
