#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "sewkit/coord_jet.hpp"
#include "sewkit/fock.hpp"
#include "sewkit/laurent.hpp"
#include "sewkit/linalg.hpp"
#include "sewkit/u_operator.hpp"

namespace sewkit {

/// A module truncated to W^{<=N} with an ordered basis, mode matrices and the
/// data of L0 = offset + L~0 + L0n. Mode matrices are exact on every block
/// W(p) -> W(p') with p, p' <= N.
class TruncModule {
 public:
  virtual ~TruncModule() = default;

  virtual int N() const = 0;
  virtual std::vector<long> weights() const = 0;
  virtual std::vector<std::string> labels() const = 0;
  /// Y(u)_m for a VOA state u.
  virtual Matrix<Scalar> mode(const FockVector& u, long m) const = 0;
  /// Constant L0,s - L~0.
  virtual Scalar l0_offset() const = 0;
  /// Nilpotent part of L0 (zero matrix when L0 is semisimple).
  virtual Matrix<Scalar> l0_nilpotent() const = 0;
  virtual std::string describe() const = 0;

  std::size_t dim() const { return weights().size(); }
  Matrix<Scalar> L(long n) const { return mode(conformal_vector(), n + 1); }

  /// Projection P(n) onto W(n).
  Matrix<Scalar> projection(long n) const {
    auto w = weights();
    Matrix<Scalar> p(w.size(), w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] == n) p(i, i) = 1;
    return p;
  }
  Matrix<Scalar> grading() const {
    auto w = weights();
    Matrix<Scalar> p(w.size(), w.size());
    for (std::size_t i = 0; i < w.size(); ++i) p(i, i) = w[i];
    return p;
  }
  /// Full L0 = offset + L~0 + L0n on the truncation.
  Matrix<Scalar> l0() const {
    Matrix<Scalar> m = grading() + l0_nilpotent();
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += l0_offset();
    return m;
  }
};

/// Fock module of momentum lambda truncated at weight N.
class FockTrunc : public TruncModule {
 public:
  FockTrunc(int N, Scalar lambda = 0) : M_(std::move(lambda)), B_(N) {}

  int N() const override { return B_.N(); }
  std::vector<long> weights() const override { return B_.weights(); }
  std::vector<std::string> labels() const override {
    std::vector<std::string> out;
    for (const auto& p : B_.basis()) out.push_back(label(p));
    return out;
  }
  Matrix<Scalar> mode(const FockVector& u, long m) const override {
    return B_.matrix([&](const FockVector& v) { return M_.vertex_mode(u, m, v); });
  }
  Scalar l0_offset() const override { return M_.l0_offset(); }
  Matrix<Scalar> l0_nilpotent() const override { return Matrix<Scalar>(B_.dim(), B_.dim()); }
  std::string describe() const override { return "fock(momentum=" + to_string(M_.momentum()) + ")"; }

  const FockModule& module() const { return M_; }
  const BasisIndex& basis() const { return B_; }

 private:
  FockModule M_;
  BasisIndex B_;
};

/// U(gamma_z) v = e^{z L1} (-z^{-2})^{L0} v for a VOA state v, computed through
/// extract_c and u_apply over Laurent polynomials in z.
inline SparseVec<Laurent<Scalar>> u_gamma_z(const FockVector& v) {
  int W = std::max(0, v.max_weight());
  Laurent<Scalar> z = variable();
  CoordJet<Laurent<Scalar>> g = gamma_xi(z, W + 1);
  return u_apply(FockModule(0), extract_c(g), lift<Laurent<Scalar>>(v));
}

/// Contragredient M' on the dual basis of M's truncation:
/// <Y'(v,z) w', w> = <w', Y(U(gamma_z) v, z^{-1}) w>.
class ContragredientTrunc : public TruncModule {
 public:
  explicit ContragredientTrunc(std::shared_ptr<const TruncModule> base) : base_(std::move(base)) {}

  int N() const override { return base_->N(); }
  std::vector<long> weights() const override { return base_->weights(); }
  std::vector<std::string> labels() const override {
    auto l = base_->labels();
    for (auto& s : l) s += "'";
    return l;
  }
  Matrix<Scalar> mode(const FockVector& v, long j) const override {
    std::size_t d = base_->dim();
    Matrix<Scalar> out(d, d);
    auto ug = u_gamma_z(v);
    for (const auto& [eb, r] : ug.entries()) {
      // coefficient of z^{-j-1} in r(z) z^{m+1}
      for (long e = r.lo(); e <= r.hi(); ++e) {
        const Scalar& c = r.coeff(e);
        if (is_zero(c)) continue;
        long m = -j - 2 - e;
        out += base_->mode(FockVector::basis(eb), m).transpose() * c;
      }
    }
    return out;
  }
  Scalar l0_offset() const override { return base_->l0_offset(); }
  Matrix<Scalar> l0_nilpotent() const override { return base_->l0_nilpotent().transpose(); }
  std::string describe() const override { return "dual(" + base_->describe() + ")"; }

 private:
  std::shared_ptr<const TruncModule> base_;
};

/// Hand-declared module data with a nilpotent L0 part, used to exercise log q.
/// It carries no vertex operators.
class ToyModule : public TruncModule {
 public:
  /// blocks[n] is the nilpotent part of L0 on W(n) (square, dim W(n)).
  ToyModule(Scalar offset, std::vector<Matrix<Scalar>> blocks) : offset_(std::move(offset)), blocks_(std::move(blocks)) {
    for (std::size_t n = 0; n < blocks_.size(); ++n) {
      const auto& b = blocks_[n];
      if (b.rows() != b.cols()) throw std::invalid_argument("toy module: block " + std::to_string(n) + " is not square");
      Matrix<Scalar> p = Matrix<Scalar>::identity(b.rows());
      for (std::size_t k = 0; k <= b.rows(); ++k) p = p * b;
      if (!p.is_zero_matrix()) throw std::invalid_argument("toy module: block " + std::to_string(n) + " is not nilpotent");
    }
  }

  int N() const override { return static_cast<int>(blocks_.size()) - 1; }
  std::vector<long> weights() const override {
    std::vector<long> w;
    for (std::size_t n = 0; n < blocks_.size(); ++n)
      for (std::size_t i = 0; i < blocks_[n].rows(); ++i) w.push_back(static_cast<long>(n));
    return w;
  }
  std::vector<std::string> labels() const override {
    std::vector<std::string> out;
    for (std::size_t n = 0; n < blocks_.size(); ++n)
      for (std::size_t i = 0; i < blocks_[n].rows(); ++i) out.push_back("m(" + std::to_string(n) + "," + std::to_string(i) + ")");
    return out;
  }
  Matrix<Scalar> mode(const FockVector&, long) const override {
    throw std::logic_error("toy module carries no vertex operators");
  }
  Scalar l0_offset() const override { return offset_; }
  Matrix<Scalar> l0_nilpotent() const override {
    std::size_t d = dim();
    Matrix<Scalar> m(d, d);
    std::size_t at = 0;
    for (const auto& b : blocks_) {
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) m(at + i, at + j) = b(i, j);
      at += b.rows();
    }
    return m;
  }
  std::string describe() const override { return "toy(offset=" + to_string(offset_) + ")"; }

  const std::vector<Matrix<Scalar>>& blocks() const { return blocks_; }

 private:
  Scalar offset_;
  std::vector<Matrix<Scalar>> blocks_;
};

/// Contragredient mode matrix on the dual truncation of the momentum-lambda Fock module.
inline Matrix<Scalar> contragredient_mode(const FockVector& v, long m, int N, const Scalar& lambda = 0) {
  ContragredientTrunc d(std::make_shared<FockTrunc>(N, lambda));
  return d.mode(v, m);
}

}  // namespace sewkit
