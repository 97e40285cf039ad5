#pragma once

#include <Eigen/Core>

#include <cmath>
#include <memory>
#include <ostream>
#include <utility>

#include "smp/types.hpp"

namespace smp {

/// A finitely supported signed kernel on a grid state space. Entry (x, y) is
/// the signed mass the row-x measure puts on the cell of grid point y, so
/// composition is a plain matrix product and atoms and densities mix freely.
/// Immutable after construction; per-row total variations are cached.
template <typename Scalar>
class SignedKernelT {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  SignedKernelT(SpacePtr space, Matrix entries)
      : space_(std::move(space)), entries_(std::move(entries)) {
    if (entries_.rows() != space_->size() || entries_.cols() != space_->size())
      throw MismatchedSpaceError("kernel entries do not match the space size");
    if (!entries_.allFinite()) throw OverflowError("kernel entries must be finite");
    row_tv_ = entries_.cwiseAbs().rowwise().sum();
  }

  /// The unit kernel 1(x, B): mass 1 on the own cell.
  static SignedKernelT identity(SpacePtr space) {
    Matrix m = Matrix::Identity(space->size(), space->size());
    return SignedKernelT(std::move(space), std::move(m));
  }

  /// Builds a kernel from a density matrix d(x, y) by scaling columns with the
  /// cell weights.
  static SignedKernelT from_density(SpacePtr space, const Matrix& density) {
    Matrix m = density * space->cell_weights().template cast<Scalar>().asDiagonal();
    return SignedKernelT(std::move(space), std::move(m));
  }

  const Matrix& entries() const { return entries_; }
  const Vector& row_total_variation() const { return row_tv_; }
  const SpacePtr& space() const { return space_; }

  bool is_stochastic(Scalar tol = Scalar(1e-9)) const {
    if ((entries_.array() < Scalar(0)).any()) return false;
    return (entries_.rowwise().sum().array() - Scalar(1)).abs().maxCoeff() <= tol;
  }

 private:
  SpacePtr space_;
  Matrix entries_;
  Vector row_tv_;
};

using SignedKernel = SignedKernelT<double>;

/// sup_x |k|(x, E): the maximum row total variation.
template <typename Scalar>
Scalar norm(const SignedKernelT<Scalar>& k) {
  return k.row_total_variation().maxCoeff();
}

template <typename Scalar>
SignedKernelT<Scalar> compose(const SignedKernelT<Scalar>& k, const SignedKernelT<Scalar>& k2) {
  if (!k.space()->same_as(*k2.space()))
    throw MismatchedSpaceError("compose: kernels live on different spaces");
  typename SignedKernelT<Scalar>::Matrix m = k.entries() * k2.entries();
  if (!m.allFinite()) throw OverflowError("compose: non-finite entry");
  return SignedKernelT<Scalar>(k.space(), std::move(m));
}

/// k^(n); k^(0) is the unit kernel.
template <typename Scalar>
SignedKernelT<Scalar> power(const SignedKernelT<Scalar>& k, long n) {
  if (n < 0) throw Error("power: negative exponent");
  SignedKernelT<Scalar> result = SignedKernelT<Scalar>::identity(k.space());
  for (long i = 0; i < n; ++i) result = compose(result, k);
  return result;
}

template <typename Scalar>
SignedKernelT<Scalar> operator+(const SignedKernelT<Scalar>& a, const SignedKernelT<Scalar>& b) {
  if (!a.space()->same_as(*b.space()))
    throw MismatchedSpaceError("kernel sum: different spaces");
  return SignedKernelT<Scalar>(a.space(), a.entries() + b.entries());
}

template <typename Scalar>
SignedKernelT<Scalar> operator*(Scalar c, const SignedKernelT<Scalar>& k) {
  return SignedKernelT<Scalar>(k.space(), c * k.entries());
}

/// Values of f on the grid points of a space.
Eigen::VectorXd grid_values(const TestFunction& f, const GridStateSpace& space);

/// Kf(x) = Σ_y k(x, cell y) f(y), returned as a vector aligned with the grid.
template <typename Scalar, typename Derived>
typename SignedKernelT<Scalar>::Vector apply(const SignedKernelT<Scalar>& k,
                                             const Eigen::MatrixBase<Derived>& values) {
  return k.entries() * values;
}

/// Kf as a grid-backed test function; throws UnboundedFunctionError when f is
/// not finite on the grid.
TestFunction apply(const SignedKernel& k, const TestFunction& f);

/// Debug serialization, one `row,col,mass` line per nonzero entry.
void write_csv(const SignedKernel& k, std::ostream& os);

}  // namespace smp
