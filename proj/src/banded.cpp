#include "shdtn/banded.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>

namespace shdtn {

BandedMatrix::BandedMatrix(int n, int half_bandwidth)
    : n_(n), bw_(half_bandwidth), ld_(2 * half_bandwidth + 1), data_(size_t(ld_) * n, 0.0) {}

double BandedMatrix::coeff(int i, int j) const {
  if (std::abs(i - j) > bw_) return 0.0;
  return data_[size_t(j) * ld_ + (i - j + bw_)];
}

void BandedMatrix::add(int i, int j, double value) {
  if (std::abs(i - j) > bw_) throw std::logic_error("BandedMatrix::add outside the band");
  data_[size_t(j) * ld_ + (i - j + bw_)] += value;
}

void BandedMatrix::axpy_scaled(double alpha, const BandedMatrix& other) {
  if (other.n_ != n_ || other.bw_ != bw_)
    throw std::logic_error("BandedMatrix::axpy_scaled shape mismatch");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += alpha * other.data_[i];
}

Eigen::VectorXd BandedMatrix::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
  for (int j = 0; j < n_; ++j) {
    const int i_lo = std::max(0, j - bw_);
    const int i_hi = std::min(n_ - 1, j + bw_);
    const double xj = x[j];
    const double* col = &data_[size_t(j) * ld_];
    for (int i = i_lo; i <= i_hi; ++i) y[i] += col[i - j + bw_] * xj;
  }
  return y;
}

Eigen::VectorXcd BandedMatrix::multiply(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n_);
  for (int j = 0; j < n_; ++j) {
    const int i_lo = std::max(0, j - bw_);
    const int i_hi = std::min(n_ - 1, j + bw_);
    const std::complex<double> xj = x[j];
    const double* col = &data_[size_t(j) * ld_];
    for (int i = i_lo; i <= i_hi; ++i) y[i] += col[i - j + bw_] * xj;
  }
  return y;
}

BandedLU::BandedLU(const BandedMatrix& a)
    : n_(a.size()), bw_(a.half_bandwidth()), ldab_(3 * a.half_bandwidth() + 1) {
  // LAPACK band layout with kl extra rows for pivoting fill.
  ab_.assign(size_t(ldab_) * n_, 0.0);
  ipiv_.resize(n_);
  const int kl = bw_, ku = bw_;
  for (int j = 0; j < n_; ++j) {
    const int i_lo = std::max(0, j - ku);
    const int i_hi = std::min(n_ - 1, j + kl);
    for (int i = i_lo; i <= i_hi; ++i)
      ab_[size_t(j) * ldab_ + (kl + ku + i - j)] = a.coeff(i, j);
  }
  const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kl, ku, ab_.data(),
                                         ldab_, ipiv_.data());
  if (info != 0)
    throw std::runtime_error("banded LU factorization failed (singular system), info=" +
                             std::to_string(info));
}

void BandedLU::solve_inplace_real(double* b, int nrhs) const {
  const lapack_int info =
      LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, bw_, bw_, nrhs, ab_.data(), ldab_,
                     ipiv_.data(), b, n_);
  if (info != 0) throw std::runtime_error("banded solve failed, info=" + std::to_string(info));
}

Eigen::VectorXd BandedLU::solve(const Eigen::VectorXd& b) const {
  Eigen::VectorXd x = b;
  solve_inplace_real(x.data(), 1);
  return x;
}

Eigen::VectorXcd BandedLU::solve(const Eigen::VectorXcd& b) const {
  Eigen::MatrixXd parts(n_, 2);
  parts.col(0) = b.real();
  parts.col(1) = b.imag();
  solve_inplace_real(parts.data(), 2);
  Eigen::VectorXcd x(n_);
  x.real() = parts.col(0);
  x.imag() = parts.col(1);
  return x;
}

Eigen::MatrixXcd BandedLU::solve(const Eigen::MatrixXcd& b) const {
  const int m = int(b.cols());
  Eigen::MatrixXd parts(n_, 2 * m);
  for (int c = 0; c < m; ++c) {
    parts.col(2 * c) = b.col(c).real();
    parts.col(2 * c + 1) = b.col(c).imag();
  }
  solve_inplace_real(parts.data(), 2 * m);
  Eigen::MatrixXcd x(n_, m);
  for (int c = 0; c < m; ++c) {
    x.col(c).real() = parts.col(2 * c);
    x.col(c).imag() = parts.col(2 * c + 1);
  }
  return x;
}

}  // namespace shdtn
