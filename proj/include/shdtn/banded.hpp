#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace shdtn {

// Square real matrix with equal lower/upper half-bandwidth, column-major band
// storage. Out-of-band reads return zero; out-of-band writes are an error.
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(int n, int half_bandwidth);

  int size() const { return n_; }
  int half_bandwidth() const { return bw_; }

  double coeff(int i, int j) const;
  void add(int i, int j, double value);

  void axpy_scaled(double alpha, const BandedMatrix& other);  // *this += alpha*other

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  Eigen::VectorXcd multiply(const Eigen::VectorXcd& x) const;

  const std::vector<double>& data() const { return data_; }

 private:
  int n_ = 0;
  int bw_ = 0;
  int ld_ = 0;
  std::vector<double> data_;
};

// LU factorization of a banded matrix via LAPACK dgbtrf/dgbtrs.
// Throws std::runtime_error when the matrix is exactly singular.
class BandedLU {
 public:
  explicit BandedLU(const BandedMatrix& a);

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& b) const;

 private:
  void solve_inplace_real(double* b, int nrhs) const;

  int n_ = 0;
  int bw_ = 0;
  int ldab_ = 0;
  std::vector<double> ab_;
  std::vector<int> ipiv_;
};

}  // namespace shdtn
