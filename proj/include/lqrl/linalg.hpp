#pragma once

#include <Eigen/Dense>

#include "lqrl/errors.hpp"

namespace lqrl {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Symmetric matrix with exactly mirrored storage. Every constructor either
// checks or enforces S(i,j) == S(j,i) bit for bit.
class SymMat {
 public:
  SymMat() = default;

  // Accepts `m` if it is symmetric to within `tol` (relative to its largest
  // entry) and stores the exact average of m and m^T.
  explicit SymMat(const Mat& m, double tol = 1e-9);

  static SymMat zero(Eigen::Index dim);
  static SymMat identity(Eigen::Index dim, double scale = 1.0);
  static SymMat diagonal(const Vec& d);

  Eigen::Index dim() const { return m_.rows(); }
  const Mat& mat() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  double quad(const Vec& x) const;

  // this + scale * v v^T, upper triangle computed once and mirrored.
  SymMat rank_one_update(double scale, const Vec& v) const;

  SymMat operator+(const SymMat& o) const;
  SymMat operator-(const SymMat& o) const;
  SymMat operator*(double s) const;

 private:
  Mat m_;
};

inline SymMat operator*(double s, const SymMat& m) { return m * s; }

// Largest singular value.
double spectral_norm(const Mat& m);
double frobenius_norm(const Mat& m);
double min_eigenvalue(const SymMat& s);
double max_eigenvalue(const SymMat& s);
// Largest eigenvalue modulus of a general square matrix.
double spectral_radius(const Mat& m);

// true iff min_eigenvalue(a - b) >= -tol.
bool psd_order_geq(const SymMat& a, const SymMat& b, double tol = 1e-10);

// Solves a X = rhs through a Cholesky factorization. Throws
// DefinitenessError if `a` is not positive definite.
Mat spd_solve(const SymMat& a, const Mat& rhs);

// Symmetric square root of a PSD matrix (V sqrt(D) V^T with negative round-off
// eigenvalues clamped to zero). An exactly zero input yields an exactly zero
// factor.
Mat psd_sqrt(const SymMat& s);

// (R + G^T Pi G)^{-1} G^T Pi, the gain form used by every greedy controller.
Mat woodbury_gain(const SymMat& r, const Mat& g, const SymMat& pi);
// R^{-1} G^T (G R^{-1} G^T + Pi^{-1})^{-1}; equal to woodbury_gain for PD
// R and Pi. Uses explicit inverses and exists for equivalence checks.
Mat woodbury_gain_alt(const SymMat& r, const Mat& g, const SymMat& pi);

void require_square(const Mat& m, const char* name);
void require_same_shape(const Mat& a, const Mat& b, const char* what);

}  // namespace lqrl
