#include "lqrl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lqrl {

namespace {

void require_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) throw Error(std::string(what) + ": non-finite entry");
}

void require_nonempty(const Mat& m, const char* what) {
  if (m.size() == 0) throw DimensionError(std::string(what) + ": empty matrix");
}

}  // namespace

void require_square(const Mat& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(name) + " must be square, got " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()));
  }
}

void require_same_shape(const Mat& a, const Mat& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
}

SymMat::SymMat(const Mat& m, double tol) {
  require_square(m, "SymMat");
  require_finite(m, "SymMat");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
    throw Error("SymMat: matrix is not symmetric");
  }
  m_ = m;
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m_.cols(); ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m_(i, j) = v;
      m_(j, i) = v;
    }
  }
}

SymMat SymMat::zero(Eigen::Index dim) { return SymMat(Mat::Zero(dim, dim)); }

SymMat SymMat::identity(Eigen::Index dim, double scale) {
  return SymMat(scale * Mat::Identity(dim, dim));
}

SymMat SymMat::diagonal(const Vec& d) { return SymMat(Mat(d.asDiagonal())); }

double SymMat::quad(const Vec& x) const {
  if (x.size() != dim()) throw DimensionError("SymMat::quad: vector size mismatch");
  return x.dot(m_ * x);
}

SymMat SymMat::rank_one_update(double scale, const Vec& v) const {
  if (v.size() != dim()) throw DimensionError("rank_one_update: vector size mismatch");
  SymMat out = *this;
  for (Eigen::Index i = 0; i < dim(); ++i) {
    for (Eigen::Index j = i; j < dim(); ++j) {
      const double e = m_(i, j) + scale * (v(i) * v(j));
      out.m_(i, j) = e;
      out.m_(j, i) = e;
    }
  }
  require_finite(out.m_, "rank_one_update");
  return out;
}

SymMat SymMat::operator+(const SymMat& o) const {
  require_same_shape(m_, o.m_, "SymMat +");
  SymMat out;
  out.m_ = m_ + o.m_;
  return out;
}

SymMat SymMat::operator-(const SymMat& o) const {
  require_same_shape(m_, o.m_, "SymMat -");
  SymMat out;
  out.m_ = m_ - o.m_;
  return out;
}

SymMat SymMat::operator*(double s) const {
  SymMat out;
  out.m_ = s * m_;
  return out;
}

double spectral_norm(const Mat& m) {
  require_nonempty(m, "spectral_norm");
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

double frobenius_norm(const Mat& m) { return m.norm(); }

double min_eigenvalue(const SymMat& s) {
  require_nonempty(s.mat(), "min_eigenvalue");
  Eigen::SelfAdjointEigenSolver<Mat> es(s.mat(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const SymMat& s) {
  require_nonempty(s.mat(), "max_eigenvalue");
  Eigen::SelfAdjointEigenSolver<Mat> es(s.mat(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(s.dim() - 1);
}

double spectral_radius(const Mat& m) {
  require_nonempty(m, "spectral_radius");
  require_square(m, "spectral_radius");
  Eigen::EigenSolver<Mat> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool psd_order_geq(const SymMat& a, const SymMat& b, double tol) {
  require_same_shape(a.mat(), b.mat(), "psd_order_geq");
  return min_eigenvalue(a - b) >= -tol;
}

Mat spd_solve(const SymMat& a, const Mat& rhs) {
  if (rhs.rows() != a.dim()) throw DimensionError("spd_solve: rhs row count mismatch");
  Eigen::LLT<Mat> llt(a.mat());
  if (llt.info() != Eigen::Success) {
    throw DefinitenessError("spd_solve: matrix is not positive definite", min_eigenvalue(a));
  }
  return llt.solve(rhs);
}

Mat psd_sqrt(const SymMat& s) {
  Eigen::SelfAdjointEigenSolver<Mat> es(s.mat());
  const Vec root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

Mat woodbury_gain(const SymMat& r, const Mat& g, const SymMat& pi) {
  if (g.rows() != pi.dim() || g.cols() != r.dim()) {
    throw DimensionError("woodbury_gain: G must be dim(Pi) x dim(R)");
  }
  const SymMat s(r.mat() + g.transpose() * pi.mat() * g);
  return spd_solve(s, g.transpose() * pi.mat());
}

Mat woodbury_gain_alt(const SymMat& r, const Mat& g, const SymMat& pi) {
  if (g.rows() != pi.dim() || g.cols() != r.dim()) {
    throw DimensionError("woodbury_gain_alt: G must be dim(Pi) x dim(R)");
  }
  const Eigen::Index n = pi.dim();
  const Eigen::Index m = r.dim();
  const Mat r_inv = spd_solve(r, Mat::Identity(m, m));
  const Mat pi_inv = spd_solve(pi, Mat::Identity(n, n));
  const SymMat inner(g * r_inv * g.transpose() + pi_inv);
  const Mat inner_inv = spd_solve(inner, Mat::Identity(n, n));
  return r_inv * g.transpose() * inner_inv;
}

}  // namespace lqrl
