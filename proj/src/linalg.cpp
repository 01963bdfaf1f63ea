#include "gaplab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace gaplab::la {

namespace {

Subspace span_from_matrix(const Mat& A, double tol) {
  Subspace out;
  out.ambient = A.rows();
  if (A.cols() == 0 || A.rows() == 0) {
    out.frame = Mat::Zero(A.rows(), 0);
    return out;
  }
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  double smax = sv.size() > 0 ? sv(0) : 0.0;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * smax && sv(i) > 0) ++rank;
  }
  out.frame = svd.matrixU().leftCols(rank);
  return out;
}

}  // namespace

Subspace orthonormal_span_cols(const Mat& columns, double tol) {
  return span_from_matrix(columns, tol);
}

Subspace orthonormal_span(const std::vector<Vec>& vectors, double tol) {
  if (vectors.empty()) {
    Subspace out;
    out.ambient = 0;
    out.frame = Mat::Zero(0, 0);
    return out;
  }
  Index amb = vectors[0].size();
  Mat A(amb, static_cast<Index>(vectors.size()));
  for (size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != amb)
      throw dimension_error("orthonormal_span: vectors of unequal dimension");
    A.col(static_cast<Index>(j)) = vectors[j];
  }
  return span_from_matrix(A, tol);
}

Subspace orthonormal_span_mats(const std::vector<Mat>& mats, double tol) {
  std::vector<Vec> vs;
  vs.reserve(mats.size());
  for (const auto& m : mats) vs.push_back(vec(m));
  return orthonormal_span(vs, tol);
}

EigH eig_hermitian(const Mat& H, double herm_tol) {
  if (H.rows() != H.cols())
    throw dimension_error("eig_hermitian: matrix is not square");
  double scale = std::max(H.norm(), 1.0);
  double dev = (H - H.adjoint()).norm();
  if (dev > herm_tol * scale)
    throw math_reject("eig_hermitian: input is not Hermitian (deviation " +
                      std::to_string(dev) + ")");
  Mat Hs = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(Hs);
  if (es.info() != Eigen::Success)
    throw math_reject("eig_hermitian: eigensolver failed to converge");
  EigH out;
  out.values = es.eigenvalues();
  out.frame = es.eigenvectors();
  return out;
}

SupportPinv support_and_pinv(const Mat& A, double tol) {
  EigH e = eig_hermitian(A);
  Index k = A.rows();
  double top = 0.0;
  for (Index i = 0; i < e.values.size(); ++i)
    top = std::max(top, std::abs(e.values(i)));
  SupportPinv out;
  out.support = Mat::Zero(k, k);
  out.pinv = Mat::Zero(k, k);
  if (top == 0.0) return out;
  for (Index i = 0; i < e.values.size(); ++i) {
    double lam = e.values(i);
    if (lam < -tol * top)
      throw math_reject("support_and_pinv: input is not PSD (eigenvalue " +
                        std::to_string(lam) + ")");
    if (lam > tol * top) {
      Vec u = e.frame.col(i);
      out.support += u * u.adjoint();
      out.pinv += (1.0 / lam) * u * u.adjoint();
      ++out.rank;
    }
  }
  return out;
}

double subspace_distance(const Subspace& U, const Subspace& V) {
  if (U.ambient != V.ambient)
    throw dimension_error("subspace_distance: ambient dimensions differ");
  if (U.dim() == 0 && V.dim() == 0) return 0.0;
  if (U.dim() == 0 || V.dim() == 0) return 1.0;
  // ||(1-P_V)U|| and ||(1-P_U)V|| via thin residuals.
  Mat ru = U.frame - V.frame * (V.frame.adjoint() * U.frame);
  Mat rv = V.frame - U.frame * (U.frame.adjoint() * V.frame);
  double d = std::max(op_norm(ru), op_norm(rv));
  return std::min(d, 1.0);
}

std::optional<double> min_nonzero_eig(const Mat& H, double zero_tol) {
  EigH e = eig_hermitian(H);
  if (e.values.size() > 0 && e.values(0) < -zero_tol)
    throw math_reject("min_nonzero_eig: negative eigenvalue " +
                      std::to_string(e.values(0)));
  for (Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) > zero_tol) return e.values(i);
  }
  return std::nullopt;
}

Mat kron(const Mat& A, const Mat& B) {
  Mat out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

Vec vec(const Mat& X) {
  return Eigen::Map<const Vec>(X.data(), X.size());
}

Mat unvec(const Vec& x, Index rows, Index cols) {
  if (x.size() != rows * cols)
    throw dimension_error("unvec: size mismatch");
  return Eigen::Map<const Mat>(x.data(), rows, cols);
}

double op_norm(const Mat& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(A);
  return svd.singularValues()(0);
}

double hs_norm(const Mat& A) { return A.norm(); }

Mat dagger(const Mat& A) { return A.adjoint(); }

Mat psd_sqrt(const Mat& A, double tol) {
  EigH e = eig_hermitian(A);
  Index k = A.rows();
  double top = 0.0;
  for (Index i = 0; i < e.values.size(); ++i)
    top = std::max(top, std::abs(e.values(i)));
  Mat out = Mat::Zero(k, k);
  for (Index i = 0; i < e.values.size(); ++i) {
    double lam = e.values(i);
    if (lam < -tol * top)
      throw math_reject("psd_sqrt: input is not PSD");
    if (lam > 0) out += std::sqrt(lam) * e.frame.col(i) * e.frame.col(i).adjoint();
  }
  return out;
}

Mat unit(Index k, Index i, Index j) {
  Mat out = Mat::Zero(k, k);
  out(i, j) = 1.0;
  return out;
}

double trace_norm(const Mat& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(A);
  return svd.singularValues().sum();
}

double trace_distance(const Mat& A, const Mat& B) {
  return 0.5 * trace_norm(A - B);
}

DecayFit fit_decay(const std::vector<double>& values, int burn_in) {
  DecayFit out;
  out.burn_in = burn_in;
  std::vector<std::pair<double, double>> pts;  // (index, log value)
  for (size_t i = static_cast<size_t>(std::max(burn_in, 0)); i < values.size();
       ++i) {
    if (values[i] > 1e-300) pts.push_back({double(i), std::log(values[i])});
  }
  if (pts.size() < 2) {
    out.skipped = true;
    return out;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = double(pts.size());
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) {
    out.skipped = true;
    return out;
  }
  double slope = (n * sxy - sx * sy) / denom;
  double inter = (sy - slope * sx) / n;
  out.s = std::exp(slope);
  out.C = std::exp(inter);
  // Raise C so C*s^i dominates every fitted point.
  double worst = 0.0;
  for (auto& [x, y] : pts) {
    double pred = inter + slope * x;
    worst = std::max(worst, y - pred);
    out.log_residual = std::max(out.log_residual, std::abs(y - pred));
  }
  out.C *= std::exp(worst) * (1.0 + 1e-12);
  return out;
}

Vec Rng::gauss_vec(Index k) {
  Vec v(k);
  for (Index i = 0; i < k; ++i) v(i) = cgauss();
  return v;
}

Mat Rng::gauss_mat(Index r, Index c) {
  Mat m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = cgauss();
  return m;
}

Mat Rng::herm(Index k) {
  Mat g = gauss_mat(k, k);
  return 0.5 * (g + g.adjoint());
}

Mat Rng::psd(Index k) {
  Mat g = gauss_mat(k, k);
  return g * g.adjoint();
}

}  // namespace gaplab::la
