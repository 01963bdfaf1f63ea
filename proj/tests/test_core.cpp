#include <cmath>

#include "doctest.h"
#include "gaplab/linalg.hpp"

using namespace gaplab;

TEST_CASE("orthonormal_span produces an orthonormal frame of the right rank") {
  la::Rng rng(1);
  // Three vectors, the third a combination of the first two: rank 2.
  Vec a = rng.gauss_vec(5), b = rng.gauss_vec(5);
  Vec c = 2.0 * a - cd(0, 1) * b;
  la::Subspace s = la::orthonormal_span({a, b, c});
  CHECK(s.ambient == 5);
  CHECK(s.dim() == 2);
  Mat gram = s.frame.adjoint() * s.frame;
  CHECK((gram - Mat::Identity(2, 2)).norm() <= 1e-12);
  // Each original vector lies in the span.
  for (const Vec& v : {a, b, c}) {
    Vec res = v - s.frame * (s.frame.adjoint() * v);
    CHECK(res.norm() <= 1e-10 * v.norm());
  }
}

TEST_CASE("orthonormal_span of nothing has dimension zero") {
  la::Subspace s = la::orthonormal_span(std::vector<Vec>{});
  CHECK(s.dim() == 0);
  la::Subspace z = la::orthonormal_span({Vec::Zero(4)});
  CHECK(z.dim() == 0);
}

TEST_CASE("eig_hermitian reconstructs the input and sorts ascending") {
  la::Rng rng(2);
  Mat H = rng.herm(7);
  la::EigH e = la::eig_hermitian(H);
  Mat rec = e.frame * e.values.asDiagonal() * e.frame.adjoint();
  CHECK((rec - H).norm() <= 1e-10 * std::max(1.0, H.norm()));
  for (Index i = 0; i + 1 < e.values.size(); ++i)
    CHECK(e.values(i) <= e.values(i + 1) + 1e-14);
  CHECK_THROWS_AS(la::eig_hermitian(rng.gauss_mat(4, 4)), math_reject);
}

TEST_CASE("support_and_pinv splits a PSD matrix with a kernel") {
  la::Rng rng(3);
  Mat g = rng.gauss_mat(6, 3);
  Mat A = g * g.adjoint();  // rank 3 PSD in M_6
  la::SupportPinv sp = la::support_and_pinv(A);
  CHECK(sp.rank == 3);
  CHECK((sp.support * sp.support - sp.support).norm() <= 1e-12);
  CHECK((sp.support - sp.support.adjoint()).norm() <= 1e-12);
  CHECK((A * sp.pinv - sp.support).norm() <= 1e-9 * A.norm());
  CHECK((sp.pinv * A - sp.support).norm() <= 1e-9 * A.norm());
  // Distinctly non-PSD input is rejected.
  Mat neg = -Mat::Identity(3, 3);
  CHECK_THROWS_AS(la::support_and_pinv(neg), math_reject);
}

TEST_CASE("subspace_distance: identical, orthogonal, and mixed cases") {
  Mat I4 = Mat::Identity(4, 4);
  la::Subspace e01{4, I4.leftCols(2)};
  la::Subspace e01b{4, I4.leftCols(2)};
  la::Subspace e23{4, I4.rightCols(2)};
  CHECK(la::subspace_distance(e01, e01b) <= 1e-14);
  CHECK(la::subspace_distance(e01, e23) == doctest::Approx(1.0).epsilon(1e-12));
  // Dimension mismatch saturates at 1.
  la::Subspace e0{4, I4.leftCols(1)};
  CHECK(la::subspace_distance(e01, e0) == doctest::Approx(1.0).epsilon(1e-12));
  // 45-degree rotated line against a coordinate line.
  Mat f(2, 1);
  f << cd(std::sqrt(0.5), 0), cd(std::sqrt(0.5), 0);
  la::Subspace diag{2, f};
  la::Subspace x0{2, Mat::Identity(2, 2).leftCols(1)};
  CHECK(la::subspace_distance(diag, x0) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("min_nonzero_eig picks the smallest eigenvalue above the cut") {
  Mat H = Mat::Zero(3, 3);
  H(1, 1) = 0.3;
  H(2, 2) = 1.0;
  auto v = la::min_nonzero_eig(H, 1e-9);
  REQUIRE(v.has_value());
  CHECK(*v == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(!la::min_nonzero_eig(Mat::Zero(3, 3), 1e-9).has_value());
}

TEST_CASE("kron/vec/unvec satisfy the vectorization identity") {
  la::Rng rng(4);
  Mat A = rng.gauss_mat(3, 4), X = rng.gauss_mat(4, 2), B = rng.gauss_mat(2, 5);
  // Column-major convention: vec(A X B) = (B^T (x) A) vec(X).
  Vec lhs = la::vec(A * X * B);
  Vec rhs = la::kron(B.transpose(), A) * la::vec(X);
  CHECK((lhs - rhs).norm() <= 1e-12 * lhs.norm());
  CHECK((la::unvec(la::vec(X), 4, 2) - X).norm() <= 1e-15);
}

TEST_CASE("norms and trace distance against hand values") {
  Mat D = Mat::Zero(3, 3);
  D(0, 0) = 3;
  D(1, 1) = -4;
  CHECK(la::op_norm(D) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(la::hs_norm(D) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(la::trace_norm(D) == doctest::Approx(7.0).epsilon(1e-12));
  Mat r1 = Mat::Zero(2, 2), r2 = Mat::Zero(2, 2);
  r1(0, 0) = 1;
  r2(1, 1) = 1;
  CHECK(la::trace_distance(r1, r1) <= 1e-14);
  CHECK(la::trace_distance(r1, r2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("psd_sqrt squares back to the input") {
  la::Rng rng(5);
  Mat A = rng.psd(6);
  Mat S = la::psd_sqrt(A);
  CHECK((S * S - A).norm() <= 1e-10 * std::max(1.0, A.norm()));
  CHECK((S - S.adjoint()).norm() <= 1e-12 * std::max(1.0, S.norm()));
}

TEST_CASE("fit_decay recovers an exact geometric series") {
  std::vector<double> series;
  for (int i = 0; i < 12; ++i) series.push_back(2.0 * std::pow(0.3, i));
  la::DecayFit fit = la::fit_decay(series, 2);
  CHECK(!fit.skipped);
  CHECK(fit.s == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(fit.C == doctest::Approx(2.0).epsilon(1e-8));
  // The returned C is an envelope: pointwise domination past burn-in.
  for (size_t i = 2; i < series.size(); ++i)
    CHECK(series[i] <= fit.C * std::pow(fit.s, double(i)) + 1e-15);
}

TEST_CASE("fit_decay skips empty and all-zero series") {
  CHECK(la::fit_decay({}, 2).skipped);
  CHECK(la::fit_decay({0.0, 0.0, 0.0, 0.0, 0.0}, 2).skipped);
  // Constant series fits rate 1.
  la::DecayFit f = la::fit_decay({1.0, 1.0, 1.0, 1.0, 1.0, 1.0}, 2);
  CHECK(!f.skipped);
  CHECK(f.s == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("seeded rng is deterministic and produces the advertised ensembles") {
  la::Rng r1(42), r2(42);
  Mat m1 = r1.gauss_mat(4, 4), m2 = r2.gauss_mat(4, 4);
  CHECK((m1 - m2).norm() == 0.0);
  Mat h = r1.herm(5);
  CHECK((h - h.adjoint()).norm() <= 1e-14);
  Mat p = r1.psd(5);
  la::EigH e = la::eig_hermitian(p);
  CHECK(e.values.minCoeff() >= -1e-12);
}
