#include <cmath>
#include <vector>

#include "doctest.h"
#include "gaplab/edge_states.hpp"
#include "gaplab/hamiltonian.hpp"

using namespace gaplab;

namespace {
edge::EdgeData e1_data() {
  return edge::make_edge_data(model::build_kappa_example(1, 1, 1, 0.5, 2));
}
edge::EdgeData aklt_data() { return edge::make_edge_data(model::builtin_aklt()); }

// Minimal one-dimensional product instance ((1), (0)); its boundary spaces
// are one-dimensional and every window density is the pure product state.
model::ClassATuple product_tuple() {
  model::ClassATuple t;
  t.n = 2;
  t.n0 = 1;
  t.tetrad.wo.kR = 0;
  t.tetrad.wo.kL = 0;
  t.tetrad.wo.lambda = Vec::Ones(1);
  t.tetrad.Y = Mat::Zero(1, 1);
  t.B = {Mat::Identity(1, 1), Mat::Zero(1, 1)};
  return t;
}

Mat window_identity(const edge::EdgeData& ed, int l) {
  Index dim = 1;
  for (int i = 0; i < l; ++i) dim *= ed.n;
  return Mat::Identity(dim, dim);
}
}  // namespace

TEST_CASE("edge maps fix the identity at the transfer fixed points") {
  for (const auto& ed : {e1_data(), aklt_data()}) {
    for (int l = 1; l <= 3; ++l) {
      Mat one = window_identity(ed, l);
      CHECK((edge::edge_map(ed, edge::Side::L, one) - ed.triple.rho).norm() <=
            1e-10);
      CHECK((edge::edge_map(ed, edge::Side::R, one) - ed.triple.e).norm() <=
            1e-10);
    }
  }
}

TEST_CASE("single-site edge map matches its defining sum") {
  edge::EdgeData ed = e1_data();
  Mat A = la::unit(2, 0, 0);  // |psi_0><psi_0|
  Mat left = edge::edge_map(ed, edge::Side::L, A);
  CHECK((left - ed.t.B[0].adjoint() * ed.triple.rho * ed.t.B[0]).norm() <=
        1e-12);
  Mat right = edge::edge_map(ed, edge::Side::R, A);
  CHECK((right - ed.t.B[0] * ed.triple.e * ed.t.B[0].adjoint()).norm() <=
        1e-12);
}

TEST_CASE("edge maps preserve positivity") {
  edge::EdgeData ed = aklt_data();
  la::Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    Mat A = rng.psd(9);  // window length 2
    for (auto side : {edge::Side::L, edge::Side::R}) {
      Mat out = edge::edge_map(ed, side, A);
      CHECK((out - out.adjoint()).norm() <= 1e-10 * std::max(1.0, out.norm()));
      CHECK(la::eig_hermitian((out + out.adjoint()) / 2).values.minCoeff() >=
            -1e-10);
    }
  }
}

TEST_CASE("boundary states are normalized and positive") {
  edge::EdgeData ed = e1_data();
  la::Rng rng(12);
  Mat X = ed.p * rng.gauss_mat(3, 3) * ed.q;
  for (auto [side, sig] :
       {std::pair{edge::Side::L, edge::sigma_L_of_X(ed, X)},
        std::pair{edge::Side::R, edge::sigma_R_of_X(ed, X)}}) {
    CHECK(std::abs(sig.trace() - cd(1, 0)) <= 1e-12);
    CHECK(la::eig_hermitian((sig + sig.adjoint()) / 2).values.minCoeff() >=
          -1e-12);
    CHECK(std::abs(edge::xi_state(ed, side, sig, window_identity(ed, 2)) -
                   cd(1, 0)) <= 1e-10);
  }
  CHECK_THROWS_AS(edge::sigma_L_of_X(ed, Mat::Zero(3, 3)), math_reject);
}

TEST_CASE("boundary states annihilate every embedded interaction term") {
  edge::EdgeData ed = e1_data();
  int m = 4, l = 6;
  Mat Fm = ham::make_h_apply(ed.t.B, m, m).Fm;
  Mat h = Mat::Identity(Fm.rows(), Fm.rows()) - Fm * Fm.adjoint();
  la::Rng rng(13);
  std::vector<Mat> sigmas;
  sigmas.push_back(Mat::Identity(2, 2) / 2.0);
  Mat X = ed.p * rng.gauss_mat(3, 3) * ed.q;
  for (int offset = 0; offset + m <= l; ++offset) {
    Index left = 1, right = 1;
    for (int i = 0; i < offset; ++i) left *= ed.n;
    for (int i = 0; i < l - m - offset; ++i) right *= ed.n;
    Mat A = la::kron(Mat::Identity(left, left),
                     la::kron(h, Mat::Identity(right, right)));
    for (int pad = 0; pad <= 2; ++pad) {
      CHECK(std::abs(edge::xi_state(ed, edge::Side::L,
                                    edge::sigma_L_of_X(ed, X), A, pad)) <=
            1e-10);
      CHECK(std::abs(edge::xi_state(ed, edge::Side::R,
                                    edge::sigma_R_of_X(ed, X), A, pad)) <=
            1e-10);
      CHECK(std::abs(edge::xi_state(ed, edge::Side::L, sigmas[0], A, pad)) <=
            1e-10);
    }
  }
}

TEST_CASE("bulk state: normalization, translation invariance, edge pairing") {
  for (const auto& ed : {e1_data(), aklt_data()}) {
    CHECK(std::abs(edge::omega_infty(ed, window_identity(ed, 1)) - cd(1, 0)) <=
          1e-12);
    la::Rng rng(14);
    Mat A = rng.herm(ed.n);
    cd w = edge::omega_infty(ed, A);
    Mat one = Mat::Identity(ed.n, ed.n);
    CHECK(std::abs(edge::omega_infty(ed, la::kron(one, A)) - w) <= 1e-12);
    CHECK(std::abs(edge::omega_infty(ed, la::kron(A, one)) - w) <= 1e-12);
    // Both edge maps compute the same bulk pairing.
    cd viaL = (ed.triple.e * edge::edge_map(ed, edge::Side::L, A)).trace();
    cd viaR = (ed.triple.rho * edge::edge_map(ed, edge::Side::R, A)).trace();
    CHECK(std::abs(viaL - w) <= 1e-12);
    CHECK(std::abs(viaR - w) <= 1e-12);
  }
}

TEST_CASE("bulk state matches the corner-word formula") {
  for (const auto& ed : {e1_data(), aklt_data()}) {
    model::BulkTuple bt = model::extract_bulk_tuple(ed.t);
    int d = static_cast<int>(ed.t.tetrad.dim());
    Mat corner = la::unit(d, ed.t.tetrad.wo.kR, ed.t.tetrad.wo.kR);
    std::vector<Mat> X;
    for (const Mat& om : bt.omega) X.push_back(la::kron(om, corner));
    la::Rng rng(15);
    for (int l = 1; l <= 2; ++l) {
      Index dim = 1;
      for (int i = 0; i < l; ++i) dim *= ed.n;
      Mat A = rng.herm(dim);
      cd direct = edge::omega_infty(ed, A);
      cd oracle = 0;
      for (Index w = 0; w < dim; ++w)
        for (Index v = 0; v < dim; ++v) {
          Mat Xw = Mat::Identity(ed.k, ed.k), Xv = Xw;
          Index rw = w, rv = v, stride = dim / ed.n;
          for (int x = 0; x < l; ++x) {
            Xw = Xw * X[static_cast<size_t>(rw / stride)];
            Xv = Xv * X[static_cast<size_t>(rv / stride)];
            rw %= stride;
            rv %= stride;
            stride /= ed.n;
          }
          oracle += A(w, v) *
                    (ed.triple.rho * Xw * ed.triple.e * Xv.adjoint()).trace();
        }
      CHECK(std::abs(direct - oracle) <= 1e-10 * std::max(1.0, std::abs(oracle)));
    }
  }
}

TEST_CASE("pair expectation agrees with explicit identity padding") {
  edge::EdgeData ed = e1_data();
  la::Rng rng(16);
  Mat A = rng.herm(2), C = rng.herm(2);
  Mat one = Mat::Identity(2, 2);
  CHECK(std::abs(edge::omega_infty_pair(ed, A, 0, C) -
                 edge::omega_infty(ed, la::kron(A, C))) <= 1e-12);
  CHECK(std::abs(edge::omega_infty_pair(ed, A, 2, C) -
                 edge::omega_infty(ed, la::kron(A, la::kron(one, la::kron(one, C))))) <=
        1e-12);
}

TEST_CASE("spin-1 two-point function: exact values and fitted rate") {
  edge::EdgeData ed = aklt_data();
  Mat Sz = Mat::Zero(3, 3);
  Sz(0, 0) = 1;
  Sz(2, 2) = -1;
  edge::CorrelationReport rep = edge::correlation_decay(ed, Sz, Sz, 12);
  CHECK(!rep.fit_skipped);
  CHECK(rep.transfer_second == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  for (int r = 1; r <= 4; ++r)
    CHECK(rep.values[static_cast<size_t>(r - rep.r_min)] ==
          doctest::Approx((4.0 / 3.0) * std::pow(1.0 / 3.0, r)).epsilon(1e-10));
  CHECK(rep.fit.s == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(rep.rate_accuracy <= 0.02);
}

TEST_CASE("product-like bulk has identically vanishing correlators") {
  edge::EdgeData ed = e1_data();
  Mat P2 = la::unit(2, 1, 1);
  edge::CorrelationReport rep = edge::correlation_decay(ed, P2, P2, 10);
  CHECK(rep.fit_skipped);
  for (double v : rep.values) CHECK(v <= 1e-13);
  // The identity observable never correlates with anything.
  edge::CorrelationReport triv =
      edge::correlation_decay(ed, Mat::Identity(2, 2), Mat::Identity(2, 2), 8);
  CHECK(triv.fit_skipped);
}

TEST_CASE("finite-chain window densities match a dense kernel oracle") {
  edge::EdgeData ed = e1_data();
  int m = 4, l = 3;
  edge::WindowReport rep =
      edge::finite_chain_window(ed, m, {6, 7, 8, 9, 10}, l);
  for (size_t i = 0; i < rep.N_list.size(); ++i) {
    int N = rep.N_list[i];
    ham::SpectrumReport sp = ham::exact_spectrum(ed.t.B, m, N);
    Index wl = 1, tail = 1;
    for (int x = 0; x < l; ++x) wl *= ed.n;
    for (int x = 0; x < N - l; ++x) tail *= ed.n;
    Mat red = Mat::Zero(wl, wl);
    for (Index c = 0; c < sp.kernel.frame.cols(); ++c) {
      Vec col = sp.kernel.frame.col(c);
      for (Index w = 0; w < wl; ++w)
        for (Index v = 0; v < wl; ++v)
          for (Index s = 0; s < tail; ++s)
            red(w, v) += col(w * tail + s) * std::conj(col(v * tail + s));
    }
    red /= static_cast<double>(sp.kernel.frame.cols());
    CHECK((rep.reduced[i] - red).norm() <= 1e-12);
  }
  CHECK(std::abs(rep.limit.trace() - cd(1, 0)) <= 1e-10);
  for (size_t i = 1; i < rep.trace_distances.size(); ++i)
    CHECK(rep.trace_distances[i] < rep.trace_distances[i - 1]);
  CHECK(rep.fit.s > 0);
  CHECK(rep.fit.s < 1);
}

TEST_CASE("limit window spectra stay bounded away from zero") {
  edge::EdgeData ed = e1_data();
  edge::WindowReport rep = edge::finite_chain_window(ed, 4, {12}, 6);
  REQUIRE(rep.support_floor.size() == 6);
  for (int l = 1; l <= 6; ++l) {
    double expect = (std::pow(4.0, l) - 1.0) / (2.0 * std::pow(4.0, l));
    CHECK(rep.support_floor[static_cast<size_t>(l - 1)] ==
          doctest::Approx(expect).epsilon(1e-9));
    CHECK(rep.support_floor[static_cast<size_t>(l - 1)] > 0);
  }
}

TEST_CASE("product instance: window densities are exactly the limit") {
  edge::EdgeData ed = edge::make_edge_data(product_tuple());
  edge::WindowReport rep = edge::finite_chain_window(ed, 1, {4, 5, 6}, 2);
  for (double d : rep.trace_distances) CHECK(d <= 1e-13);
  CHECK(rep.fit.skipped);
  edge::TranslationOverlapReport ov =
      edge::translation_overlap(ed, Mat::Identity(1, 1));
  CHECK(ov.found);
  CHECK(ov.N == 1);
  CHECK(ov.overlaps[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("boundary expectations approach the bulk value at the decay rate") {
  edge::EdgeData ed = e1_data();
  la::Rng rng(17);
  Mat A = rng.herm(2);
  cd w = edge::omega_infty(ed, A);
  for (auto side : {edge::Side::L, edge::Side::R}) {
    Mat sig = Mat::Identity(2, 2) / 2.0;
    std::vector<double> dist;
    for (int pad = 0; pad <= 5; ++pad)
      dist.push_back(std::abs(edge::xi_state(ed, side, sig, A, pad) - w));
    for (size_t i = 1; i < dist.size(); ++i) {
      if (dist[i - 1] <= 1e-13) continue;
      CHECK(dist[i] / dist[i - 1] <= ed.triple.s + 1e-9);
    }
  }
}

TEST_CASE("translated boundary overlaps appear at finite chain length") {
  edge::EdgeData ed = e1_data();
  edge::TranslationOverlapReport mixed =
      edge::translation_overlap(ed, Mat::Identity(2, 2) / 2.0);
  CHECK(mixed.found);
  CHECK(mixed.N == 1);
  CHECK(mixed.overlaps[1] == doctest::Approx(0.5).epsilon(1e-9));
  Mat pure = la::unit(2, 0, 0);
  edge::TranslationOverlapReport pr = edge::translation_overlap(ed, pure);
  CHECK(pr.found);
  CHECK(pr.N <= 3);
}

TEST_CASE("edge distinguishability separates distinct boundary states") {
  edge::EdgeData ed = e1_data();
  Mat s1 = la::unit(2, 0, 0), s2 = la::unit(2, 1, 1);
  CHECK(edge::edge_distinguishability(ed, edge::Side::L, s1, s1) <= 1e-12);
  CHECK(edge::edge_distinguishability(ed, edge::Side::L, s1, s2) ==
        doctest::Approx(1.875).epsilon(1e-9));
  la::Rng rng(9);
  Mat a = rng.psd(2), b = rng.psd(2);
  a /= a.trace().real();
  b /= b.trace().real();
  double val = edge::edge_distinguishability(ed, edge::Side::L, a, b);
  CHECK(val == doctest::Approx(1.24491081647).epsilon(1e-6));
  CHECK(val > 1e-6);
}
