#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

#include "lcl/resolvent.hpp"

using namespace lcl;

namespace {

// Direct (Y^* Y - w)^{-1} and (Y Y^* - w)^{-1} of the matrix with the given rows / columns deleted.
std::pair<MatrixXc, MatrixXc> direct_minor(const MatrixXc& y, Complex w, const std::vector<Index>& T,
                                           const std::vector<Index>& U) {
  const Index N = y.rows();
  std::vector<Index> rows, cols;
  for (Index i = 0; i < N; ++i) {
    if (std::find(U.begin(), U.end(), i) == U.end()) rows.push_back(i);
    if (std::find(T.begin(), T.end(), i) == T.end()) cols.push_back(i);
  }
  MatrixXc a(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) a(r, c) = y(rows[r], cols[c]);
  const MatrixXc g = (a.adjoint() * a - w * MatrixXc::Identity(a.cols(), a.cols())).inverse();
  const MatrixXc gc = (a * a.adjoint() - w * MatrixXc::Identity(a.rows(), a.rows())).inverse();
  MatrixXc G = MatrixXc::Zero(N, N), Gc = MatrixXc::Zero(N, N);
  for (std::size_t i = 0; i < cols.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) G(cols[i], cols[j]) = g(i, j);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) Gc(rows[i], rows[j]) = gc(i, j);
  return {G, Gc};
}

}  // namespace

TEST_SUITE("resolvent") {
  TEST_CASE("hermitize paths agree and m matches the trace of the resolvent") {
    const SampleMatrix x = sample_matrix({EnsembleKind::GinibreReal, 40, 3});
    const Complex z{0.3, 0.4};
    const HermitizedSpectrum a = hermitize(x, z, true);
    const HermitizedSpectrum b = hermitize(x, z, false, HermitizeMethod::HermitianProduct);
    REQUIRE(a.eigenvalues.size() == 40);
    for (Index i = 1; i < 40; ++i) CHECK(a.eigenvalues(i) >= a.eigenvalues(i - 1));
    CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() < 1e-12 * a.eigenvalues.maxCoeff());

    const MatrixXc y = shifted(x.entries, z);
    const MatrixXc yy = y.adjoint() * y;
    const SpectralPoint w{0.8, 0.05};
    const Complex direct = (yy - w.w() * MatrixXc::Identity(40, 40)).inverse().trace() / 40.0;
    CHECK(std::abs(m_empirical(a, w) - direct) < 1e-12);

    // Eigenvectors diagonalize Y^* Y.
    const MatrixXc& V = *a.eigenvectors;
    const MatrixXc D = V.adjoint() * yy * V;
    CHECK((D - MatrixXc(a.eigenvalues.cast<Complex>().asDiagonal())).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(m_empirical(a, {0.8, 0.0}), std::invalid_argument);
  }

  TEST_CASE("green functions of minors against direct inverses") {
    const SampleMatrix x = sample_matrix({EnsembleKind::GinibreComplex, 12, 5});
    const Complex z{0.5, 0.0};
    const SpectralPoint w{1.1, 0.2};
    const MatrixXc y = shifted(x.entries, z);
    for (const MinorSpec& m : {MinorSpec{}, MinorSpec{{2}, {}}, MinorSpec{{}, {7}}, MinorSpec{{1, 4}, {4, 9}}}) {
      const GreenPair g = green_entries(x, z, w, m);
      const auto [G, Gc] = direct_minor(y, w.w(), m.T, m.U);
      CHECK((g.G - G).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((g.Gcal - Gc).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_AS(MinorSpec({{12}, {}}).validate(12), std::invalid_argument);
    CHECK_THROWS_AS(MinorSpec({{1, 1}, {}}).validate(12), std::invalid_argument);
    CHECK_THROWS_AS(MinorSpec({{0, 1, 2, 3}, {4, 5, 6}}).validate(12), std::invalid_argument);
  }

  TEST_CASE("identity suite") {
    for (EnsembleKind kind : {EnsembleKind::GinibreReal, EnsembleKind::Rademacher, EnsembleKind::Laplace})
      for (double r : {0.0, 0.5, 1.5}) {
        const SampleMatrix x = sample_matrix({kind, 30, 11});
        const IdentityReport rep = identity_suite(x, r, {0.9, 0.03});
        CAPTURE(r);
        CHECK(rep.max_identity_residual() <= 1e-10);
        CHECK(rep.min_inequality_slack() >= -1e-12);
      }
    const SampleMatrix big = sample_matrix({EnsembleKind::GinibreReal, 401, 1});
    CHECK_THROWS_AS(identity_suite(big, 0.5, {1.0, 0.1}), std::invalid_argument);
  }

  TEST_CASE("S(alpha) grid") {
    const SGrid g = build_sgrid(0.5, 256, 1.0, 8, 6);
    REQUIRE(g.E_points.size() == 8);
    const double phi = reference_phi(256);
    CHECK(phi == doctest::Approx(std::pow(std::log(256.0), std::log(std::log(256.0)))));
    for (std::size_t k = 0; k < g.E_points.size(); ++k) {
      const double E = g.E_points[k];
      const double floor = g.eta_floor[k];
      // Fixed point of the floor equation.
      CHECK(floor * 256 * std::abs(mc({E, floor}, 0.5)) == doctest::Approx(phi).epsilon(1e-8));
      for (double eta : g.eta_points[k]) {
        CHECK(in_sgrid(g, E, eta));
        CHECK(eta <= 10.0);
      }
    }
    CHECK_FALSE(in_sgrid(g, g.E_points[0], g.eta_floor[0] * 0.5));
  }

  TEST_CASE("large eta agreement") {
    const SampleMatrix x = sample_matrix({EnsembleKind::GinibreComplex, 256, 2});
    const HermitizedSpectrum s = hermitize(x, 0.5, false);
    for (double E : {0.0, 1.0, 4.0, 20.0}) CHECK(std::abs(m_empirical(s, {E, 10.0}) - mc({E, 10.0}, 0.5)) < 10.0 / 16.0);
  }

  TEST_CASE("local law sweep gate and shape") {
    const SGrid g = build_sgrid(0.5, 64, 0.0, 4, 5);
    CHECK_THROWS_AS(local_law_sweep({EnsembleKind::GinibreComplex, 64, 0}, 0.98, g, {1}), HypothesisError);
    const LocalLawReport rep = local_law_sweep({EnsembleKind::GinibreComplex, 64, 0}, 0.5, g, {1, 2, 3}, 2, 4);
    CHECK(rep.points.size() == g.size());
    CHECK(rep.entry_points.size() <= 4);
    for (const auto& p : rep.points) {
      CHECK(p.median_NetaLambda >= 0);
      CHECK(p.max_NetaLambda >= p.median_NetaLambda);
    }
    // Thread count does not change the result.
    const LocalLawReport one = local_law_sweep({EnsembleKind::GinibreComplex, 64, 0}, 0.5, g, {1, 2, 3}, 1, 4);
    for (std::size_t i = 0; i < rep.points.size(); ++i) CHECK(rep.points[i].median_NetaLambda == one.points[i].median_NetaLambda);
  }

  TEST_CASE("conditional expectation of the quadratic form") {
    const SampleMatrix x = sample_matrix({EnsembleKind::Rademacher, 30, 4});
    const McErrorReport r = conditional_expectation_check(x, EnsembleKind::Rademacher, 0.6, {1.0, 0.2}, 3, 8, 4000, 17);
    CHECK(r.resamples == 4000);
    CHECK(r.deviation <= 5.0 * r.standard_error);
    CHECK_THROWS_AS(conditional_expectation_check(x, EnsembleKind::Rademacher, 0.6, {1.0, 0.2}, 3, 8, 10, 17),
                    std::invalid_argument);
  }
}
