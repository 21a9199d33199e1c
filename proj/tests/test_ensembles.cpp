#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "lcl/ensembles.hpp"
#include "lcl/rng.hpp"

using namespace lcl;

namespace {

constexpr EnsembleKind kAll[] = {EnsembleKind::GinibreReal, EnsembleKind::GinibreComplex, EnsembleKind::Rademacher,
                                 EnsembleKind::Uniform, EnsembleKind::Laplace};

}  // namespace

TEST_SUITE("ensembles") {
  TEST_CASE("seeding and stream independence") {
    // Published SplitMix64 outputs for seed 1234567; the generator state is seeded from them.
    std::uint64_t s = 1234567;
    CHECK(splitmix64(s) == 6457827717110365317ULL);
    CHECK(splitmix64(s) == 3203168211198807973ULL);
    Xoshiro256pp a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
      const auto x = a.next();
      CHECK(x == b.next());
      differs |= x != c.next();
    }
    CHECK(differs);
  }

  TEST_CASE("sample_matrix is deterministic") {
    const SampleMatrix x = sample_matrix({EnsembleKind::GinibreReal, 2, 7});
    const SampleMatrix y = sample_matrix({EnsembleKind::GinibreReal, 2, 7});
    CHECK(x.N == 2);
    CHECK(x.is_real);
    CHECK(x.entries == y.entries);
    CHECK(x.entries.imag().isZero(0.0));
    CHECK(sample_matrix({EnsembleKind::GinibreReal, 2, 8}).entries != x.entries);
  }

  TEST_CASE("rademacher support") {
    const SampleMatrix x = sample_matrix({EnsembleKind::Rademacher, 100, 1});
    for (Index i = 0; i < 100; ++i)
      for (Index j = 0; j < 100; ++j) {
        const Complex v = x.entries(i, j);
        CHECK(v.imag() == 0.0);
        CHECK((v.real() == 0.1 || v.real() == -0.1));
      }
  }

  TEST_CASE("complex ginibre sample moments") {
    const Index N = 1000;
    const SampleMatrix x = sample_matrix({EnsembleKind::GinibreComplex, N, 3});
    CHECK(x.all_finite());
    const double n2 = static_cast<double>(N * N);
    const Complex mean = x.entries.sum() / n2;
    CHECK(std::abs(mean) <= 4.0 * std::sqrt(1.0 / N) / N);
    const double var = x.entries.cwiseAbs2().sum() / n2 - std::norm(mean);
    CHECK(std::abs(var * N - 1.0) <= 0.05);
  }

  TEST_CASE("every law has mean 0 and unit standardized variance") {
    const std::int64_t n = 1'000'000;
    for (EnsembleKind kind : kAll) {
      CAPTURE(to_string(kind));
      Xoshiro256pp rng(99);
      Complex s1{};
      double s2 = 0.0, s4 = 0.0, sre_im = 0.0;
      for (std::int64_t t = 0; t < n; ++t) {
        const Complex x = draw_standardized(kind, rng);
        s1 += x;
        s2 += std::norm(x);
        s4 += std::norm(x) * std::norm(x);
        sre_im += x.real() * x.imag();
      }
      const double m2 = s2 / n;
      const double se_mean = std::sqrt(m2 / n);
      CHECK(std::abs(s1.real() / n) <= 5 * se_mean);
      CHECK(std::abs(s1.imag() / n) <= 5 * se_mean);
      const double se_var = std::sqrt((s4 / n - m2 * m2) / n);
      CHECK(std::abs(m2 - 1.0) <= 5 * se_var);
      if (is_complex(kind)) {
        // Var(re * im) = 1/4 for independent halves of variance 1/2.
        CHECK(std::abs(sre_im / n) <= 5 * std::sqrt(0.25 / n));
      }
    }
  }

  TEST_CASE("tails") {
    const TailReport rad = validate_tails({EnsembleKind::Rademacher, 10, 1}, 100000);
    for (const auto& [lambda, p] : rad.exceedance_curve)
      if (lambda > 1.0) CHECK(p == 0.0);

    const std::int64_t trials = 200000;
    const TailReport gauss = validate_tails({EnsembleKind::GinibreReal, 10, 2}, trials);
    bool found = false;
    for (const auto& [lambda, p] : gauss.exceedance_curve)
      if (lambda == 1.0) {
        found = true;
        const double exact = std::erfc(1.0 / std::sqrt(2.0));
        CHECK(std::abs(p - exact) <= 3.0 * std::sqrt(exact * (1 - exact) / trials));
      }
    CHECK(found);
    for (std::size_t k = 1; k < gauss.exceedance_curve.size(); ++k)
      CHECK(gauss.exceedance_curve[k].second <= gauss.exceedance_curve[k - 1].second);

    const TailReport lap = validate_tails({EnsembleKind::Laplace, 10, 3}, trials);
    REQUIRE(lap.theta.has_value());
    CHECK(*lap.theta >= 0.8);
    CHECK(*lap.theta <= 1.2);

    CHECK_THROWS_AS(validate_tails({EnsembleKind::Laplace, 10, 3}, 9999), std::invalid_argument);
  }

  TEST_CASE("shift") {
    const SampleMatrix x = sample_matrix({EnsembleKind::Uniform, 6, 5});
    CHECK(shift(x, 0.0).entries == x.entries);
    const Complex z{1.0, 2.0};
    const SampleMatrix y = shift(x, z);
    for (Index i = 0; i < 6; ++i)
      for (Index j = 0; j < 6; ++j) {
        if (i == j) CHECK(y.entries(i, i) == x.entries(i, i) - z);
        else CHECK(y.entries(i, j) == x.entries(i, j));
      }
    CHECK_FALSE(y.is_real);
    CHECK(shift(y, -z).entries == x.entries);
    CHECK(shift(x, 0.7).is_real);
  }

  TEST_CASE("invalid specs") {
    CHECK_THROWS_AS(sample_matrix({EnsembleKind::GinibreReal, 1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(parse_ensemble_kind("cauchy"), std::invalid_argument);
    for (EnsembleKind kind : kAll) CHECK(parse_ensemble_kind(to_string(kind)) == kind);
  }
}
