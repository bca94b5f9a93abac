#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "satqkd/math/linalg.hpp"
#include "satqkd/math/quadrature.hpp"
#include "satqkd/math/special.hpp"

using namespace satqkd;

TEST_CASE("regularized upper incomplete gamma against quadrature") {
  // independent oracle: Q(s,x) = int_x^inf t^{s-1} e^-t dt / Gamma(s)
  const auto oracle = [](double s, double x) {
    math::QuadratureOptions opt;
    opt.rel_tol = 1e-12;
    const double upper = std::max(x, s) + 60.0;
    const auto f = [&](double t) { return std::pow(t, s - 1.0) * std::exp(-t); };
    return math::integrate(f, x, upper, opt) / std::tgamma(s);
  };
  for (double s : {1.0, 1.5, 2.0, 3.5, 6.0, 11.0}) {
    for (double x : {0.05, 0.2704, 1.0, 4.0, 15.0}) {
      REQUIRE(math::gamma_q(s, x) == Catch::Approx(oracle(s, x)).margin(1e-10));
    }
  }
}

TEST_CASE("incomplete gamma identities") {
  REQUIRE(math::gamma_q(1.0, 0.7) == Catch::Approx(std::exp(-0.7)).epsilon(1e-12));
  REQUIRE(math::gamma_q(3.0, 0.0) == 1.0);
  // Gamma(s+1,x) = s Gamma(s,x) + x^s e^-x
  for (double s : {0.5, 1.5, 4.0}) {
    for (double x : {0.3, 2.0, 9.0}) {
      const double lhs = std::exp(math::ln_gamma_upper(s + 1.0, x));
      const double rhs = s * std::exp(math::ln_gamma_upper(s, x)) +
                         std::pow(x, s) * std::exp(-x);
      REQUIRE(lhs == Catch::Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("scaled Bessel I0") {
  REQUIRE(math::bessel_i0_scaled(0.0) == 1.0);
  // I0(1) = 1.2660658777520084
  REQUIRE(math::bessel_i0_scaled(1.0) * std::exp(1.0) ==
          Catch::Approx(1.2660658777520084).epsilon(1e-12));
  // series/asymptotic regions agree where they meet
  const double lo = math::bessel_i0_scaled(99.9);
  const double hi = math::bessel_i0_scaled(100.1);
  REQUIRE(std::abs(lo - hi) / lo < 1e-3);
  const double mid = 0.5 * (lo + hi);
  REQUIRE(math::bessel_i0_scaled(100.0) == Catch::Approx(mid).epsilon(1e-4));
  // asymptotic leading order
  REQUIRE(math::bessel_i0_scaled(5000.0) ==
          Catch::Approx(1.0 / std::sqrt(2.0 * M_PI * 5000.0)).epsilon(1e-4));
}

TEST_CASE("adaptive Simpson basics") {
  const auto sq = [](double x) { return x * x; };
  REQUIRE(math::integrate(sq, 0.0, 1.0) == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
  const auto s = [](double x) { return std::sin(x); };
  REQUIRE(math::integrate(s, 0.0, M_PI) == Catch::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("segmented quadrature resolves short scales on long intervals") {
  const auto f = [](double x) { return std::exp(-x / 100.0); };
  const double got =
      math::integrate_segmented(f, 0.0, 5e5, {1e3, 5e3, 1.5e4, 4e4, 8e4});
  REQUIRE(got == Catch::Approx(100.0).epsilon(1e-8));
}

TEST_CASE("quadrature converges as tolerance halves") {
  const auto f = [](double x) { return std::exp(-x * x) * std::cos(3.0 * x); };
  math::QuadratureOptions a, b;
  a.rel_tol = 1e-8;
  b.rel_tol = 5e-9;
  const double ia = math::integrate(f, -6.0, 6.0, a);
  const double ib = math::integrate(f, -6.0, 6.0, b);
  REQUIRE(std::abs(ia - ib) <= 1e-8 * std::abs(ia));
}

namespace {

Mat random_psd(int n, std::mt19937& rng, double shift = 0.0) {
  std::normal_distribution<double> g;
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cxd(g(rng), g(rng));
  Mat out = m * m.adjoint() / double(n);
  out += shift * Mat::Identity(n, n);
  return satqkd::math::hermitize(out);
}

}  // namespace

TEST_CASE("hermitian_log2") {
  const Mat id = Mat::Identity(5, 5);
  REQUIRE(hermitian_log2(id).cwiseAbs().maxCoeff() < 1e-14);

  Mat half = 0.5 * Mat::Identity(2, 2);
  const Mat lg = hermitian_log2(half);
  REQUIRE(lg(0, 0).real() == Catch::Approx(-1.0).epsilon(1e-13));
  REQUIRE(lg(1, 1).real() == Catch::Approx(-1.0).epsilon(1e-13));

  // round trip: exp2(log2(M)) = M for a strictly positive random matrix
  std::mt19937 rng(1234);
  const Mat m = random_psd(8, rng, 0.05);
  const Mat lm = hermitian_log2(m, 1e-300);
  auto es = math::herm_eig(lm);
  RVec ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = std::exp2(ev[i]);
  const Mat back =
      es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  REQUIRE((back - m).cwiseAbs().maxCoeff() < 1e-9);

  Mat nonherm = Mat::Zero(2, 2);
  nonherm(0, 1) = 1.0;
  REQUIRE_THROWS_AS(hermitian_log2(nonherm), std::invalid_argument);
}

TEST_CASE("kron and partial traces") {
  std::mt19937 rng(99);
  const Mat a = random_psd(3, rng);
  const Mat b = random_psd(4, rng);
  const Mat k = math::kron(a, b);
  REQUIRE(k.rows() == 12);
  REQUIRE(std::abs(k.trace() - a.trace() * b.trace()) < 1e-12);
  const Mat ta = math::partial_trace_b(k, 3, 4);
  REQUIRE((ta - a * b.trace()).cwiseAbs().maxCoeff() < 1e-12);
  const Mat tb = math::partial_trace_a(k, 3, 4);
  REQUIRE((tb - b * a.trace()).cwiseAbs().maxCoeff() < 1e-12);
}
