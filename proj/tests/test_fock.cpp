#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "satqkd/fock.hpp"

using namespace satqkd;
using fock::annihilation;
using fock::coherent_ket;
using fock::interval_operators;
using fock::qpsk_gram;
using fock::quadratures;
using fock::region_operator;
using fock::second_moment_ops;

TEST_CASE("annihilation operator") {
  const Mat a1 = annihilation(1);
  REQUIRE(a1(0, 1) == cxd(1.0, 0.0));
  REQUIRE(std::abs(a1(0, 0)) + std::abs(a1(1, 0)) + std::abs(a1(1, 1)) == 0.0);
  const Mat a2 = annihilation(2);
  REQUIRE(a2(1, 2).real() == Catch::Approx(std::sqrt(2.0)));
  const Mat a = annihilation(10);
  const Mat num = a.adjoint() * a;
  for (int n = 0; n <= 10; ++n)
    REQUIRE(num(n, n).real() == Catch::Approx(double(n)).margin(1e-13));
  REQUIRE_THROWS_AS(annihilation(0), std::invalid_argument);
}

TEST_CASE("quadratures: vacuum moments and convention") {
  const auto [q, p] = quadratures(12);
  REQUIRE(math::is_hermitian(q));
  REQUIRE(math::is_hermitian(p));
  REQUIRE(std::abs(q(0, 0)) == 0.0);
  const Mat q2 = q * q;
  REQUIRE(q2(0, 0).real() == Catch::Approx(0.5).epsilon(1e-13));

  // <alpha|q|alpha> = sqrt(2) Re(alpha); truncation tail is negligible here
  const cxd alpha(0.3, 0.0);
  const auto [q20, p20] = quadratures(20);
  const Vec ket = coherent_ket(alpha, 20);
  const double mean_q = (ket.adjoint() * q20 * ket)(0, 0).real();
  REQUIRE(mean_q == Catch::Approx(std::sqrt(2.0) * 0.3).margin(1e-8));
  const double mean_p = (ket.adjoint() * p20 * ket)(0, 0).real();
  REQUIRE(mean_p == Catch::Approx(0.0).margin(1e-8));
}

TEST_CASE("truncated commutator [q,p]") {
  const int nc = 7;
  const auto [q, p] = quadratures(nc);
  const Mat comm = q * p - p * q;
  for (int m = 0; m <= nc; ++m) {
    for (int n = 0; n <= nc; ++n) {
      cxd expect(0.0, 0.0);
      if (m == n) expect = m == nc ? cxd(0.0, 1.0 - (nc + 1.0)) : cxd(0.0, 1.0);
      REQUIRE(std::abs(comm(m, n) - expect) < 1e-12);
    }
  }
}

TEST_CASE("second-moment operators from truncated products") {
  const int nc = 10;
  const auto [n, d] = second_moment_ops(nc);
  for (int k = 0; k < nc; ++k)
    REQUIRE(n(k, k).real() == Catch::Approx(double(k)).margin(1e-12));
  // top diagonal entry deviates under truncation
  REQUIRE(n(nc, nc).real() == Catch::Approx((nc - 1.0) / 2.0).margin(1e-12));

  const Mat a = annihilation(nc);
  const Mat d_expect = a * a + (a * a).adjoint();
  REQUIRE((d - d_expect).cwiseAbs().maxCoeff() < 1e-12);
  REQUIRE(std::abs(d(0, 0)) < 1e-13);
  REQUIRE_THROWS_AS(second_moment_ops(1), std::invalid_argument);
}

TEST_CASE("coherent kets") {
  const Vec vac = coherent_ket(0.0, 6);
  REQUIRE(vac[0] == cxd(1.0, 0.0));
  REQUIRE(vac.tail(6).cwiseAbs().maxCoeff() == 0.0);

  // norm^2 equals the partial exponential sum e^{-a^2} sum a^{2n}/n!
  const double a = 0.86;
  const Vec ket = coherent_ket(a, 10);
  double partial = 0.0, term = 1.0;
  for (int n = 0; n <= 10; ++n) {
    partial += term;
    term *= a * a / double(n + 1);
  }
  REQUIRE(ket.squaredNorm() ==
          Catch::Approx(std::exp(-a * a) * partial).epsilon(1e-14));

  // overlap approaches the coherent-state identity as the cutoff grows
  const cxd al(0.4, 0.2), be(-0.3, 0.5);
  const Vec ka = coherent_ket(al, 40), kb = coherent_ket(be, 40);
  const cxd overlap = (kb.adjoint() * ka)(0, 0);
  const cxd expect = std::exp(-0.5 * std::norm(al) - 0.5 * std::norm(be) +
                              std::conj(be) * al);
  REQUIRE(std::abs(overlap - expect) < 1e-12);

  // truncation keeps at least 99.9% of the mass for alpha <= 1 at N_c = 10
  for (double amp : {0.25, 0.5, 0.75, 1.0})
    REQUIRE(coherent_ket(amp, 10).norm() >= 0.999);
}

TEST_CASE("qpsk gram matrix") {
  const auto g0 = qpsk_gram(0.0);
  REQUIRE((g0 - Eigen::Matrix4cd::Ones()).cwiseAbs().maxCoeff() < 1e-15);

  const double a = 0.72;
  const auto g = qpsk_gram(a);
  for (int i = 0; i < 4; ++i) REQUIRE(std::abs(g(i, i) - cxd(1, 0)) < 1e-15);
  REQUIRE((g - g.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  const Eigen::Vector4d ev =
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(g).eigenvalues();
  REQUIRE(ev.minCoeff() > -1e-12);

  // high-cutoff inner-product oracle pins the convention
  const auto amps = fock::qpsk_amplitudes(a);
  const Vec k0 = coherent_ket(amps[0], 60), k1 = coherent_ket(amps[1], 60);
  const cxd overlap_10 = (k1.adjoint() * k0)(0, 0);  // <phi_1|phi_0>
  REQUIRE(std::abs(g(0, 1) - overlap_10) < 1e-12);
  REQUIRE(std::abs(overlap_10 - std::exp(cxd(-a * a, -a * a))) < 1e-12);
  REQUIRE(std::abs(g(1, 0) - std::exp(cxd(-a * a, a * a))) < 1e-12);

  REQUIRE_THROWS_AS(qpsk_gram(-0.1), std::invalid_argument);
}

namespace {

// 2D quadrature oracle for region-operator matrix elements:
// (1/pi) int gamma^{m+n+1} e^{-gamma^2} e^{i(m-n)theta} / sqrt(m! n!)
cxd region_element_quadrature(int z, int m, int n, double delta_a,
                              double delta_p) {
  math::QuadratureOptions opt;
  opt.rel_tol = 1e-11;
  const double t0 = z * M_PI / 2.0 + delta_p;
  const double t1 = (z + 1) * M_PI / 2.0 - delta_p;
  const auto re = [&](double th) { return std::cos((m - n) * th); };
  const auto im = [&](double th) { return std::sin((m - n) * th); };
  const cxd ang(math::integrate(re, t0, t1, opt),
                math::integrate(im, t0, t1, opt));
  const auto rad = [&](double g) {
    return std::pow(g, m + n + 1) * std::exp(-g * g);
  };
  const double radial = math::integrate(rad, delta_a, delta_a + 12.0, opt);
  const double norm =
      std::exp(-0.5 * (math::ln_factorial(m) + math::ln_factorial(n)));
  return ang * radial * norm / M_PI;
}

}  // namespace

TEST_CASE("region operators") {
  const int nc = 10;

  SECTION("POVM completeness at zero thresholds") {
    Mat sum = Mat::Zero(nc + 1, nc + 1);
    for (int z = 0; z < 4; ++z) sum += region_operator(z, 0.0, 0.0, nc);
    REQUIRE((sum - Mat::Identity(nc + 1, nc + 1)).cwiseAbs().maxCoeff() <
            1e-10);
  }

  SECTION("vacuum element closed form") {
    for (double da : {0.0, 0.3, 0.52}) {
      for (double dp : {0.0, 0.1}) {
        const Mat r = region_operator(2, da, dp, 4);
        const double expect =
            (M_PI / 2.0 - 2.0 * dp) / (2.0 * M_PI) * std::exp(-da * da);
        REQUIRE(r(0, 0).real() == Catch::Approx(expect).epsilon(1e-12));
      }
    }
    REQUIRE(region_operator(0, 0.0, 0.0, 4)(0, 0).real() ==
            Catch::Approx(0.25).epsilon(1e-13));
  }

  SECTION("closed form matches 2D quadrature oracle") {
    const double da = 0.52, dp = 0.0;
    for (int z : {0, 1, 3}) {
      const Mat r = region_operator(z, da, dp, nc);
      for (int m = 0; m <= nc; m += 2) {
        for (int n = 0; n <= m; n += 3) {
          const cxd oracle = region_element_quadrature(z, m, n, da, dp);
          REQUIRE(std::abs(r(m, n) - oracle) < 1e-8);
        }
      }
    }
    // and with a phase cut
    const Mat r = region_operator(1, 0.3, 0.2, 6);
    for (int m = 0; m <= 6; ++m)
      REQUIRE(std::abs(r(m, 3) - region_element_quadrature(1, m, 3, 0.3, 0.2)) <
              1e-8);
  }

  SECTION("hermitian, PSD, bounded by identity") {
    for (double da : {0.0, 0.52, 1.2}) {
      for (double dp : {0.0, 0.2, 0.7}) {
        for (int z = 0; z < 4; ++z) {
          const Mat r = region_operator(z, da, dp, 8);
          REQUIRE(math::is_hermitian(r, 1e-12));
          const RVec ev = math::herm_eigvals(r);
          REQUIRE(ev.minCoeff() > -1e-10);
          REQUIRE(ev.maxCoeff() < 1.0 + 1e-10);
        }
      }
    }
  }

  SECTION("diagonals decrease as Delta_a grows; completeness defect PSD") {
    const Mat lo = region_operator(0, 0.2, 0.05, 8);
    const Mat hi = region_operator(0, 0.5, 0.05, 8);
    for (int m = 0; m <= 8; ++m)
      REQUIRE(hi(m, m).real() <= lo(m, m).real() + 1e-14);

    Mat defect = Mat::Identity(9, 9);
    for (int z = 0; z < 4; ++z) defect -= region_operator(z, 0.3, 0.1, 8);
    REQUIRE(math::herm_eigvals(defect).minCoeff() > -1e-10);
  }

  REQUIRE_THROWS_AS(region_operator(0, 0.1, M_PI / 4.0, 4),
                    std::invalid_argument);
}

TEST_CASE("interval operators") {
  const int nc = 10;

  SECTION("zero threshold: half Gaussian and completeness") {
    const auto [i0, i1] = interval_operators(0.0, nc);
    REQUIRE(i0(0, 0).real() == Catch::Approx(0.5).epsilon(1e-10));
    REQUIRE((i0 + i1 - Mat::Identity(nc + 1, nc + 1)).cwiseAbs().maxCoeff() <
            1e-9);
  }

  SECTION("erf closed form at Delta_c = 0.42") {
    const auto [i0, i1] = interval_operators(0.42, 6);
    const double expect = 0.5 * (1.0 - std::erf(0.42));
    REQUIRE(i0(0, 0).real() == Catch::Approx(expect).epsilon(1e-10));
  }

  SECTION("hermitian, PSD, parity relation, monotone in Delta_c") {
    const auto [a0, a1] = interval_operators(0.2, 8);
    const auto [b0, b1] = interval_operators(0.6, 8);
    REQUIRE(math::is_hermitian(a0, 1e-12));
    REQUIRE(math::herm_eigvals(a0).minCoeff() > -1e-10);
    REQUIRE(math::herm_eigvals(a1).minCoeff() > -1e-10);
    REQUIRE(math::herm_eigvals(a0).maxCoeff() < 1.0 + 1e-10);
    for (int m = 0; m <= 8; ++m) {
      REQUIRE(b0(m, m).real() <= a0(m, m).real() + 1e-14);
      for (int n = 0; n <= 8; ++n) {
        const double sign = (m + n) % 2 == 0 ? 1.0 : -1.0;
        REQUIRE(std::abs(a1(m, n) - sign * a0(m, n)) < 1e-9);
      }
    }
    Mat defect = Mat::Identity(9, 9) - a0 - a1;
    REQUIRE(math::herm_eigvals(defect).minCoeff() > -1e-10);
  }
}

TEST_CASE("quarter phase rotation maps q to p") {
  const int nc = 9;
  const auto [q, p] = quadratures(nc);
  const Mat u = fock::quarter_phase(nc);
  REQUIRE((u * q * u.adjoint() - p).cwiseAbs().maxCoeff() < 1e-13);
}
