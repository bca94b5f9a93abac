#pragma once

// QPSK discrete-modulated protocol assembly: expectation-value constraints,
// post-selection Kraus maps for homodyne and heterodyne detection,
// error-correction cost, and the asymptotic key-rate formula.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "satqkd/channel.hpp"
#include "satqkd/errors.hpp"
#include "satqkd/fock.hpp"
#include "satqkd/math/quadrature.hpp"
#include "satqkd/solver.hpp"

namespace satqkd::protocol {

using channel::Detection;

struct ProtocolConfig {
  Detection detection = Detection::homodyne;
  double alpha = 0.72;
  double delta_c = 0.42;              // homodyne discard band
  double delta_a = 0.52;              // heterodyne amplitude cut
  double delta_p = 0.0;               // heterodyne phase cut
  std::array<double, 4> p_x = {0.25, 0.25, 0.25, 0.25};
  int cutoff = 10;                    // N_c
  double beta = 0.95;                 // reconciliation efficiency

  void validate() const {
    if (alpha < 0.0) throw config_error("protocol.alpha must be >= 0");
    if (cutoff < 2) throw config_error("protocol.cutoff must be >= 2");
    if (cutoff > 30)
      throw config_error("protocol.cutoff above 30 is not supported");
    if (beta <= 0.0 || beta > 1.0)
      throw config_error("protocol.beta must lie in (0, 1]");
    double sum = 0.0;
    for (double p : p_x) {
      if (p <= 0.0) throw config_error("signal probabilities must be > 0");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw config_error("signal probabilities must sum to 1");
    if (detection == Detection::homodyne) {
      if (delta_c < 0.0) throw config_error("protocol.delta_c must be >= 0");
    } else {
      if (delta_a < 0.0) throw config_error("protocol.delta_a must be >= 0");
      if (delta_p < 0.0 || delta_p >= M_PI / 4.0)
        throw config_error("protocol.delta_p must lie in [0, pi/4)");
    }
  }
};

struct MomentTargets {
  double q, p, n, d;
};

// Eq.-of-motion targets for one displaced signal under efficiency eta and
// excess noise xi (shot-noise units).
inline MomentTargets moment_targets(cxd alpha_x, double eta, double xi) {
  if (eta <= 0.0 || eta > 1.0)
    throw std::invalid_argument("moment_targets: eta must lie in (0, 1]");
  if (xi < 0.0) throw std::invalid_argument("moment_targets: xi must be >= 0");
  MomentTargets t;
  t.q = std::sqrt(2.0 * eta) * alpha_x.real();
  t.p = std::sqrt(2.0 * eta) * alpha_x.imag();
  t.n = eta * std::norm(alpha_x) + 0.5 * eta * xi;
  t.d = 2.0 * eta * (alpha_x * alpha_x).real();
  return t;
}

struct Constraint {
  Mat op;
  double target;
  std::string label;
};

struct ConstraintSet {
  int dim_a = 4;
  int dim_b = 0;
  std::vector<Constraint> constraints;
  Eigen::Matrix4cd alice_marginal;

  std::vector<Mat> ops() const {
    std::vector<Mat> out;
    out.reserve(constraints.size());
    for (const auto& c : constraints) out.push_back(c.op);
    return out;
  }
  std::vector<double> targets() const {
    std::vector<double> out;
    out.reserve(constraints.size());
    for (const auto& c : constraints) out.push_back(c.target);
    return out;
  }
};

// The full constraint family on the A(x)B space: 16 moment constraints,
// the 4x4 Alice partial-trace pinning split into 16 real constraints, and
// the unit trace. PSD membership is the solver's feasible cone.
inline ConstraintSet build_constraints(const ProtocolConfig& cfg, double eta,
                                       double xi) {
  cfg.validate();
  const int nb = cfg.cutoff + 1;
  const int dim = 4 * nb;
  ConstraintSet set;
  set.dim_b = nb;

  const auto [q, p] = fock::quadratures(cfg.cutoff);
  const auto [nop, dop] = fock::second_moment_ops(cfg.cutoff);
  const auto amps = fock::qpsk_amplitudes(cfg.alpha);
  const Mat id_b = Mat::Identity(nb, nb);

  const std::array<const Mat*, 4> obs = {&q, &p, &nop, &dop};
  const std::array<const char*, 4> obs_name = {"q", "p", "n", "d"};
  for (int x = 0; x < 4; ++x) {
    Mat proj = Mat::Zero(4, 4);
    proj(x, x) = 1.0;
    const MomentTargets t = moment_targets(amps[x], eta, xi);
    const std::array<double, 4> vals = {t.q, t.p, t.n, t.d};
    for (int o = 0; o < 4; ++o) {
      set.constraints.push_back({math::kron(proj, *obs[o]),
                                 cfg.p_x[x] * vals[o],
                                 std::string(obs_name[o]) + "_" +
                                     std::to_string(x)});
    }
  }

  const Eigen::Matrix4cd gram = fock::qpsk_gram(cfg.alpha);
  Eigen::Matrix4cd rho_a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      rho_a(i, j) = std::sqrt(cfg.p_x[i] * cfg.p_x[j]) * gram(i, j);
  set.alice_marginal = rho_a;

  for (int i = 0; i < 4; ++i) {
    Mat e = Mat::Zero(4, 4);
    e(i, i) = 1.0;
    set.constraints.push_back({math::kron(e, id_b), rho_a(i, i).real(),
                               "marginal_" + std::to_string(i) +
                                   std::to_string(i)});
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      Mat re = Mat::Zero(4, 4), im = Mat::Zero(4, 4);
      re(i, j) = 1.0;
      re(j, i) = 1.0;
      im(i, j) = cxd(0.0, 1.0);
      im(j, i) = cxd(0.0, -1.0);
      set.constraints.push_back({math::kron(re, id_b), 2.0 * rho_a(i, j).real(),
                                 "marginal_re_" + std::to_string(i) +
                                     std::to_string(j)});
      set.constraints.push_back({math::kron(im, id_b), 2.0 * rho_a(i, j).imag(),
                                 "marginal_im_" + std::to_string(i) +
                                     std::to_string(j)});
    }
  }

  set.constraints.push_back({Mat::Identity(dim, dim), 1.0, "trace"});
  return set;
}

// Heterodyne post-selection map: K = sum_z |z> (x) 1_A (x) sqrt(R_z).
inline solver::BlockKrausMap build_gmap_het(double delta_a, double delta_p,
                                            int n_c) {
  const Mat id4 = Mat::Identity(4, 4);
  std::vector<Mat> factors;
  for (int z = 0; z < 4; ++z) {
    const Mat r = fock::region_operator(z, delta_a, delta_p, n_c);
    factors.push_back(math::kron(id4, math::herm_sqrt_psd(r)));
  }
  return solver::BlockKrausMap(std::move(factors));
}

// Homodyne post-selection maps, one per quadrature. The p map is the q map
// conjugated by the number-basis phase rotation e^{i pi n/2}.
inline std::array<solver::BlockKrausMap, 2> build_gmap_hom(double delta_c,
                                                           int n_c) {
  const Mat id4 = Mat::Identity(4, 4);
  const auto [i0, i1] = fock::interval_operators(delta_c, n_c);
  const Mat s0 = math::herm_sqrt_psd(i0);
  const Mat s1 = math::herm_sqrt_psd(i1);
  const Mat u = fock::quarter_phase(n_c);
  std::vector<Mat> fq = {math::kron(id4, s0), math::kron(id4, s1)};
  std::vector<Mat> fp = {math::kron(id4, math::hermitize(u * s0 * u.adjoint())),
                         math::kron(id4, math::hermitize(u * s1 * u.adjoint()))};
  return {solver::BlockKrausMap(std::move(fq)),
          solver::BlockKrausMap(std::move(fp))};
}

struct ECReport {
  double p_pass = 0.0;
  double h_z = 0.0;    // H(Z) of the pass-conditioned key marginal, bits
  double h_zx = 0.0;   // H(Z|X) pass-conditioned, bits
  double delta_ec = 0.0;
};

namespace detail {

inline double binary_entropy(double x) {
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

inline double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

}  // namespace detail

// Homodyne error-correction cost per quadrature (index 0: q, 1: p).
// Outcome distributions are Gaussian with mean sqrt(2 eta) Re/Im(alpha_x)
// and variance (eta xi + 1)/2; bins ( Delta_c, inf) -> 0,
// (-inf, -Delta_c) -> 1, the rest discarded. Entropies are computed on the
// pass-conditioned distributions.
inline std::array<ECReport, 2> ec_cost_hom(double alpha, double eta, double xi,
                                           double delta_c, double beta,
                                           const std::array<double, 4>& p_x = {
                                               0.25, 0.25, 0.25, 0.25}) {
  const auto amps = fock::qpsk_amplitudes(alpha);
  const double s = std::sqrt(eta * xi + 1.0);
  std::array<ECReport, 2> out;
  for (int yq = 0; yq < 2; ++yq) {
    std::array<double, 4> p0{}, p1{};
    double p_pass = 0.0;
    for (int x = 0; x < 4; ++x) {
      const double mean = std::sqrt(2.0 * eta) *
                          (yq == 0 ? amps[x].real() : amps[x].imag());
      p0[x] = 0.5 * std::erfc((delta_c - mean) / s);
      p1[x] = 0.5 * std::erfc((delta_c + mean) / s);
      p_pass += p_x[x] * (p0[x] + p1[x]);
    }
    ECReport rep;
    rep.p_pass = p_pass;
    double pz0 = 0.0;
    for (int x = 0; x < 4; ++x) {
      const double pass_x = p0[x] + p1[x];
      if (pass_x <= 0.0) continue;
      const double w = p_x[x] * pass_x / p_pass;
      rep.h_zx += w * detail::binary_entropy(p0[x] / pass_x);
      pz0 += w * (p0[x] / pass_x);
    }
    rep.h_z = detail::binary_entropy(pz0);
    rep.delta_ec = (1.0 - beta) * rep.h_z + beta * rep.h_zx;
    out[yq] = rep;
  }
  return out;
}

struct HetECResult {
  ECReport report;
  Eigen::Matrix4d table;  // P(z = j | x = k), rows k
};

// Heterodyne conditional table P(z=j|x=k) by 2D adaptive quadrature of the
// displaced-thermal kernel over the post-selected quadrant regions.
inline HetECResult ec_cost_het(double alpha, double eta, double xi,
                               double delta_a, double delta_p, double beta,
                               const std::array<double, 4>& p_x = {
                                   0.25, 0.25, 0.25, 0.25}) {
  const auto amps = fock::qpsk_amplitudes(alpha);
  const double s2 = 1.0 + 0.5 * eta * xi;
  const double r_max = std::sqrt(eta) * alpha + 10.0 * std::sqrt(s2);
  math::QuadratureOptions opt;
  opt.rel_tol = 1e-9;

  Eigen::Matrix4d table;
  for (int k = 0; k < 4; ++k) {
    const cxd beta_k = std::sqrt(eta) * amps[k];
    for (int j = 0; j < 4; ++j) {
      const double t0 = j * M_PI / 2.0 + delta_p;
      const double t1 = (j + 1) * M_PI / 2.0 - delta_p;
      const auto outer = [&](double gamma) {
        const auto inner = [&](double theta) {
          const cxd point = gamma * std::exp(cxd(0.0, theta));
          return std::exp(-std::norm(point - beta_k) / s2);
        };
        return gamma * math::integrate(inner, t0, t1, opt);
      };
      table(k, j) =
          math::integrate(outer, delta_a, r_max, opt) / (M_PI * s2);
    }
  }

  ECReport rep;
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j) rep.p_pass += p_x[k] * table(k, j);

  std::vector<double> pz(4, 0.0);
  for (int k = 0; k < 4; ++k) {
    const double row = table.row(k).sum();
    if (row <= 0.0) continue;
    const double w = p_x[k] * row / rep.p_pass;
    std::vector<double> cond(4);
    for (int j = 0; j < 4; ++j) {
      cond[j] = table(k, j) / row;
      pz[j] += w * cond[j];
    }
    rep.h_zx += w * detail::entropy(cond);
  }
  rep.h_z = detail::entropy(pz);
  rep.delta_ec = (1.0 - beta) * rep.h_z + beta * rep.h_zx;
  return {rep, table};
}

struct KeyRateReport {
  double rate = 0.0;         // from the certified entropy lower bound
  double rate_primal = 0.0;  // same formula with the primal value
  bool secure = false;
  double p_pass = 0.0;
  double delta_ec = 0.0;     // bits per passed round
  double eta = 0.0;
  double xi = 0.0;
  solver::SolverReport solver;
};

inline solver::SpectrahedronProblem build_problem(const ProtocolConfig& cfg,
                                                  double eta, double xi) {
  const ConstraintSet set = build_constraints(cfg, eta, xi);
  solver::SpectrahedronProblem problem;
  problem.dim = 4 * (cfg.cutoff + 1);
  problem.ops = set.ops();
  problem.targets = set.targets();
  if (cfg.detection == Detection::heterodyne) {
    problem.maps = {build_gmap_het(cfg.delta_a, cfg.delta_p, cfg.cutoff)};
  } else {
    auto maps = build_gmap_hom(cfg.delta_c, cfg.cutoff);
    problem.maps = {std::move(maps[0]), std::move(maps[1])};
  }
  return problem;
}

// Asymptotic key rate. Heterodyne: R = min D - p_pass * delta_EC.
// Homodyne: R = (1/2)[min sum_y D_y - sum_y p_pass^y delta_EC^y].
// Negative rates are reported as-is with secure = false.
inline KeyRateReport keyrate(const ProtocolConfig& cfg, double eta, double xi,
                             const solver::SolverOptions& options = {}) {
  cfg.validate();
  if (eta <= 0.0 || eta > 1.0)
    throw std::invalid_argument("keyrate: eta must lie in (0, 1]");
  if (xi < 0.0) throw std::invalid_argument("keyrate: xi must be >= 0");

  const auto problem = build_problem(cfg, eta, xi);
  const auto result = solver::minimize(problem, options);

  KeyRateReport rep;
  rep.eta = eta;
  rep.xi = xi;
  rep.solver = result.report;
  if (cfg.detection == Detection::heterodyne) {
    const auto ec = ec_cost_het(cfg.alpha, eta, xi, cfg.delta_a, cfg.delta_p,
                                cfg.beta, cfg.p_x);
    rep.p_pass = ec.report.p_pass;
    rep.delta_ec = ec.report.delta_ec;
    rep.rate = result.report.lower_bound - rep.p_pass * rep.delta_ec;
    rep.rate_primal = result.report.primal_value - rep.p_pass * rep.delta_ec;
  } else {
    const auto ec = ec_cost_hom(cfg.alpha, eta, xi, cfg.delta_c, cfg.beta,
                                cfg.p_x);
    const double ec_term =
        ec[0].p_pass * ec[0].delta_ec + ec[1].p_pass * ec[1].delta_ec;
    rep.p_pass = 0.5 * (ec[0].p_pass + ec[1].p_pass);
    rep.delta_ec = 0.5 * (ec[0].delta_ec + ec[1].delta_ec);
    rep.rate = 0.5 * (result.report.lower_bound - ec_term);
    rep.rate_primal = 0.5 * (result.report.primal_value - ec_term);
  }
  rep.secure = rep.rate > 0.0;
  return rep;
}

}  // namespace satqkd::protocol
