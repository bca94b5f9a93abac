#pragma once

// Certified minimization of f(rho) = sum_m D(G_m(rho) || Z[G_m(rho)]) over a
// spectrahedron S = {rho >= 0, Tr(Gamma_i rho) = gamma_i}.
//
// The maps G(rho) = K rho K^dag with K = sum_z |z> (x) F_z have a block
// structure that is exploited everywhere: Z[G(rho)] keeps exactly the
// diagonal blocks F_z rho F_z, and the nonzero spectrum of G(rho) equals the
// spectrum of Q rho Q with Q = (sum_z F_z^2)^{1/2}. All linear algebra
// therefore stays at the dimension of rho.
//
// The minimizer is a Frank-Wolfe iteration with exact (golden-section) line
// search; the linear subproblem min Tr(C sigma) over S is solved by a dense
// primal-dual interior-point method with Nesterov-Todd scaling. Every
// iteration yields a certified lower bound f(rho) + min_S <grad, sigma-rho>.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "satqkd/errors.hpp"
#include "satqkd/math/linalg.hpp"

namespace satqkd::solver {

// Post-selection map written through its Hermitian PSD register blocks F_z:
// K = sum_z |z>_R (x) F_z, G(rho) = K rho K^dag, pinching projectors
// Z_j = |j><j| (x) 1.
struct BlockKrausMap {
  std::vector<Mat> factors;

  BlockKrausMap() = default;
  explicit BlockKrausMap(std::vector<Mat> f) : factors(std::move(f)) {
    if (factors.empty())
      throw std::invalid_argument("BlockKrausMap: needs at least one block");
    const auto n = factors.front().rows();
    collect_ = Mat::Zero(n, n);
    for (const auto& f : factors) {
      if (f.rows() != n || f.cols() != n)
        throw std::invalid_argument("BlockKrausMap: inconsistent block sizes");
      collect_ += f * f;
    }
    collect_ = math::hermitize(collect_);
    collect_sqrt_ = math::herm_sqrt_psd(collect_, 1e-8);
  }

  int register_dim() const { return int(factors.size()); }
  int in_dim() const { return int(factors.front().rows()); }
  const Mat& collect() const { return collect_; }       // K^dag K
  const Mat& collect_sqrt() const { return collect_sqrt_; }

  // Stacked rectangular Kraus operator (register_dim * n) x n.
  Mat kraus() const {
    const auto n = factors.front().rows();
    Mat k(n * factors.size(), n);
    for (std::size_t z = 0; z < factors.size(); ++z)
      k.block(z * n, 0, n, n) = factors[z];
    return k;
  }

  // Full G(rho) on the enlarged space (tests and oracles; the solver never
  // materializes this).
  Mat apply(const Mat& rho) const {
    const Mat k = kraus();
    return k * rho * k.adjoint();
  }

  // Pinched output Z[G(rho)]: block-diagonal of F_z rho F_z.
  Mat apply_pinched(const Mat& rho) const {
    const auto n = factors.front().rows();
    Mat out = Mat::Zero(n * factors.size(), n * factors.size());
    for (std::size_t z = 0; z < factors.size(); ++z)
      out.block(z * n, z * n, n, n) = factors[z] * rho * factors[z];
    return out;
  }

  Mat pinching_projector(int j) const {
    const auto n = factors.front().rows();
    Mat out = Mat::Zero(n * factors.size(), n * factors.size());
    out.block(j * n, j * n, n, n) = Mat::Identity(n, n);
    return out;
  }

 private:
  Mat collect_, collect_sqrt_;
};

struct SpectrahedronProblem {
  int dim = 0;
  std::vector<Mat> ops;          // Hermitian Gamma_i
  std::vector<double> targets;   // gamma_i
  std::vector<BlockKrausMap> maps;
};

struct SolverOptions {
  int max_iterations = 300;
  double gap_tolerance = 1e-6;       // Frank-Wolfe gap, bits
  double perturbation = 1e-10;       // blend toward maximally mixed
  double subproblem_tolerance = 1e-9;
  double log_floor = 1e-12;
  std::ostream* trace = nullptr;     // iteration trace (step, primal, gap)
};

enum class SolverStatus { converged, iteration_limit, infeasible };

inline const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::converged: return "converged";
    case SolverStatus::iteration_limit: return "iteration-limit";
    case SolverStatus::infeasible: return "infeasible";
  }
  return "?";
}

struct SolverReport {
  double primal_value = 0.0;
  double lower_bound = 0.0;
  double gap = 0.0;
  int iterations = 0;
  SolverStatus status = SolverStatus::converged;
  double perturbation = 0.0;
};

struct SolverResult {
  SolverReport report;
  Mat rho;
};

namespace detail {

inline double xlog2_floored(double x, double floor_value) {
  if (x <= 0.0) return 0.0;
  return x * std::log2(std::max(x, floor_value));
}

inline Mat blend(const Mat& rho, double eps) {
  if (eps == 0.0) return rho;
  const auto n = rho.rows();
  return (1.0 - eps) * rho + eps / double(n) * Mat::Identity(n, n);
}

// f(rho_tilde) in bits, via the nonzero spectra of Q rho Q and F_z rho F_z.
inline double objective_blend(const Mat& rho_t,
                              const std::vector<BlockKrausMap>& maps,
                              double floor_value) {
  double total = 0.0;
  for (const auto& map : maps) {
    const Mat& q = map.collect_sqrt();
    const RVec s = math::herm_eigvals(math::hermitize(q * rho_t * q));
    for (Eigen::Index i = 0; i < s.size(); ++i)
      total += xlog2_floored(s[i], floor_value);
    for (const auto& f : map.factors) {
      const RVec mu = math::herm_eigvals(math::hermitize(f * rho_t * f));
      for (Eigen::Index j = 0; j < mu.size(); ++j)
        total -= xlog2_floored(mu[j], floor_value);
    }
  }
  return total;
}

// Exact gradient of the floored objective at the blended point (without the
// (1-eps) chain factor). Where no eigenvalue is floored this reduces to
// K^dag[log2 G]K - sum_z F_z[log2 B_z]F_z; the 1/ln2 indicator terms keep it
// the true differential when flooring engages.
inline Mat gradient_blend(const Mat& rho_t,
                          const std::vector<BlockKrausMap>& maps,
                          double floor_value) {
  const auto n = rho_t.rows();
  const double inv_ln2 = 1.0 / std::log(2.0);
  auto es_rho = math::herm_eig(math::hermitize(rho_t));
  RVec ev = es_rho.eigenvalues().cwiseMax(0.0);
  const Mat sqrt_rho = es_rho.eigenvectors() *
                       ev.cwiseSqrt().asDiagonal() *
                       es_rho.eigenvectors().adjoint();

  Mat total = Mat::Zero(n, n);
  for (const auto& map : maps) {
    const Mat& q2 = map.collect();
    const Mat s = math::hermitize(sqrt_rho * q2 * sqrt_rho);
    auto es_s = math::herm_eig(s);
    const RVec d = es_s.eigenvalues();
    const Mat x = q2 * sqrt_rho * es_s.eigenvectors();
    const double d_drop = std::max(d.cwiseAbs().maxCoeff(), 1.0) * 1e-14;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (d[i] <= d_drop) continue;
      const double coef = std::log2(std::max(d[i], floor_value)) +
                          (d[i] >= floor_value ? inv_ln2 : 0.0);
      total.noalias() += (coef / d[i]) * x.col(i) * x.col(i).adjoint();
    }
    for (const auto& f : map.factors) {
      const Mat b = math::hermitize(f * rho_t * f);
      auto es_b = math::herm_eig(b);
      const RVec mu = es_b.eigenvalues();
      const double mu_drop = std::max(mu.cwiseAbs().maxCoeff(), 1.0) * 1e-14;
      RVec coef(mu.size());
      for (Eigen::Index j = 0; j < mu.size(); ++j) {
        coef[j] = mu[j] <= mu_drop
                      ? 0.0
                      : std::log2(std::max(mu[j], floor_value)) +
                            (mu[j] >= floor_value ? inv_ln2 : 0.0);
      }
      const Mat l = es_b.eigenvectors() * coef.asDiagonal() *
                    es_b.eigenvectors().adjoint();
      total.noalias() -= f * l * f;
    }
  }
  return math::hermitize(total);
}

// ---------------------------------------------------------------------------
// Dense primal-dual interior-point kernel for
//   min <C,X>  s.t.  <A_k,X> = b_k, X >= 0     (Hermitian matrices)
// with an orthonormalized constraint set. NT scaling, Mehrotra-style
// adaptive centering, infeasible start.
// ---------------------------------------------------------------------------

struct OrthoConstraints {
  std::vector<Mat> ops;        // orthonormal in the HS inner product
  std::vector<double> rhs;
};

// Orthonormalize a (possibly dependent) constraint family; throws if a
// dependent combination has inconsistent targets.
inline OrthoConstraints orthonormalize(const std::vector<Mat>& ops,
                                       const std::vector<double>& targets) {
  const int m = int(ops.size());
  OrthoConstraints out;
  if (m == 0) return out;
  Eigen::MatrixXd gram(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j)
      gram(i, j) = gram(j, i) = math::hs_inner(ops[i], ops[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const double lmax = std::max(es.eigenvalues().maxCoeff(), 0.0);
  const double cutoff = std::max(lmax, 1.0) * 1e-12;
  double bnorm = 0.0;
  for (double t : targets) bnorm += t * t;
  bnorm = std::sqrt(bnorm);
  for (int k = 0; k < m; ++k) {
    const double lambda = es.eigenvalues()[k];
    const Eigen::VectorXd v = es.eigenvectors().col(k);
    double vb = 0.0;
    for (int i = 0; i < m; ++i) vb += v[i] * targets[i];
    if (lambda <= cutoff) {
      if (std::abs(vb) > 1e-9 * (1.0 + bnorm))
        throw solver_error(
            "infeasible: linearly dependent constraints with inconsistent "
            "targets (residual " + std::to_string(std::abs(vb)) + ")");
      continue;
    }
    const double inv_sqrt = 1.0 / std::sqrt(lambda);
    Mat op = Mat::Zero(ops[0].rows(), ops[0].cols());
    for (int i = 0; i < m; ++i)
      if (v[i] != 0.0) op += v[i] * ops[i];
    out.ops.push_back(inv_sqrt * op);
    out.rhs.push_back(inv_sqrt * vb);
  }
  return out;
}

struct IpmResult {
  Mat x;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline IpmResult ipm_minimize(const Mat& c, const OrthoConstraints& con,
                              double tol, int max_iter = 100) {
  const int n = int(c.rows());
  const int m = int(con.ops.size());
  const Mat id = Mat::Identity(n, n);

  if (m == 0) {
    // with no constraints the optimum over the PSD cone is 0 if C >= 0
    const RVec ev = math::herm_eigvals(c);
    if (ev.minCoeff() < -1e-10)
      throw solver_error("ipm: unconstrained problem is unbounded below");
    return {Mat::Zero(n, n), 0.0, 0, true};
  }

  double bnorm = 0.0;
  for (double t : con.rhs) bnorm = std::max(bnorm, std::abs(t));
  const double cnorm = c.norm();

  for (int attempt = 0; attempt < 3; ++attempt) {
    const double s0 = std::max({1.0, bnorm, cnorm}) * std::pow(100.0, attempt);
    Mat x = s0 * id, z = s0 * id;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

    int it = 0;
    bool failed = false;
    for (; it < max_iter; ++it) {
      Eigen::VectorXd rp(m);
      for (int k = 0; k < m; ++k)
        rp[k] = con.rhs[k] - math::hs_inner(con.ops[k], x);
      Mat rd = c - z;
      for (int k = 0; k < m; ++k) rd -= y[k] * con.ops[k];
      const double mu = math::hs_inner(x, z) / n;

      const double pobj = math::hs_inner(c, x);
      double dobj = 0.0;
      for (int k = 0; k < m; ++k) dobj += y[k] * con.rhs[k];
      const double pinf = rp.norm() / (1.0 + bnorm);
      const double dinf = rd.norm() / (1.0 + cnorm);
      const double relgap =
          math::hs_inner(x, z) / (1.0 + std::abs(pobj) + std::abs(dobj));
      if (pinf <= tol && dinf <= tol && relgap <= tol)
        return {std::move(x), pobj, it, true};

      // NT scaling point W: W Z W = X
      auto es_x = math::herm_eig(x);
      auto es_z = math::herm_eig(z);
      if (es_x.eigenvalues().minCoeff() <= 0.0 ||
          es_z.eigenvalues().minCoeff() <= 0.0) {
        failed = true;
        break;
      }
      const Mat x_half = es_x.eigenvectors() *
                         es_x.eigenvalues().cwiseSqrt().asDiagonal() *
                         es_x.eigenvectors().adjoint();
      const Mat x_halfinv = es_x.eigenvectors() *
                            es_x.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                            es_x.eigenvectors().adjoint();
      auto es_t = math::herm_eig(math::hermitize(x_half * z * x_half));
      if (es_t.eigenvalues().minCoeff() <= 0.0) {
        failed = true;
        break;
      }
      const Mat w = math::hermitize(
          x_half * es_t.eigenvectors() *
          es_t.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
          es_t.eigenvectors().adjoint() * x_half);
      const Mat z_inv = es_z.eigenvectors() *
                        es_z.eigenvalues().cwiseInverse().asDiagonal() *
                        es_z.eigenvectors().adjoint();

      std::vector<Mat> waw(m);
      for (int k = 0; k < m; ++k)
        waw[k] = math::hermitize(w * con.ops[k] * w);
      Eigen::MatrixXd big(m, m);
      for (int k = 0; k < m; ++k)
        for (int l = 0; l <= k; ++l)
          big(k, l) = big(l, k) = math::hs_inner(con.ops[k], waw[l]);
      Eigen::LDLT<Eigen::MatrixXd> ldlt(big);
      if (ldlt.info() != Eigen::Success) {
        failed = true;
        break;
      }

      const Mat wrdw = math::hermitize(w * rd * w);
      const auto solve_direction = [&](const Mat& rc, Mat& dx,
                                       Eigen::VectorXd& dy, Mat& dz) {
        Eigen::VectorXd h(m);
        for (int k = 0; k < m; ++k)
          h[k] = rp[k] - math::hs_inner(con.ops[k], rc) +
                 math::hs_inner(con.ops[k], wrdw);
        dy = ldlt.solve(h);
        dz = rd;
        for (int k = 0; k < m; ++k) dz -= dy[k] * con.ops[k];
        dz = math::hermitize(dz);
        dx = math::hermitize(rc - w * dz * w);
      };

      const auto step_length = [&](const Mat& dmat, const Mat& half_inv) {
        const RVec ev =
            math::herm_eigvals(math::hermitize(half_inv * dmat * half_inv));
        const double lmin = ev.minCoeff();
        if (lmin >= 0.0) return 1.0;
        return std::min(1.0, -0.98 / lmin);
      };
      const Mat z_halfinv = es_z.eigenvectors() *
                            es_z.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                            es_z.eigenvectors().adjoint();

      // predictor
      Mat dx, dz;
      Eigen::VectorXd dy;
      solve_direction(-x, dx, dy, dz);
      const double ap_aff = step_length(dx, x_halfinv);
      const double ad_aff = step_length(dz, z_halfinv);
      const double mu_aff =
          std::max(0.0, math::hs_inner(x + ap_aff * dx, z + ad_aff * dz)) / n;
      double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);
      sigma = std::clamp(sigma, 1e-6, 0.9);

      // corrector
      solve_direction(sigma * mu * z_inv - x, dx, dy, dz);
      const double ap = step_length(dx, x_halfinv);
      const double ad = step_length(dz, z_halfinv);
      if (ap < 1e-12 && ad < 1e-12) {
        failed = true;
        break;
      }
      x = math::hermitize(x + ap * dx);
      y += ad * dy;
      z = math::hermitize(z + ad * dz);
    }
    (void)failed;  // fall through to a restart with a larger initial scale
  }
  throw solver_error(
      "ipm: interior-point kernel failed to converge after 3 restarts "
      "(n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");
}

}  // namespace detail

// Relative-entropy objective D(G(rho)||Z[G(rho)]) summed over maps, in bits.
// `perturbation` blends rho toward the maximally mixed state before
// evaluation; logs are floored at `log_floor`.
inline double objective(const Mat& rho, const std::vector<BlockKrausMap>& maps,
                        double perturbation = 0.0, double log_floor = 1e-12) {
  if (!math::is_hermitian(rho, 1e-9 * std::max(1.0, rho.cwiseAbs().maxCoeff())))
    throw std::invalid_argument("objective: rho is not Hermitian");
  if (math::herm_eigvals(rho).minCoeff() < -1e-8)
    throw std::invalid_argument("objective: rho is not PSD");
  return detail::objective_blend(detail::blend(math::hermitize(rho), perturbation),
                                 maps, log_floor);
}

// Gradient of the objective above (exact for the floored, blended function),
// symmetrized to exact Hermiticity.
inline Mat gradient(const Mat& rho, const std::vector<BlockKrausMap>& maps,
                    double perturbation = 0.0, double log_floor = 1e-12) {
  const Mat g = detail::gradient_blend(
      detail::blend(math::hermitize(rho), perturbation), maps, log_floor);
  return (1.0 - perturbation) * g;
}

// Shared per-problem machinery: constraint orthonormalization is done once
// and reused by the phase-1 program and every Frank-Wolfe subproblem.
class SpectrahedronKernel {
 public:
  SpectrahedronKernel(const SpectrahedronProblem& problem, double tol)
      : dim_(problem.dim), tol_(tol) {
    for (const auto& op : problem.ops)
      if (!math::is_hermitian(op, 1e-9 * std::max(1.0, op.cwiseAbs().maxCoeff())))
        throw std::invalid_argument(
            "SpectrahedronProblem: constraint operator is not Hermitian");
    main_ = detail::orthonormalize(problem.ops, problem.targets);

    // phase-1 transform: rho = X + t I with t = (1 - Tr X)/dim turns the
    // max-min-eigenvalue program into min Tr X over modified constraints
    std::vector<Mat> ops1;
    std::vector<double> b1;
    const Mat id = Mat::Identity(dim_, dim_);
    for (std::size_t i = 0; i < problem.ops.size(); ++i) {
      const double tr = problem.ops[i].trace().real() / double(dim_);
      ops1.push_back(problem.ops[i] - tr * id);
      b1.push_back(problem.targets[i] - tr);
    }
    phase1_ = detail::orthonormalize(ops1, b1);
  }

  int dim() const { return dim_; }

  // Strictly feasible state of maximal minimum eigenvalue.
  Mat feasible_point(double* min_eig_out = nullptr) const {
    const Mat id = Mat::Identity(dim_, dim_);
    Mat x;
    if (phase1_.ops.empty()) {
      x = Mat::Zero(dim_, dim_);
    } else {
      x = detail::ipm_minimize(id, phase1_, tol_).x;
    }
    const double t = (1.0 - x.trace().real()) / double(dim_);
    if (min_eig_out) *min_eig_out = t;
    if (t <= 1e-10)
      throw solver_error(
          "infeasible: no strictly positive density matrix satisfies the "
          "constraints (interior radius " + std::to_string(t) +
          "); check eta/xi inputs or increase the cutoff");
    return math::hermitize(x + t * id);
  }

  Mat minimize_linear(const Mat& c) const {
    return detail::ipm_minimize(c, main_, tol_).x;
  }

 private:
  int dim_;
  double tol_;
  detail::OrthoConstraints main_, phase1_;
};

// Max-min-eigenvalue feasible point of a problem (standalone entry point).
inline Mat feasible_init(const SpectrahedronProblem& problem,
                         double subproblem_tolerance = 1e-9) {
  return SpectrahedronKernel(problem, subproblem_tolerance).feasible_point();
}

// min Tr(C sigma) over the problem's feasible set (standalone entry point).
inline Mat linear_subproblem(const Mat& c, const SpectrahedronProblem& problem,
                             double subproblem_tolerance = 1e-9) {
  if (!math::is_hermitian(c, 1e-9 * std::max(1.0, c.cwiseAbs().maxCoeff())))
    throw std::invalid_argument("linear_subproblem: C is not Hermitian");
  return SpectrahedronKernel(problem, subproblem_tolerance).minimize_linear(c);
}

namespace detail {

// Golden-section minimization on [0,1]; ties prefer the smaller step.
inline double golden_section(const std::function<double(double)>& phi,
                             double tol, double* value_out) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 1.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = phi(x1), f2 = phi(x2);
  double best_x = x1, best_f = f1;
  if (f2 < best_f) { best_x = x2; best_f = f2; }
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = phi(x1);
      if (f1 < best_f || (f1 == best_f && x1 < best_x)) { best_f = f1; best_x = x1; }
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = phi(x2);
      if (f2 < best_f || (f2 == best_f && x2 < best_x)) { best_f = f2; best_x = x2; }
    }
  }
  if (value_out) *value_out = best_f;
  return best_x;
}

}  // namespace detail

// Frank-Wolfe minimization with certified lower bound.
inline SolverResult minimize(const SpectrahedronProblem& problem,
                             const SolverOptions& options = {}) {
  SpectrahedronKernel kernel(problem, options.subproblem_tolerance);
  const double eps = options.perturbation;
  const double floor_value = options.log_floor;

  Mat rho = kernel.feasible_point();
  double f_cur = detail::objective_blend(detail::blend(rho, eps), problem.maps,
                                         floor_value);
  double best_lb = -std::numeric_limits<double>::infinity();
  SolverReport report;
  report.perturbation = eps;
  report.status = SolverStatus::iteration_limit;

  int stalls = 0;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const Mat grad = (1.0 - eps) * detail::gradient_blend(detail::blend(rho, eps),
                                                          problem.maps, floor_value);
    const Mat sigma = kernel.minimize_linear(grad);
    const double gap = math::hs_inner(grad, rho - sigma);
    best_lb = std::max(best_lb, f_cur - gap);
    if (options.trace)
      *options.trace << it << '\t' << f_cur << '\t' << gap << '\n';
    if (gap < options.gap_tolerance) {
      report.status = SolverStatus::converged;
      break;
    }

    const Mat dir = sigma - rho;
    // the two endpoint sandwiches are precomputed so each line-search
    // evaluation costs only eigenvalue sweeps
    std::vector<std::vector<Mat>> end0, end1;
    for (const auto& map : problem.maps) {
      std::vector<Mat> e0, e1;
      const Mat& q = map.collect_sqrt();
      const Mat rt0 = detail::blend(rho, eps);
      const Mat rt1 = detail::blend(math::hermitize(rho + dir), eps);
      e0.push_back(math::hermitize(q * rt0 * q));
      e1.push_back(math::hermitize(q * rt1 * q));
      for (const auto& f : map.factors) {
        e0.push_back(math::hermitize(f * rt0 * f));
        e1.push_back(math::hermitize(f * rt1 * f));
      }
      end0.push_back(std::move(e0));
      end1.push_back(std::move(e1));
    }
    const auto phi = [&](double gamma) {
      double total = 0.0;
      for (std::size_t mi = 0; mi < problem.maps.size(); ++mi) {
        for (std::size_t bi = 0; bi < end0[mi].size(); ++bi) {
          const Mat mix = (1.0 - gamma) * end0[mi][bi] + gamma * end1[mi][bi];
          const RVec ev = math::herm_eigvals(mix);
          const double sign = bi == 0 ? 1.0 : -1.0;
          for (Eigen::Index i = 0; i < ev.size(); ++i)
            total += sign * detail::xlog2_floored(ev[i], floor_value);
        }
      }
      return total;
    };

    double f_new = 0.0;
    const double gamma = detail::golden_section(phi, 1e-10, &f_new);
    if (f_new >= f_cur - 1e-15 * std::max(1.0, std::abs(f_cur))) {
      if (++stalls >= 3) break;  // no usable descent left at this precision
    } else {
      stalls = 0;
    }
    if (f_new <= f_cur) {
      rho = math::hermitize(rho + gamma * dir);
      f_cur = f_new;
    }
    if (options.trace && it + 1 == options.max_iterations)
      *options.trace << "iteration limit\n";
  }

  report.primal_value = f_cur;
  report.lower_bound = std::min(best_lb, f_cur);
  report.gap = report.primal_value - report.lower_bound;
  report.iterations = it;
  return {report, std::move(rho)};
}

}  // namespace satqkd::solver
