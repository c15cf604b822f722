#include "cmbeam/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cmbeam/errors.hpp"

namespace cmbeam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// z_n = Re(x_n^H D x_n) for every snapshot column (D Hermitian).
RealVector output_power(const ComplexMatrix& d, const ComplexMatrix& x) {
  const ComplexMatrix dx = d * x;
  RealVector z(x.cols());
  for (Eigen::Index n = 0; n < x.cols(); ++n)
    z[n] = x.col(n).dot(dx.col(n)).real();
  return z;
}

// Frobenius inner product <A, B> = tr(A^H B), real part.
double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.conjugate().cwiseProduct(b).sum().real();
}

ComplexMatrix psd_cone(const ComplexMatrix& w) {
  return psd_project(HermitianMatrix(w)).matrix();
}

// Augmented-Lagrangian subproblem: the modulus-deviation objective plus, per
// retained constraint, mu_k h_k + (rho/2) h_k^2 with h_k = <A_k, W> - b_k.
// With no constraint operators this is the plain objective.
struct Subproblem {
  const ComplexMatrix& x;
  const std::vector<ComplexMatrix>* ops = nullptr;
  const std::vector<double>* targets = nullptr;
  const std::vector<double>* multipliers = nullptr;
  double rho = 0.0;

  double value(const ComplexMatrix& w) const {
    const RealVector z = output_power(w, x);
    double f = (z.array() - 1.0).square().sum() / static_cast<double>(x.cols());
    f += w.trace().real();
    if (ops) {
      for (std::size_t k = 0; k < ops->size(); ++k) {
        const double h = real_inner((*ops)[k], w) - (*targets)[k];
        f += (*multipliers)[k] * h + 0.5 * rho * h * h;
      }
    }
    return f;
  }

  ComplexMatrix gradient(const ComplexMatrix& w) const {
    const double n = static_cast<double>(x.cols());
    const RealVector z = output_power(w, x);
    ComplexMatrix g =
        (2.0 / n) * (x * (z.array() - 1.0).matrix().asDiagonal() * x.adjoint());
    g += ComplexMatrix::Identity(w.rows(), w.cols());
    if (ops) {
      for (std::size_t k = 0; k < ops->size(); ++k) {
        const double h = real_inner((*ops)[k], w) - (*targets)[k];
        g += ((*multipliers)[k] + rho * h) * (*ops)[k];
      }
    }
    return ComplexMatrix(0.5 * (g + g.adjoint()));
  }
};

// Largest curvature of the subproblem Hessian by 50 power iterations on
// D -> sym((2/N) X diag(Re diag(X^H D X)) X^H) + rho sum_k <A_k, D> A_k.
double lipschitz_estimate(const ComplexMatrix& x,
                          const std::vector<ComplexMatrix>* ops, double rho) {
  const Eigen::Index p = x.rows();
  const double n = static_cast<double>(x.cols());
  const auto apply = [&](const ComplexMatrix& d) -> ComplexMatrix {
    const RealVector zd = output_power(d, x);
    ComplexMatrix r = (2.0 / n) * (x * zd.asDiagonal() * x.adjoint());
    if (ops)
      for (const auto& a : *ops) r += rho * real_inner(a, d) * a;
    return ComplexMatrix(0.5 * (r + r.adjoint()));
  };
  ComplexMatrix d =
      ComplexMatrix::Identity(p, p) / std::sqrt(static_cast<double>(p));
  for (int i = 0; i < 50; ++i) {
    const ComplexMatrix hd = apply(d);
    const double nrm = hd.norm();
    if (nrm < 1e-30) return 0.0;
    d = hd / nrm;
  }
  return real_inner(d, apply(d));
}

struct PgResult {
  ComplexMatrix w;
  double objective;
  std::size_t iterations;
  double residual;
  bool hit_tolerance;
};

// Projected gradient over the PSD cone with optional momentum (restart on
// objective increase) and backtracking halving. The residual is measured
// against `reference_step` rather than the possibly penalty-shortened current
// step, so that a subproblem solved with a tiny step is still judged on the
// scale of the unpenalized problem. `stagnation_limit` = 0 disables the
// objective-stagnation exit (required inside the outer loop, where tightening
// multipliers make early flat stretches meaningless).
PgResult run_pg(const Subproblem& prob, ComplexMatrix w, double step,
                double reference_step, double tol, std::size_t max_iter,
                bool accelerate, double objective_tolerance,
                int stagnation_limit) {
  double f_cur = prob.value(w);
  ComplexMatrix w_prev = w;
  double theta = 1.0;
  double theta_prev = 1.0;
  int stagnant = 0;
  std::size_t it = 0;
  double resid = kInf;
  bool hit = false;
  bool resid_fresh = false;

  while (it < max_iter) {
    ++it;
    const ComplexMatrix g = prob.gradient(w);
    const ComplexMatrix plain = psd_cone(w - step * g);
    resid = (w - plain).norm() / (1.0 + w.norm()) * (reference_step / step);
    if (resid <= tol) {
      hit = true;
      resid_fresh = true;
      break;
    }

    ComplexMatrix w_next;
    double f_next;
    if (accelerate && it > 1) {
      const double beta = (theta_prev - 1.0) / theta;
      const ComplexMatrix y = w + beta * (w - w_prev);
      w_next = psd_cone(y - step * prob.gradient(y));
      f_next = prob.value(w_next);
      if (f_next > f_cur) {  // overshoot: drop momentum for this step
        theta = 1.0;
        w_next = plain;
        f_next = prob.value(w_next);
      }
    } else {
      w_next = plain;
      f_next = prob.value(w_next);
    }

    int backtracks = 0;
    while (f_next > f_cur + 1e-15 * (1.0 + std::abs(f_cur)) &&
           backtracks < 60) {
      step *= 0.5;
      ++backtracks;
      w_next = psd_cone(w - step * g);
      f_next = prob.value(w_next);
    }

    theta_prev = theta;
    theta = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    w_prev = w;
    w = w_next;
    if (stagnation_limit > 0) {
      stagnant = std::abs(f_next - f_cur) <=
                         objective_tolerance * std::max(1.0, std::abs(f_cur))
                     ? stagnant + 1
                     : 0;
    }
    f_cur = f_next;
    if (stagnation_limit > 0 && stagnant >= stagnation_limit) break;
  }

  if (!resid_fresh) {  // stagnation or budget exit: measure at the final point
    const ComplexMatrix g = prob.gradient(w);
    const ComplexMatrix plain = psd_cone(w - step * g);
    resid = (w - plain).norm() / (1.0 + w.norm()) * (reference_step / step);
    hit = resid <= tol;
  }
  return {std::move(w), f_cur, it, resid, hit};
}

std::pair<ComplexVector, double> beamformer_from(const EigenDecomposition& ed) {
  const double lead = ed.eigenvalues[0];
  if (!(lead > 0.0))
    throw DegenerateSolution(
        "lifted optimizer has no positive eigenvalue; no beam direction is "
        "recoverable");
  ComplexVector w = ed.eigenvectors.col(0);
  Eigen::Index pivot = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double m = std::abs(w[i]);
    if (m > best) {
      best = m;
      pivot = i;
    }
  }
  w *= std::conj(w[pivot] / best);
  w[pivot] = best;  // exactly real nonnegative
  double ratio = kInf;
  if (ed.eigenvalues.size() > 1) {
    const double second = ed.eigenvalues[1];
    if (second > 1e-12 * lead) ratio = lead / second;
  }
  return {std::move(w), ratio};
}

LiftedSolution make_solution(HermitianMatrix wm, const ComplexMatrix& x,
                             std::size_t iterations, double resid, double cres,
                             bool converged) {
  const double obj = cma_objective(wm, x);
  EigenDecomposition ed = hermitian_eig(wm);
  auto bf = beamformer_from(ed);
  return LiftedSolution{std::move(wm),    obj,   std::move(ed),
                        std::move(bf.first), bf.second, iterations,
                        resid,           cres,  converged};
}

void check_snapshots(const ComplexMatrix& x) {
  if (x.rows() < 1 || x.cols() < 1)
    throw InvalidArgument("snapshot matrix must be nonempty");
  if (!x.allFinite())
    throw InvalidArgument("snapshot matrix contains non-finite entries");
}

void check_options(const SolverOptions& opts) {
  if (opts.max_iterations < 1)
    throw InvalidArgument("max_iterations must be at least 1");
  if (!(opts.fixed_point_tolerance > 0.0))
    throw InvalidArgument("fixed_point_tolerance must be positive");
  if (!(opts.objective_tolerance > 0.0))
    throw InvalidArgument("objective_tolerance must be positive");
  if (!(opts.penalty_parameter > 0.0))
    throw InvalidArgument("penalty_parameter must be positive");
}

}  // namespace

double cma_objective(const HermitianMatrix& w, const ComplexMatrix& snapshots) {
  check_snapshots(snapshots);
  if (w.dim() != snapshots.rows())
    throw InvalidArgument("matrix dimension does not match snapshot rows");
  return Subproblem{snapshots}.value(w.matrix());
}

HermitianMatrix cma_gradient(const HermitianMatrix& w,
                             const ComplexMatrix& snapshots) {
  check_snapshots(snapshots);
  if (w.dim() != snapshots.rows())
    throw InvalidArgument("matrix dimension does not match snapshot rows");
  return HermitianMatrix(Subproblem{snapshots}.gradient(w.matrix()));
}

LiftedSolution solve_cma(const ComplexMatrix& snapshots,
                         const SolverOptions& opts) {
  check_snapshots(snapshots);
  check_options(opts);
  const Eigen::Index p = snapshots.rows();
  const Subproblem prob{snapshots};
  const double lip = lipschitz_estimate(snapshots, nullptr, 0.0);
  const double step = lip > 0.0 ? 1.0 / (1.01 * lip) : 1.0;
  ComplexMatrix w0 =
      ComplexMatrix::Identity(p, p) / static_cast<double>(p);
  PgResult r =
      run_pg(prob, std::move(w0), step, step, opts.fixed_point_tolerance,
             opts.max_iterations, opts.acceleration, opts.objective_tolerance,
             /*stagnation_limit=*/10);
  return make_solution(HermitianMatrix(r.w), snapshots, r.iterations,
                       r.residual, 0.0, r.hit_tolerance);
}

LiftedSolution solve_lccma(const ComplexMatrix& snapshots,
                           const std::vector<LiftedConstraint>& constraints,
                           const SolverOptions& opts) {
  if (constraints.empty()) return solve_cma(snapshots, opts);
  check_snapshots(snapshots);
  check_options(opts);
  const Eigen::Index p = snapshots.rows();
  const std::size_t dim2 =
      static_cast<std::size_t>(p) * static_cast<std::size_t>(p);
  if (constraints.size() >= dim2)
    throw InvalidArgument(
        "constraint count must stay below the squared array size");
  for (const auto& c : constraints)
    if (c.outer.dim() != p)
      throw InvalidArgument("constraint dimension does not match array size");

  std::vector<const LiftedConstraint*> hom;
  std::vector<const LiftedConstraint*> inhom;
  for (const auto& c : constraints)
    (c.target == 0.0 ? hom : inhom).push_back(&c);

  // Zero-target constraints force W c = 0 (c^H W c = 0 with W PSD), so W
  // lives on the face {U Y U^H : Y PSD} with U spanning the orthogonal
  // complement of the constrained directions. Change basis once and solve in
  // the reduced dimension; this is exact, not a relaxation.
  ComplexMatrix basis;
  bool reduce = false;
  if (!hom.empty()) {
    ComplexMatrix m = ComplexMatrix::Zero(p, p);
    for (const auto* c : hom) m += c->outer.matrix();
    const EigenDecomposition ed = hermitian_eig(HermitianMatrix(m));
    Eigen::Index span = 0;
    while (span < p && ed.eigenvalues[span] > 1e-12 * ed.eigenvalues[0])
      ++span;
    if (span == p)
      throw DegenerateSolution(
          "zero-target constraints leave only W = 0; no beam direction is "
          "recoverable");
    basis = ed.eigenvectors.rightCols(p - span);
    reduce = true;
  }
  const ComplexMatrix xr = reduce ? ComplexMatrix(basis.adjoint() * snapshots)
                                  : snapshots;
  const Eigen::Index pr = xr.rows();

  std::vector<ComplexMatrix> ops;
  std::vector<double> targets;
  ops.reserve(inhom.size());
  targets.reserve(inhom.size());
  for (const auto* c : inhom) {
    ComplexMatrix a = c->outer.matrix();
    if (reduce) a = ComplexMatrix(basis.adjoint() * a * basis);
    ops.push_back(ComplexMatrix(0.5 * (a + a.adjoint())));
    targets.push_back(c->target);
  }

  const double tol = opts.fixed_point_tolerance;
  const double lip0 = lipschitz_estimate(xr, nullptr, 0.0);
  const double ref_step = lip0 > 0.0 ? 1.0 / (1.01 * lip0) : 1.0;
  ComplexMatrix w = ComplexMatrix::Identity(pr, pr) / static_cast<double>(pr);
  std::size_t used = 0;
  double resid = kInf;
  bool inner_ok = false;

  if (ops.empty()) {
    const Subproblem prob{xr};
    PgResult r = run_pg(prob, std::move(w), ref_step, ref_step, tol,
                        opts.max_iterations, opts.acceleration,
                        opts.objective_tolerance, /*stagnation_limit=*/10);
    w = std::move(r.w);
    used = r.iterations;
    resid = r.residual;
    inner_ok = r.hit_tolerance;
  } else {
    // Multiplier updates mu_k += rho h_k; the penalty escalates tenfold when
    // the worst violation fails to shrink by 4x, capped at 1e6 rho0. Inner
    // solves start loose (1e-3) and tighten by 5x per round so early rounds,
    // whose multipliers are still wrong, stay cheap.
    std::vector<double> mu(ops.size(), 0.0);
    double rho = opts.penalty_parameter;
    const double rho_cap = 1e6 * opts.penalty_parameter;
    double inner_tol = std::max(1e-3, tol);
    double prev_viol = kInf;
    std::vector<double> h(ops.size());
    for (int outer = 0; outer < 100 && used < opts.max_iterations; ++outer) {
      const Subproblem prob{xr, &ops, &targets, &mu, rho};
      const double lip = lipschitz_estimate(xr, &ops, rho);
      const double step = lip > 0.0 ? 1.0 / (1.01 * lip) : 1.0;
      PgResult r = run_pg(prob, std::move(w), step, ref_step, inner_tol,
                          opts.max_iterations - used, opts.acceleration,
                          opts.objective_tolerance, /*stagnation_limit=*/0);
      w = std::move(r.w);
      used += r.iterations;
      resid = r.residual;
      double viol = 0.0;
      for (std::size_t k = 0; k < ops.size(); ++k) {
        h[k] = real_inner(ops[k], w) - targets[k];
        viol = std::max(viol, std::abs(h[k]) / (1.0 + targets[k]));
      }
      if (viol <= tol && resid <= tol && inner_tol <= tol) {
        inner_ok = true;
        break;
      }
      for (std::size_t k = 0; k < ops.size(); ++k) mu[k] += rho * h[k];
      if (viol > 0.25 * prev_viol) rho = std::min(10.0 * rho, rho_cap);
      prev_viol = viol;
      inner_tol = std::max(0.2 * inner_tol, tol);
    }
  }

  HermitianMatrix wm(reduce ? ComplexMatrix(basis * w * basis.adjoint()) : w);
  double cres = 0.0;
  for (const auto& c : constraints) {
    const double h = real_inner(c.outer.matrix(), wm.matrix()) - c.target;
    cres = std::max(cres, std::abs(h) / (1.0 + c.target));
  }
  const bool converged = inner_ok && cres <= tol;
  return make_solution(std::move(wm), snapshots, used, resid, cres, converged);
}

std::pair<ComplexVector, double> extract_beamformer(const HermitianMatrix& w) {
  return beamformer_from(hermitian_eig(w));
}

}  // namespace cmbeam
