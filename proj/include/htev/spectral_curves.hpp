#pragma once

#include <vector>

#include <Eigen/Dense>

#include "htev/radial_tev.hpp"

namespace htev {

/// Conservative finite-difference discretization of the radial operator
///   H0 u = -(1/w) (p w u')' - ((n-1)/2)^2 u,   p = rho(rho+1),
/// on the uniform grid rho_i = i h, h = P/m, in the weighted inner product
/// with weight w = w_n(rho).  The boundary value u(P) = 0 is eliminated
/// directly (node m is not an unknown), so matrices act on nodes 0..m-1.
/// The derivative clamp u'(P) = 0 is NOT baked into L; it is carried by the
/// one-sided ghost relation u_{m-1} = u_{m-2}/4 (second-order accurate for
/// clamped functions), applied through embed_clamped where the fourth-order
/// quadratic form is assembled.  At rho = 0 the flux p w u' vanishes, which
/// is the natural regularity condition; node 0 keeps the half-cell mass
/// integral of w, exact up to quadrature, so the weight matrix stays
/// positive definite even where w vanishes.
struct RadialDiscretization {
  int n;                   ///< dimension
  int m;                   ///< number of intervals; unknowns are nodes 0..m-1
  double h;                ///< grid spacing P/m
  double P;                ///< ball radius in the rho coordinate
  Eigen::VectorXd grid;    ///< m+1 node locations, 0..P
  Eigen::VectorXd weights; ///< m cell masses (diagonal of W)
  Eigen::VectorXd wl_diag; ///< diagonal of the symmetric tridiagonal W*L
  Eigen::VectorXd wl_off;  ///< first off-diagonal of W*L (size m-1)
  Eigen::MatrixXd L;       ///< dense operator W^{-1} (W L), symmetric in W
};

/// One located zero crossing of an eigencurve.
struct Crossing {
  double lambda;      ///< refined crossing location
  int multiplicity;   ///< number of curves crossing here (clustered)
  double bracket_lo;  ///< scan bracket the crossing was isolated in
  double bracket_hi;
};

/// Crossings located through the negative-inertia count at one resolution.
struct CrossingSet {
  std::vector<Crossing> crossings;
  int resolution;       ///< grid size m the counts were computed at
  int downward_jumps;   ///< inertia decreases seen on the scan grid (expected 0)
};

/// Crossings at resolutions m and 2m combined by Richardson extrapolation:
/// published_k = (4 c_k(2m) - c_k(m)) / 3 removes the leading O(h^2) bias.
struct RefinedCrossings {
  std::vector<double> published;
  CrossingSet coarse;
  CrossingSet fine;
  bool count_mismatch;  ///< resolutions disagreed on the crossing count
};

/// Lowest generalized eigenvalues of the fourth-order family along a
/// lambda grid, index-matched by sorted order (labels may swap at
/// near-degeneracies), plus per-curve sign-change crossings.
struct EigencurveTable {
  Eigen::VectorXd lambdas;        ///< ascending sample grid
  Eigen::MatrixXd mu;             ///< one row per lambda, one column per curve
  std::vector<Crossing> crossings;
  std::vector<char> solved;       ///< per-lambda eigensolver success flags
  int resolution;                 ///< grid size m of the discretization used
};

/// One determinant root paired with its nearest curve crossing.
struct CrossingMatch {
  double root;
  double crossing;
  double rel_gap;
};

/// Two-sided reconciliation of determinant roots with curve crossings.
struct ComparisonReport {
  std::vector<CrossingMatch> matched;
  std::vector<double> unmatched_roots;
  std::vector<double> unmatched_crossings;
  double max_rel_gap;  ///< over matched pairs; 0 when nothing matched
};

/// Builds the discretization for prob's ball at resolution m >= 50.
/// The dense L reproduces the radial coefficient action
/// (-rho(rho+1), -(n rho + n/2), -((n-1)/2)^2) on smooth samples to O(h^2)
/// away from the natural-condition row at rho = 0.  In dimension n >= 3 the
/// weight degenerates like rho^{(n-2)/2} at the axis, so pointwise
/// consistency in the first few rows drops to first order (a standard polar
/// axis artifact); the scheme remains convergent in the spectral sense
/// there, at the full O(h^2) rate for n = 2 and O(h^{3/2}) for n = 3.
RadialDiscretization assemble(const RadialProblem& prob, int m);

/// Diagonal of the reduced mass matrix E^T W E on the clamped subspace
/// (size m-1): equal to the cell masses except the last entry, which folds
/// in the dependent ghost node.
Eigen::VectorXd reduced_masses(const RadialDiscretization& disc);

/// Extends a clamped-subspace vector (size m-1) to the full value-clamped
/// grid (size m) by the ghost relation u_{m-1} = u_{m-2}/4.
Eigen::VectorXd embed_clamped(const RadialDiscretization& disc,
                              const Eigen::VectorXd& u_reduced);

/// Symmetric matrix of the discrete fourth-order family on the clamped
/// subspace (size (m-1) x (m-1)):
///   T_lambda = E^T [ (1/|V0|) (WL - lambda W) W^{-1} (WL - lambda W)
///                    + lambda^nu sign(V0) (WL - lambda W) ] E.
/// Its generalized eigenvalues against reduced_masses(disc) discretize the
/// eigencurves mu_l(lambda).  Exactly symmetric by construction.
Eigen::MatrixXd t_lambda_matrix(const RadialDiscretization& disc,
                                const RadialProblem& prob, double lambda);

/// Generalized eigenvalues of (T, diag(masses)), ascending, via symmetric
/// diagonal scaling.  masses must be strictly positive.
Eigen::VectorXd generalized_eigenvalues(const Eigen::MatrixXd& T,
                                        const Eigen::VectorXd& masses);

/// Number of negative generalized eigenvalues of the fourth-order family at
/// lambda, computed by a banded LDL^T inertia count in O(m) without forming
/// the dense matrix.  A breakdown pivot (lambda on top of an eigenvalue)
/// retries with a jittered lambda; persistent breakdown raises
/// NumericFailure.
int negative_count(const RadialDiscretization& disc, const RadialProblem& prob,
                   double lambda);

/// Locates eigencurve zero crossings on [lambda_lo, lambda_hi] by scanning
/// the inertia count on a step grid and bisecting every upward jump to
/// relative width 1e-9.  Crossings landing within 1e-6 relative of each
/// other are clustered into one entry with summed multiplicity.  Inertia
/// decreases are only counted in downward_jumps.
CrossingSet inertia_crossings(const RadialProblem& prob, double lambda_lo,
                              double lambda_hi, int m, double scan_step = 5.0);

/// Runs inertia_crossings at resolutions m and 2m and publishes the
/// Richardson-extrapolated crossing locations (4 fine - coarse)/3, pairing
/// crossings in order.  The extrapolation removes the leading O(h^2)
/// discretization bias; the pairing is flagged when the counts disagree.
RefinedCrossings refined_crossings(const RadialProblem& prob, double lambda_lo,
                                   double lambda_hi, int m,
                                   double scan_step = 5.0);

/// Dense eigencurve table: the lowest `count` generalized eigenvalues at
/// every grid lambda, with per-curve sign-change crossings refined by
/// bisection on the curve value.  lambda_grid must be finite, ascending,
/// with at least two points.
EigencurveTable eigencurves(const RadialDiscretization& disc,
                            const RadialProblem& prob,
                            const Eigen::VectorXd& lambda_grid, int count);

/// Matches determinant roots against Richardson-published crossings: each
/// root pairs with the nearest published value within rel_tol; leftovers on
/// either side are reported unmatched.
ComparisonReport crossings_vs_determinant(const RadialProblem& prob,
                                          const RefinedCrossings& crossings,
                                          const EigenvalueList& roots,
                                          double rel_tol = 0.05);

/// Same reconciliation against a dense table's per-curve crossings.
ComparisonReport crossings_vs_determinant(const RadialProblem& prob,
                                          const EigencurveTable& table,
                                          const EigenvalueList& roots,
                                          double rel_tol = 0.05);

/// Quadratic-form residual of the discrete fourth-order family at a clamped
/// vector:  |Q_lambda(u)| / (u^T W_reduced u),  0 for u = 0, where
/// Q_lambda(u) = u^T T_lambda u completed by the boundary-strip quadrature
/// (h/2) w_n(P) z(P)^2 / |V0| of the first-application field
/// z = (L - lambda) E u, whose boundary value the cell tiling would
/// otherwise drop at O(h).  On samples of the scaled transmission pair
/// w(P) v - v(P) w the continuum form telescopes to a multiple of the inner
/// product <w, v>, which the boundary Wronskian kills exactly at
/// determinant roots; the completed discrete residual therefore decays at
/// O(h^2) at roots and grows without bound at non-roots, where the
/// derivative clamp is genuinely violated.  (A strong pointwise norm of the
/// composed operator would amplify the O(h^3) one-sided clamp truncation by
/// h^{-7/2} and could not converge; the form is the faithful discrete
/// functional.)  u must have the clamped-subspace size m-1; any other size
/// violates the boundary contract.
double fourth_order_residual(const RadialDiscretization& disc,
                             const RadialProblem& prob, double lambda,
                             const Eigen::VectorXd& u_reduced);

}  // namespace htev
