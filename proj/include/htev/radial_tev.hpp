#pragma once

#include <vector>

#include <Eigen/Dense>

namespace htev {

/// A constant potential supported on a geodesic ball of hyperbolic radius R
/// in H^n.  The potential equals V0 inside the ball and vanishes outside.
///
/// `nu` selects how the potential couples to the spectral parameter lambda
/// in the interior equation:
///   nu = 0  (Schrodinger form):  interior squared frequency lambda - V0,
///   nu = 1  (Helmholtz form):    interior squared frequency lambda(1 - V0),
/// i.e. for nu = 1 the potential acts as a refractive-index contrast.
/// The admissible range V0 < 1, V0 != 0 keeps the nu = 1 interior frequency
/// real and the contrast nontrivial.
struct RadialProblem {
  int n;      ///< dimension of the ambient hyperbolic space, >= 2
  double R;   ///< hyperbolic radius of the supporting ball, > 0
  double V0;  ///< constant potential value, V0 < 1 and V0 != 0
  int nu;     ///< coupling flavor, 0 or 1

  /// Validates all field constraints; throws std::invalid_argument otherwise.
  RadialProblem(int n, double R, double V0, int nu);

  /// Ball radius in the radial coordinate rho = sinh^2(r/2):
  /// cap() = (cosh R - 1) / 2.
  double cap() const;

  /// Interior squared frequency lambda - lambda^nu * V0.  For nu = 0 this
  /// may be negative when lambda < V0; the general hypergeometric evaluator
  /// handles that regime transparently.
  double interior_t_squared(double lambda) const;
};

/// Determinant of the 2x2 boundary-matching system between the regular
/// interior solution v and the regular free solution w at rho = cap().
///
///   value = value_v * slope_w - value_w * slope_v
///
/// where value_* are the solutions evaluated at the ball boundary and
/// slope_* carry their radial derivatives with the common factor -2/n
/// dropped (the true derivative is -(2/n) * slope_*).  Dropping the factor
/// rescales the determinant by a nonzero constant, so zeros and sign
/// changes are unaffected and residual magnitudes are comparable across n.
struct DeterminantSample {
  double lambda;   ///< spectral parameter the sample was taken at
  double value;    ///< value_v * slope_w - value_w * slope_v
  double value_v;  ///< interior solution at the boundary
  double value_w;  ///< free solution at the boundary
  double slope_v;  ///< (s^2 + t_v^2) * shifted hypergeometric value
  double slope_w;  ///< (s^2 + t_w^2) * shifted hypergeometric value
};

/// One refined root of the matching determinant.
struct RootRecord {
  double lambda;       ///< refined root location
  double bracket_lo;   ///< scan bracket the root was found in
  double bracket_hi;
  int iterations;      ///< bisection steps spent refining
  double residual;     ///< |determinant| at the refined root
  /// Sum of the magnitudes of the determinant's two terms at the refined
  /// root: the cancellation scale the residual is meaningfully compared
  /// against (bracket-endpoint values would depend on where the scan grid
  /// happened to land).
  double local_scale;
};

/// Sorted roots of the matching determinant on (0, lambda_max], with the
/// scan configuration and a coarse-grid warning flag.
struct EigenvalueList {
  std::vector<RootRecord> roots;  ///< strictly increasing in lambda
  double lambda_max;
  double scan_step;
  /// True if consecutive roots landed closer than two scan steps, or the
  /// estimated asymptotic zero spacing at lambda_max falls below two scan
  /// steps; either way the scan grid may have merged sign changes.
  bool spacing_warning;
};

/// Helmholtz root re-read as a fixed-potential statement: the flavor-1
/// matching system at energy `energy` coincides with the flavor-0 system
/// whose constant potential is `scaled_potential` = energy * V0.
struct FlavorBridge {
  double energy;
  double scaled_potential;
  double det_multiplicative;  ///< determinant evaluated through the nu = 1 coupling
  double det_additive;        ///< determinant with the scaled potential at the same energy
  double discrepancy;         ///< |det_multiplicative - det_additive|
};

/// Boundedness report for |w(rho)|^2 * rho^(n-1) along a logarithmic grid
/// rho in [1, rho_max].
struct FarfieldReport {
  double sup;           ///< running supremum over the full grid
  double min_value;     ///< minimum over the full grid (positivity witness)
  double slope;         ///< fitted logarithmic growth rate over [window_lo, rho_max]
  double window_lo;     ///< lower end of the trend-fit window
  int samples;          ///< number of grid points used
  bool no_growth_trend; ///< slope <= the requested threshold
};

/// Regular interior solution v(rho) of the radial equation
///   rho(rho+1) v'' + (n rho + n/2) v' + (s^2 + t^2) v = 0,  s = (n-1)/2,
/// with v(0) = 1 and interior frequency t^2 = interior_t_squared(lambda).
/// Requires lambda > 0 and rho >= 0; hypergeometric accuracy failures
/// propagate as NumericFailure.
double solution_v(const RadialProblem& prob, double lambda, double rho);

/// Regular free solution w(rho): same equation with t^2 = lambda.
double solution_w(const RadialProblem& prob, double lambda, double rho);

/// Radial derivative of solution_v at the ball boundary rho = cap(),
/// evaluated through the exact contiguous-shift formula
///   v'(P) = -((s^2 + t^2) / (n/2)) * F(shifted parameters at -P),
/// not by finite differences.
double derivative_v(const RadialProblem& prob, double lambda);

/// Radial derivative of solution_w at rho = cap().
double derivative_w(const RadialProblem& prob, double lambda);

/// Matching determinant assembled from raw parameters: dimension n >= 2,
/// ball radius R > 0, and the two squared frequencies (either sign).
/// `lambda` only labels the sample.  This is the common core behind the
/// flavored wrappers and the flavor bridge.
DeterminantSample matching_determinant_core(int n, double R, double tv_squared,
                                            double tw_squared, double lambda);

/// Matching determinant for the flavored problem at lambda > 0.
DeterminantSample matching_determinant(const RadialProblem& prob, double lambda);

/// Extension of the matching determinant to any real lambda != 0.  Negative
/// lambda drives both squared frequencies negative, which the general
/// evaluator covers with all-real parameter pairs.  Exploratory only: the
/// scan in find_eigenvalues never enters this regime.
DeterminantSample matching_determinant_extended(const RadialProblem& prob,
                                                double lambda);

/// Scans the determinant on the grid lambda = k * scan_step up to
/// lambda_max, brackets every sign change, and bisects each bracket until
/// the relative width falls below 1e-10 and the residual has cancelled to
/// nine digits of the determinant's term scale (or the bracket exhausts
/// double precision).  Requires the peak frequency sqrt(max(t_v^2, t_w^2))
/// at lambda_max to stay within t_cap, the default evaluator accuracy
/// envelope.
EigenvalueList find_eigenvalues(const RadialProblem& prob, double lambda_max,
                                double scan_step = 1.0, double t_cap = 50.0);

/// Closed-form oscillatory model for the determinant's large-lambda
/// behavior:
///   M(lambda) = (1 - r) cos(R(t_w + t_v) - n pi/2) + (1 + r) sin(R(t_w - t_v))
/// with r = t_v / t_w.  For nu = 1 the ratio r equals sqrt(1 - V0)
/// identically.  The determinant tracks lambda^(1 - n/2) * M(lambda) up to
/// a constant factor and a lower-order remainder, so |M| at determinant
/// roots decays like lambda^(-1/2).  Requires lambda > 0 with a real
/// interior frequency.
double asymptotic_m(const RadialProblem& prob, double lambda);

/// Re-expresses a flavor-1 (multiplicative) determinant sample at energy
/// lambda0 as the flavor-0 (additive) sample with constant potential
/// lambda0 * V0 at the same energy.  The two interior frequencies coincide
/// algebraically, so the discrepancy is a pure re-evaluation check; it
/// holds at every lambda0 > 0, not only at roots.  Requires prob.nu == 1.
FlavorBridge helmholtz_to_schrodinger(const RadialProblem& prob, double lambda0);

/// Least-squares logarithmic growth rate of positive samples q against
/// log_rho, with oscillation regressors at angular frequency omega:
/// fits q ~ a + b * L + c * cos(omega L) + d * sin(omega L) over L = log_rho
/// and returns b / (a + b * mean(L)), the trend's d(log q)/d(log rho) at
/// the window center.  The cos/sin columns absorb the bounded interference
/// oscillation that would otherwise bias a plain linear fit.  Requires at
/// least 8 samples.
double oscillation_aware_slope(const Eigen::VectorXd& log_rho,
                               const Eigen::VectorXd& q, double omega);

/// Samples |w(rho)|^2 * rho^(n-1) on a 64-point-per-decade logarithmic grid
/// over [1, rho_max] and fits its growth trend over [10, rho_max] with
/// oscillation_aware_slope at omega = 2 sqrt(lambda).  A slope at or below
/// slope_threshold certifies the expected rho^(1-n) decay of |w|^2.
/// Requires lambda > 0 and rho_max >= 100 (so the fit window spans at
/// least a decade).
FarfieldReport farfield_decay_check(const RadialProblem& prob, double lambda,
                                    double rho_max,
                                    double slope_threshold = 0.05);

}  // namespace htev
