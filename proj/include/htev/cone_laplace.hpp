#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "htev/harmonic.hpp"

namespace htev {

/// Open convex cone in R^n: either a plane sector { r (cos t, sin t) :
/// theta1 < t < theta2 } with opening angle in (0, pi), or a rotated copy
/// R * (0, inf)^n of the positive orthant with R orthogonal.
struct ConeSpec {
  enum class Kind { Sector, Orthant };
  Kind kind;
  int n;
  double theta1 = 0.0;        // sector only
  double theta2 = 0.0;        // sector only
  Eigen::MatrixXd rotation;   // orthant only, n x n orthogonal
};

ConeSpec sector_cone(double theta1, double theta2);
ConeSpec orthant_cone(const Eigen::MatrixXd& rotation);
ConeSpec orthant_cone(int n);  // positive orthant, identity rotation

/// Complex direction rho0 with rho0 . rho0 = 0 and |rho0| = 1 whose real
/// part separates strictly from the cone: Re(rho0 . x) <= -gamma |x| there.
struct AdmissibleDirection {
  Eigen::VectorXcd rho0;
  double gamma;
};

/// Measured separation margin min over the cone's extreme rays of
/// -Re(rho0 . g) with |g| = 1; positive iff the real part of rho0 points
/// strictly away from the (convex, opening < pi) cone.
double admissibility_margin(const ConeSpec& cone, const Eigen::VectorXcd& rho0);

/// Seeded sampler of admissible directions (rho0 = (u + i v)/sqrt(2) with
/// u, v orthonormal and u separating from the cone); deterministic for a
/// fixed seed.
std::vector<AdmissibleDirection> sample_admissible(const ConeSpec& cone, int count,
                                                   unsigned long long seed = 20260822ULL);

/// Laplace transform of P over the positive orthant,
/// integral of exp(rho0 . x) P(x) dx, via the exact factorized form
/// sum_alpha c_alpha prod_j alpha_j! / (-rho0_j)^(alpha_j + 1).
/// Requires Re(rho0_j) < 0 for every j.
std::complex<double> laplace_orthant(const HomogeneousPolynomial& P,
                                     const Eigen::VectorXcd& rho0);

/// Laplace transform of P over a plane sector: the radial integral is
/// evaluated in closed form ((N+1)! (-rho0 . unit)^(-N-2)) and the angular
/// integral by adaptive quadrature to ~1e-10 relative accuracy.  Requires
/// an admissible rho0 for the sector.
std::complex<double> laplace_sector(const HomogeneousPolynomial& P,
                                    const Eigen::VectorXcd& rho0, const ConeSpec& cone);

/// Laplace transform of P over an arbitrary cone (dispatches on the kind;
/// rotated orthants reduce to the standard one by substitution).
std::complex<double> laplace_transform(const HomogeneousPolynomial& P,
                                       const Eigen::VectorXcd& rho0, const ConeSpec& cone);

/// Result of scanning the Laplace transform over sampled admissible
/// directions: the largest and smallest moduli seen and the direction
/// attaining the maximum.
struct ScanReport {
  double max_abs;
  double min_abs;
  Eigen::VectorXcd witness;  // argmax direction
  double witness_gamma;
  int samples;
};

/// Evaluate |L P| over `sample_count` admissible directions of the cone;
/// a max above threshold * coefficient norm certifies the transform is not
/// identically zero.  Requires a nonzero P of matching dimension.
ScanReport nonvanishing_scan(const HomogeneousPolynomial& P, const ConeSpec& cone,
                             int sample_count, unsigned long long seed = 20260822ULL);

/// Leading Taylor behaviour of a scalar field near a point, recovered from
/// least-squares fits on shrinking point stencils (radii r, r/2, r/4).
struct LeadingTermReport {
  int observed_degree;            // degree of the first nonvanishing block
  HomogeneousPolynomial leading;  // fitted homogeneous leading block
  double harmonicity_defect;      // |Laplacian(leading)| / |leading| (0 for degree < 2)
  double fit_residual;            // relative RMS misfit at the finest stencil
};

/// Fit Taylor blocks of `field` around `center` on stencils of radius
/// `radius`, `radius/2`, `radius/4` and return the first degree whose block
/// is stable across scales and larger than `degree_tol` relative to the
/// sampled field scale.  Degrees up to `max_degree` are considered (the fit
/// carries one guard degree).  Throws NumericFailure when no stable leading
/// block exists at the requested order.
LeadingTermReport leading_term_check(const std::function<double(const Eigen::VectorXd&)>& field,
                                     const Eigen::VectorXd& center, int max_degree,
                                     double radius, double degree_tol = 1e-6);

}  // namespace htev
