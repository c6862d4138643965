#pragma once

// The free operator on the upper half-space model,
//
//   H0 = -x_n^2 Delta + (n-2) x_n d/dx_n - (n-1)^2/4,
//
// its generalization H_K = -K^2 Delta + (n-2) K (grad K . grad) - (n-1)^2/4
// to an arbitrary positive conformal factor K, and the identities tying them
// to Euclidean Schrodinger operators:
//
//   conjugation:   K^{-(n+2)/2} H_K (K^{(n-2)/2} f) = -Delta f + Q_K f,
//                  Q_K = [(n-2)(n |grad K|^2 - 2 K Lap K) - (n-1)^2]/(4 K^2),
//
//   symmetry:      int_B u H0 v dmu  =  int_dB (v d_nu u - u d_nu v) dsigma
//                                       + int_B v H0 u dmu,
//                  dmu = x_n^{-n} dx,  dsigma = x_n^{-(n-1)} dS,
//                  d_nu = x_n (N . grad),  N the outward Euclidean normal.
//
// Grid fields use plain second-order central differences; the symmetry check
// uses composite Gauss-Legendre quadrature of fixed order, so its residual is
// a clean convergence-order probe.  Analytic derivative bundles keep the
// identities under test separate from differentiation noise.
//
// Also here: the radial form of H0 in the coordinate rho = (cosh r - 1)/2,
//   H0 = -rho(rho+1) d^2/drho^2 - (n rho + n/2) d/drho - (n-1)^2/4,
// equivalently -(1/w_n) d/drho[rho(rho+1) w_n d/drho] - (n-1)^2/4 with the
// geometry module's weight w_n.

#include <Eigen/Core>

#include <array>
#include <complex>
#include <functional>

namespace htev {

enum class Model { HalfSpace, Ball };

// Samples of a function on a regular box grid in one of the model charts.
// values is flattened with axis 0 fastest; npts[k] >= 1 points on axis k.
struct ScalarField {
  Model model = Model::HalfSpace;
  Eigen::VectorXd lo, hi;
  Eigen::VectorXi npts;
  Eigen::VectorXcd values;

  int dim() const { return static_cast<int>(lo.size()); }
  Eigen::VectorXd spacing() const;
  Eigen::Index size() const { return values.size(); }
  Eigen::Index flat(const Eigen::VectorXi& idx) const;
  Eigen::VectorXd point(const Eigen::VectorXi& idx) const;
};

// Checks box/count consistency and that the grid lies strictly inside the
// model's domain (heights > 0, or every corner with |y| < 1).
void validate_grid(const ScalarField& field);

ScalarField sample_field(
    Model model, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
    const Eigen::VectorXi& npts,
    const std::function<std::complex<double>(const Eigen::VectorXd&)>& f);

// H0 applied by central differences; the result lives on the interior
// sub-grid (one layer shaved off each face).  Half-space fields only;
// requires >= 3 points per axis.
ScalarField apply_h0(const ScalarField& field);

// A function with analytic first and second derivatives.
struct SmoothFunction {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<double(const Eigen::VectorXd&)> laplacian;
};

// A positive conformal factor with analytic derivatives.
struct ConformalFactorField {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<double(const Eigen::VectorXd&)> laplacian;
};

// The two standard charts' factors: K = x_n and K = 2/(1-|y|^2).
ConformalFactorField half_space_factor();
ConformalFactorField ball_factor();

// Q_K at a point (dimension read off the point).  Throws std::invalid_argument
// if K <= 0 there.
double conjugated_potential(const ConformalFactorField& K,
                            const Eigen::VectorXd& point);

// Max-norm difference over grid interior between the two sides of the
// conjugation identity: the left side applies H_K to K^{(n-2)/2} f with
// central stencils, the right side uses f's analytic Laplacian and Q_K, so
// the residual is second-order small — halving the spacing shrinks it ~4x.
double conjugation_residual(const ConformalFactorField& K,
                            const SmoothFunction& f, const Eigen::VectorXd& lo,
                            const Eigen::VectorXd& hi, int points_per_axis);

// |LHS - RHS| of the symmetry identity on the Euclidean ball
// {|x - center| <= radius} (strictly inside the half-space), integrated with
// composite 2-point Gauss panels: the residual decays at 4th order in the
// panel count.  u, v need values, gradients, and Laplacians on the closed ball.
double greens_identity_residual(const SmoothFunction& u, const SmoothFunction& v,
                                const Eigen::VectorXd& center, double radius,
                                int panels);

// Coefficients (p2, p1, p0) with H0 = p2 d^2/drho^2 + p1 d/drho + p0 radially:
// (-rho(rho+1), -(n rho + n/2), -(n-1)^2/4).
std::array<double, 3> radial_h0_coefficients(int n, double rho);

} // namespace htev
