#pragma once

// Models of hyperbolic n-space and the radial coordinates used throughout.
//
// Two charts are supported:
//   * upper half-space  { x in R^n : x_n > 0 }   with metric  dx^2 / x_n^2,
//   * unit ball         { y in R^n : |y| < 1 }   with metric  4 dy^2 / (1-|y|^2)^2.
// Both are conformally Euclidean.  metric_factor returns the conventional
// conformal factor of each chart, K = x_n resp. K = 2/(1-|y|^2); geodesic
// distances are computed from the chart's closed form,
//
//   half-space:  d(a,b) = arcosh(1 + |a-b|^2 / (2 a_n b_n)),
//   ball:        d(a,b) = arcosh(1 + 2 |a-b|^2 / ((1-|a|^2)(1-|b|^2))).
//
// The two charts are identified by the inversion
// Phi(z) = 2 (z+e_n) / |z+e_n|^2 - e_n, which is an involution: the same
// formula maps ball -> half-space and back, sending the ball's origin to
// (0,...,0,1).
//
// Radial problems are written in rho = (cosh r - 1)/2, where r is geodesic
// distance from a center; rho turns the radial Laplace-Beltrami operator into
// a hypergeometric operator.  A geodesic ball of radius R corresponds to
// rho in [0, P] with P = cap_radius(R).

#include <Eigen/Core>

namespace htev {

// Point in the upper half-space chart; coordinates (x_1,...,x_n), x_n > 0.
struct HalfSpacePoint {
  Eigen::VectorXd x;

  explicit HalfSpacePoint(Eigen::VectorXd coords);
  int dim() const { return static_cast<int>(x.size()); }
  double height() const { return x[x.size() - 1]; }
};

// Point in the unit-ball chart; |y| < 1.
struct BallPoint {
  Eigen::VectorXd y;

  explicit BallPoint(Eigen::VectorXd coords);
  int dim() const { return static_cast<int>(y.size()); }
};

// Conventional conformal factor of the chart at the given point:
// x_n for the half-space, 2/(1-|y|^2) for the ball.
double metric_factor(const HalfSpacePoint& p);
double metric_factor(const BallPoint& p);

// Geodesic distance between two points of the same chart (same dimension).
double distance(const HalfSpacePoint& a, const HalfSpacePoint& b);
double distance(const BallPoint& a, const BallPoint& b);

// Chart transition Phi (see file comment).  to_ball(to_half_space(p)) == p
// up to roundoff, and both preserve distance.
BallPoint to_ball(const HalfSpacePoint& p);
HalfSpacePoint to_half_space(const BallPoint& p);

// rho = (cosh r - 1)/2 and its inverse; r is geodesic distance >= 0.
double rho_of_r(double r);
double r_of_rho(double rho);

// Radial coordinate of the boundary sphere of a geodesic ball of radius R > 0:
// P = (cosh R - 1)/2.
double cap_radius(double R);

// Weight w_n(rho) = (rho (rho+1))^{(n-2)/2} making the radial operator
// symmetric: integrals over a ball reduce to  c_n * int f(rho) w_n(rho) drho.
// Satisfies the first-order identity  (rho(rho+1) w_n)' = (n rho + n/2) w_n.
double radial_weight(int n, double rho);

// rho as a function of half-space position, measured from the point
// (0,...,0,1):  rho(x) = (|x'|^2 + (x_n - 1)^2) / (4 x_n).
double rho_from_base(const HalfSpacePoint& p);

} // namespace htev
