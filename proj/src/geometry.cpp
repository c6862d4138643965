#include "htev/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace htev {

namespace {

// Guard against roundoff pushing the arcosh argument below 1 for nearly
// coincident points.
double safe_acosh(double arg) { return std::acosh(std::max(arg, 1.0)); }

} // namespace

HalfSpacePoint::HalfSpacePoint(Eigen::VectorXd coords) : x(std::move(coords)) {
  if (x.size() < 2)
    throw std::invalid_argument("HalfSpacePoint: dimension must be >= 2");
  if (!(height() > 0.0))
    throw std::invalid_argument("HalfSpacePoint: last coordinate must be positive");
}

BallPoint::BallPoint(Eigen::VectorXd coords) : y(std::move(coords)) {
  if (y.size() < 2)
    throw std::invalid_argument("BallPoint: dimension must be >= 2");
  if (!(y.norm() < 1.0))
    throw std::invalid_argument("BallPoint: norm must be < 1");
}

double metric_factor(const HalfSpacePoint& p) { return p.height(); }

double metric_factor(const BallPoint& p) {
  return 2.0 / (1.0 - p.y.squaredNorm());
}

double distance(const HalfSpacePoint& a, const HalfSpacePoint& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("distance: dimension mismatch");
  const double q = (a.x - b.x).squaredNorm() / (2.0 * a.height() * b.height());
  return safe_acosh(1.0 + q);
}

double distance(const BallPoint& a, const BallPoint& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("distance: dimension mismatch");
  const double q = 2.0 * (a.y - b.y).squaredNorm() /
                   ((1.0 - a.y.squaredNorm()) * (1.0 - b.y.squaredNorm()));
  return safe_acosh(1.0 + q);
}

namespace {

// Phi(z) = 2 (z + e_n)/|z + e_n|^2 - e_n.  Inversion in the sphere of radius
// sqrt(2) centered at -e_n; an involution exchanging the two charts.
Eigen::VectorXd chart_inversion(const Eigen::VectorXd& z) {
  Eigen::VectorXd w = z;
  w[w.size() - 1] += 1.0;
  const double s = w.squaredNorm();
  Eigen::VectorXd out = (2.0 / s) * w;
  out[out.size() - 1] -= 1.0;
  return out;
}

} // namespace

BallPoint to_ball(const HalfSpacePoint& p) {
  return BallPoint(chart_inversion(p.x));
}

HalfSpacePoint to_half_space(const BallPoint& p) {
  return HalfSpacePoint(chart_inversion(p.y));
}

double rho_of_r(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("rho_of_r: r must be >= 0");
  // (cosh r - 1)/2 = sinh^2(r/2); the latter is accurate for small r.
  const double s = std::sinh(0.5 * r);
  return s * s;
}

double r_of_rho(double rho) {
  if (!(rho >= 0.0)) throw std::invalid_argument("r_of_rho: rho must be >= 0");
  return 2.0 * std::asinh(std::sqrt(rho));
}

double cap_radius(double R) {
  if (!(R > 0.0)) throw std::invalid_argument("cap_radius: R must be > 0");
  return rho_of_r(R);
}

double radial_weight(int n, double rho) {
  if (n < 2) throw std::invalid_argument("radial_weight: n must be >= 2");
  if (!(rho >= 0.0)) throw std::invalid_argument("radial_weight: rho must be >= 0");
  if (n == 2) return 1.0; // exponent 0, including the rho = 0 corner
  return std::pow(rho * (rho + 1.0), 0.5 * (n - 2));
}

double rho_from_base(const HalfSpacePoint& p) {
  const int n = p.dim();
  const double xn = p.height();
  double horiz = p.x.head(n - 1).squaredNorm();
  return (horiz + (xn - 1.0) * (xn - 1.0)) / (4.0 * xn);
}

} // namespace htev
