#include "htev/cone_laplace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "htev/errors.hpp"

namespace htev {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::complex<double> dot_bilinear(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a.array() * b.array()).sum();  // no conjugation
}

double factorial(int k) {
  double acc = 1.0;
  for (int i = 2; i <= k; ++i) acc *= i;
  return acc;
}

/// z^(-p) for integer p >= 1 by repeated multiplication (single-valued, no
/// branch selection involved).
std::complex<double> inverse_power(std::complex<double> z, int p) {
  const std::complex<double> inv = 1.0 / z;
  std::complex<double> acc = 1.0;
  for (int i = 0; i < p; ++i) acc *= inv;
  return acc;
}

void check_direction_shape(const Eigen::VectorXcd& rho0, int n) {
  if (rho0.size() != n)
    throw std::invalid_argument("direction dimension must match the cone/polynomial");
}

Eigen::Vector2d unit_at(double theta) { return {std::cos(theta), std::sin(theta)}; }

struct AngularIntegrand {
  const HomogeneousPolynomial& P;
  const Eigen::VectorXcd& rho0;
  double radial_factor;  // (N+1)!
  std::complex<double> operator()(double theta) const {
    const Eigen::Vector2d th = unit_at(theta);
    const std::complex<double> a = -(rho0[0] * th[0] + rho0[1] * th[1]);
    return evaluate(P, th) * radial_factor * inverse_power(a, P.degree + 2);
  }
};

std::complex<double> simpson_recurse(const AngularIntegrand& f, double a, double b,
                                     std::complex<double> fa, std::complex<double> fm,
                                     std::complex<double> fb, std::complex<double> S,
                                     double eps, int depth) {
  if (depth > 40)
    throw NumericFailure("angular quadrature for the sector transform did not converge");
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const std::complex<double> flm = f(lm);
  const std::complex<double> frm = f(rm);
  const std::complex<double> Sl = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const std::complex<double> Sr = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const std::complex<double> delta = Sl + Sr - S;
  if (std::abs(delta) <= 15.0 * eps || (b - a) < 1e-13)
    return Sl + Sr + delta / 15.0;
  return simpson_recurse(f, a, m, fa, flm, fm, Sl, 0.5 * eps, depth + 1) +
         simpson_recurse(f, m, b, fm, frm, fb, Sr, 0.5 * eps, depth + 1);
}

}  // namespace

ConeSpec sector_cone(double theta1, double theta2) {
  if (!(theta2 - theta1 > 0.0) || !(theta2 - theta1 < kPi))
    throw std::invalid_argument("sector opening angle must lie strictly between 0 and pi");
  ConeSpec cone;
  cone.kind = ConeSpec::Kind::Sector;
  cone.n = 2;
  cone.theta1 = theta1;
  cone.theta2 = theta2;
  return cone;
}

ConeSpec orthant_cone(const Eigen::MatrixXd& rotation) {
  if (rotation.rows() != rotation.cols() || rotation.rows() < 2)
    throw std::invalid_argument("orthant rotation must be square of dimension at least 2");
  const int n = static_cast<int>(rotation.rows());
  const double defect =
      (rotation.transpose() * rotation - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > 1e-12)
    throw std::invalid_argument("orthant rotation must be orthogonal");
  ConeSpec cone;
  cone.kind = ConeSpec::Kind::Orthant;
  cone.n = n;
  cone.rotation = rotation;
  return cone;
}

ConeSpec orthant_cone(int n) { return orthant_cone(Eigen::MatrixXd::Identity(n, n)); }

double admissibility_margin(const ConeSpec& cone, const Eigen::VectorXcd& rho0) {
  check_direction_shape(rho0, cone.n);
  if (cone.kind == ConeSpec::Kind::Sector) {
    // For openings below pi the worst ray of a linear functional over the
    // sector is one of the two boundary rays.
    double margin = std::numeric_limits<double>::infinity();
    for (double theta : {cone.theta1, cone.theta2}) {
      const Eigen::Vector2d th = unit_at(theta);
      margin = std::min(margin, -(rho0[0] * th[0] + rho0[1] * th[1]).real());
    }
    return margin;
  }
  double margin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < cone.n; ++j) {
    const Eigen::VectorXd g = cone.rotation.col(j);
    margin = std::min(margin, -(rho0.dot(g.cast<std::complex<double>>())).real());
  }
  return margin;
}

std::vector<AdmissibleDirection> sample_admissible(const ConeSpec& cone, int count,
                                                   unsigned long long seed) {
  if (count < 1) throw std::invalid_argument("sample count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<AdmissibleDirection> out;
  out.reserve(count);
  const std::complex<double> iunit(0.0, 1.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  for (int k = 0; k < count; ++k) {
    if (cone.kind == ConeSpec::Kind::Sector) {
      // Anti-bisector directions u = -(cos psi, sin psi) with psi ranging
      // over the interval keeping both boundary rays at angle < pi/2 from
      // psi; the margin is the smaller boundary cosine.
      const double opening = cone.theta2 - cone.theta1;
      const double slack = 0.02 * (kPi - opening);
      const double lo = cone.theta2 - 0.5 * kPi + slack;
      const double hi = cone.theta1 + 0.5 * kPi - slack;
      const double psi = lo + (hi - lo) * unif(rng);
      const Eigen::Vector2d u{-std::cos(psi), -std::sin(psi)};
      const double sign = unif(rng) < 0.5 ? 1.0 : -1.0;
      const Eigen::Vector2d v{sign * std::sin(psi), -sign * std::cos(psi)};
      AdmissibleDirection dir;
      dir.rho0 = inv_sqrt2 * (u.cast<std::complex<double>>() +
                              iunit * v.cast<std::complex<double>>());
      dir.gamma = inv_sqrt2 * std::min(std::cos(cone.theta1 - psi), std::cos(cone.theta2 - psi));
      out.push_back(std::move(dir));
      continue;
    }
    // Orthant: u is a unit vector with all components strictly negative in
    // the cone frame, v a unit vector orthogonal to u; convexity gives
    // Re(rho0 . x) <= -min_j(-u_j)/sqrt(2) |x| on the cone.
    Eigen::VectorXd u(cone.n), v(cone.n);
    for (int attempt = 0;; ++attempt) {
      if (attempt > 1000)
        throw NumericFailure("admissible-direction sampler failed to find a separating axis");
      for (int j = 0; j < cone.n; ++j) u[j] = -std::abs(gauss(rng));
      const double norm = u.norm();
      if (norm < 1e-12) continue;
      u /= norm;
      if ((-u).minCoeff() >= 0.02) break;
    }
    for (int attempt = 0;; ++attempt) {
      if (attempt > 1000)
        throw NumericFailure("admissible-direction sampler failed to find an orthogonal partner");
      for (int j = 0; j < cone.n; ++j) v[j] = gauss(rng);
      v -= v.dot(u) * u;
      const double norm = v.norm();
      if (norm < 1e-3) continue;
      v /= norm;
      break;
    }
    AdmissibleDirection dir;
    dir.rho0 = (cone.rotation * (inv_sqrt2 * (u.cast<std::complex<double>>() +
                                              iunit * v.cast<std::complex<double>>())))
                   .eval();
    dir.gamma = inv_sqrt2 * (-u).minCoeff();
    out.push_back(std::move(dir));
  }
  return out;
}

std::complex<double> laplace_orthant(const HomogeneousPolynomial& P,
                                     const Eigen::VectorXcd& rho0) {
  check_direction_shape(rho0, P.n);
  for (int j = 0; j < P.n; ++j)
    if (!(rho0[j].real() < 0.0))
      throw std::invalid_argument(
          "orthant transform needs Re(rho0_j) < 0 on every axis for convergence");
  const auto mono = homogeneous_multi_indices(P.n, P.degree);
  std::complex<double> acc = 0.0;
  for (size_t k = 0; k < mono.size(); ++k) {
    const double c = P.coefficients[static_cast<int>(k)];
    if (c == 0.0) continue;
    std::complex<double> term = c;
    for (int j = 0; j < P.n; ++j)
      term *= factorial(mono[k][j]) * inverse_power(-rho0[j], mono[k][j] + 1);
    acc += term;
  }
  return acc;
}

std::complex<double> laplace_sector(const HomogeneousPolynomial& P,
                                    const Eigen::VectorXcd& rho0, const ConeSpec& cone) {
  if (cone.kind != ConeSpec::Kind::Sector)
    throw std::invalid_argument("sector transform requires a sector cone");
  if (P.n != 2) throw std::invalid_argument("sector transform requires a plane polynomial");
  check_direction_shape(rho0, 2);
  if (!(admissibility_margin(cone, rho0) > 0.0))
    throw std::invalid_argument(
        "sector transform needs Re(rho0 . x) < 0 along both boundary rays");

  const AngularIntegrand f{P, rho0, factorial(P.degree + 1)};
  // Coarse composite-Simpson pass to fix the absolute tolerance scale.
  const int panels = 8;
  const double h = (cone.theta2 - cone.theta1) / panels;
  std::complex<double> coarse = 0.0;
  std::vector<std::complex<double>> fl(panels), fm(panels), fr(panels);
  std::vector<std::complex<double>> Sp(panels);
  for (int p = 0; p < panels; ++p) {
    const double a = cone.theta1 + p * h;
    fl[p] = p == 0 ? f(a) : fr[p - 1];
    fm[p] = f(a + 0.5 * h);
    fr[p] = f(a + h);
    Sp[p] = h / 6.0 * (fl[p] + 4.0 * fm[p] + fr[p]);
    coarse += Sp[p];
  }
  const double eps = 1e-11 * std::max(std::abs(coarse), 1e-300) / panels;
  std::complex<double> acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = cone.theta1 + p * h;
    acc += simpson_recurse(f, a, a + h, fl[p], fm[p], fr[p], Sp[p], eps, 0);
  }
  return acc;
}

std::complex<double> laplace_transform(const HomogeneousPolynomial& P,
                                       const Eigen::VectorXcd& rho0, const ConeSpec& cone) {
  if (P.n != cone.n)
    throw std::invalid_argument("polynomial and cone dimensions must match");
  if (cone.kind == ConeSpec::Kind::Sector) return laplace_sector(P, rho0, cone);
  // Rotated orthant: substitute x = R y to land on the standard orthant.
  const HomogeneousPolynomial rotated = substitute_linear(P, cone.rotation);
  const Eigen::VectorXcd pulled =
      cone.rotation.transpose().cast<std::complex<double>>() * rho0;
  return laplace_orthant(rotated, pulled);
}

ScanReport nonvanishing_scan(const HomogeneousPolynomial& P, const ConeSpec& cone,
                             int sample_count, unsigned long long seed) {
  if (coefficient_norm(P) == 0.0)
    throw std::invalid_argument("nonvanishing scan requires a nonzero polynomial");
  const auto dirs = sample_admissible(cone, sample_count, seed);
  ScanReport report;
  report.max_abs = -1.0;
  report.min_abs = std::numeric_limits<double>::infinity();
  report.samples = static_cast<int>(dirs.size());
  for (const auto& dir : dirs) {
    const double mag = std::abs(laplace_transform(P, dir.rho0, cone));
    if (mag > report.max_abs) {
      report.max_abs = mag;
      report.witness = dir.rho0;
      report.witness_gamma = dir.gamma;
    }
    report.min_abs = std::min(report.min_abs, mag);
  }
  return report;
}

namespace {

/// Deterministic antipodally symmetric unit directions for a stencil shell.
std::vector<Eigen::VectorXd> shell_directions(int n, int per_shell, int shell_index) {
  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(per_shell);
  if (n == 2) {
    const double offset = 0.39 * (shell_index + 1);
    for (int k = 0; k < per_shell; ++k) {
      const double t = 2.0 * kPi * k / per_shell + offset;
      dirs.push_back(Eigen::Vector2d{std::cos(t), std::sin(t)});
    }
    return dirs;
  }
  std::mt19937_64 rng(0x51ab5eedULL + 7919ULL * shell_index);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int half = (per_shell + 1) / 2;
  for (int k = 0; k < half; ++k) {
    Eigen::VectorXd d(n);
    double norm = 0.0;
    do {
      for (int j = 0; j < n; ++j) d[j] = gauss(rng);
      norm = d.norm();
    } while (norm < 1e-8);
    d /= norm;
    dirs.push_back(d);
    dirs.push_back(-d);
  }
  dirs.resize(per_shell, dirs.back());
  return dirs;
}

}  // namespace

LeadingTermReport leading_term_check(const std::function<double(const Eigen::VectorXd&)>& field,
                                     const Eigen::VectorXd& center, int max_degree,
                                     double radius, double degree_tol) {
  const int n = static_cast<int>(center.size());
  if (n < 2) throw std::invalid_argument("leading-term stencil needs dimension at least 2");
  if (max_degree < 0) throw std::invalid_argument("maximal degree must be nonnegative");
  if (!(radius > 0.0)) throw std::invalid_argument("stencil radius must be positive");
  if (!(degree_tol > 0.0)) throw std::invalid_argument("degree tolerance must be positive");

  const int fit_degree = max_degree + 1;  // one guard degree above the decision range
  std::vector<std::vector<std::vector<int>>> blocks;
  int total_monomials = 0;
  for (int d = 0; d <= fit_degree; ++d) {
    blocks.push_back(homogeneous_multi_indices(n, d));
    total_monomials += static_cast<int>(blocks.back().size());
  }

  const std::vector<double> shell_scales{1.0, 0.82, 0.66, 0.52};
  const int shells = static_cast<int>(shell_scales.size());
  // three-fold oversampling of the monomial count, spread over the shells
  int per_shell = (3 * total_monomials + shells - 1) / shells;
  per_shell += per_shell % 2;  // keep antipodal pairs intact

  std::vector<Eigen::VectorXd> points;  // unit-scale stencil geometry
  for (size_t s = 0; s < shell_scales.size(); ++s)
    for (const auto& dir : shell_directions(n, per_shell, static_cast<int>(s)))
      points.push_back(shell_scales[s] * dir);
  const int rows = static_cast<int>(points.size());

  Eigen::MatrixXd design(rows, total_monomials);
  for (int r = 0; r < rows; ++r) {
    int col = 0;
    for (int d = 0; d <= fit_degree; ++d)
      for (const auto& alpha : blocks[d]) {
        double v = 1.0;
        for (int j = 0; j < n; ++j)
          for (int rep = 0; rep < alpha[j]; ++rep) v *= points[r][j];
        design(r, col++) = v;
      }
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < total_monomials)
    throw NumericFailure("leading-term stencil fit is rank-deficient at the requested order");

  const std::vector<double> scales{radius, 0.5 * radius, 0.25 * radius};
  std::vector<Eigen::VectorXd> fitted(scales.size());
  double field_scale = std::abs(field(center));
  double finest_residual = 0.0;
  for (size_t s = 0; s < scales.size(); ++s) {
    Eigen::VectorXd samples(rows);
    for (int r = 0; r < rows; ++r) {
      samples[r] = field(center + scales[s] * points[r]);
      if (s + 1 == scales.size()) field_scale = std::max(field_scale, std::abs(samples[r]));
    }
    fitted[s] = qr.solve(samples);
    if (s + 1 == scales.size())
      finest_residual = (design * fitted[s] - samples).norm() / std::sqrt(double(rows));
  }
  const double tiny = 1e-300;

  // Convert the two finest fits from stencil coordinates to Taylor
  // coefficients and pick the first degree with a large, scale-stable block.
  int observed = -1;
  int col_offset = 0;
  Eigen::VectorXd leading_coeffs;
  for (int d = 0; d <= max_degree; ++d) {
    const int width = static_cast<int>(blocks[d].size());
    const Eigen::VectorXd fine_block = fitted[2].segment(col_offset, width);
    const Eigen::VectorXd mid_block = fitted[1].segment(col_offset, width);
    const double size_at_stencil = fine_block.norm();  // contribution at unit stencil radius
    if (size_at_stencil > degree_tol * (field_scale + tiny)) {
      const double p = std::pow(scales[2], -double(d));
      const double pm = std::pow(scales[1], -double(d));
      const Eigen::VectorXd fine_taylor = p * fine_block;
      const Eigen::VectorXd mid_taylor = pm * mid_block;
      const double drift = (fine_taylor - mid_taylor).norm() /
                           std::max(fine_taylor.norm(), degree_tol * (field_scale + tiny));
      if (drift < 0.5) {
        observed = d;
        leading_coeffs = fine_taylor;
        break;
      }
    }
    col_offset += width;
  }
  if (observed < 0)
    throw NumericFailure(
        "no scale-stable leading Taylor block found up to the requested degree");

  LeadingTermReport report;
  report.observed_degree = observed;
  report.leading = HomogeneousPolynomial{n, observed, leading_coeffs};
  if (observed < 2) {
    report.harmonicity_defect = 0.0;
  } else {
    report.harmonicity_defect =
        coefficient_norm(laplacian(report.leading)) / (coefficient_norm(report.leading) + tiny);
  }
  report.fit_residual = finest_residual / (field_scale + tiny);
  return report;
}

}  // namespace htev
