#include "htev/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace htev {

Eigen::VectorXd ScalarField::spacing() const {
  Eigen::VectorXd h(lo.size());
  for (int k = 0; k < dim(); ++k)
    h[k] = npts[k] > 1 ? (hi[k] - lo[k]) / (npts[k] - 1) : 0.0;
  return h;
}

Eigen::Index ScalarField::flat(const Eigen::VectorXi& idx) const {
  Eigen::Index out = 0, stride = 1;
  for (int k = 0; k < dim(); ++k) {
    out += idx[k] * stride;
    stride *= npts[k];
  }
  return out;
}

Eigen::VectorXd ScalarField::point(const Eigen::VectorXi& idx) const {
  const Eigen::VectorXd h = spacing();
  Eigen::VectorXd x(dim());
  for (int k = 0; k < dim(); ++k) x[k] = lo[k] + h[k] * idx[k];
  return x;
}

void validate_grid(const ScalarField& field) {
  const int n = field.dim();
  if (n < 2) throw std::invalid_argument("ScalarField: dimension must be >= 2");
  if (field.hi.size() != n || field.npts.size() != n)
    throw std::invalid_argument("ScalarField: box/count size mismatch");
  Eigen::Index total = 1;
  for (int k = 0; k < n; ++k) {
    if (field.npts[k] < 1)
      throw std::invalid_argument("ScalarField: need >= 1 point per axis");
    if (!(field.hi[k] >= field.lo[k]))
      throw std::invalid_argument("ScalarField: box corners out of order");
    total *= field.npts[k];
  }
  if (field.values.size() != total)
    throw std::invalid_argument("ScalarField: value count does not match grid");
  if (field.model == Model::HalfSpace) {
    if (!(field.lo[n - 1] > 0.0))
      throw std::invalid_argument("ScalarField: grid must stay above x_n = 0");
  } else {
    // sup of |y| over the box is attained at a corner
    double worst = 0.0;
    for (int corner = 0; corner < (1 << n); ++corner) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        const double c = (corner >> k) & 1 ? field.hi[k] : field.lo[k];
        s += c * c;
      }
      worst = std::max(worst, s);
    }
    if (!(worst < 1.0))
      throw std::invalid_argument("ScalarField: grid must stay inside |y| < 1");
  }
}

ScalarField sample_field(
    Model model, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
    const Eigen::VectorXi& npts,
    const std::function<std::complex<double>(const Eigen::VectorXd&)>& f) {
  ScalarField field;
  field.model = model;
  field.lo = lo;
  field.hi = hi;
  field.npts = npts;
  Eigen::Index total = 1;
  for (int k = 0; k < npts.size(); ++k) total *= std::max(npts[k], 0);
  field.values.resize(total);
  validate_grid(field);

  const int n = field.dim();
  Eigen::VectorXi idx = Eigen::VectorXi::Zero(n);
  for (Eigen::Index i = 0; i < total; ++i) {
    field.values[field.flat(idx)] = f(field.point(idx));
    for (int k = 0; k < n; ++k) {
      if (++idx[k] < npts[k]) break;
      idx[k] = 0;
    }
  }
  return field;
}

ScalarField apply_h0(const ScalarField& field) {
  validate_grid(field);
  if (field.model != Model::HalfSpace)
    throw std::invalid_argument("apply_h0: half-space fields only");
  const int n = field.dim();
  for (int k = 0; k < n; ++k)
    if (field.npts[k] < 3)
      throw std::invalid_argument("apply_h0: need >= 3 points per axis");

  const Eigen::VectorXd h = field.spacing();
  const double kappa = 0.25 * (n - 1) * (n - 1);

  ScalarField out;
  out.model = field.model;
  out.lo = field.lo + h;
  out.hi = field.hi - h;
  out.npts = field.npts.array() - 2;
  out.values.resize(out.npts.cast<Eigen::Index>().prod());

  Eigen::VectorXi inner = Eigen::VectorXi::Zero(n);
  const Eigen::Index total = out.values.size();
  for (Eigen::Index i = 0; i < total; ++i) {
    const Eigen::VectorXi idx = inner.array() + 1; // position on the full grid
    const Eigen::Index c = field.flat(idx);
    const double xn = field.lo[n - 1] + h[n - 1] * idx[n - 1];

    std::complex<double> lap = 0.0;
    for (int k = 0; k < n; ++k) {
      Eigen::VectorXi up = idx, dn = idx;
      ++up[k];
      --dn[k];
      lap += (field.values[field.flat(up)] - 2.0 * field.values[c] +
              field.values[field.flat(dn)]) /
             (h[k] * h[k]);
    }
    Eigen::VectorXi up = idx, dn = idx;
    ++up[n - 1];
    --dn[n - 1];
    const std::complex<double> dvert =
        (field.values[field.flat(up)] - field.values[field.flat(dn)]) /
        (2.0 * h[n - 1]);

    out.values[out.flat(inner)] =
        -xn * xn * lap + (n - 2) * xn * dvert - kappa * field.values[c];
    for (int k = 0; k < n; ++k) {
      if (++inner[k] < out.npts[k]) break;
      inner[k] = 0;
    }
  }
  return out;
}

ConformalFactorField half_space_factor() {
  ConformalFactorField K;
  K.value = [](const Eigen::VectorXd& x) { return x[x.size() - 1]; };
  K.gradient = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
    g[x.size() - 1] = 1.0;
    return g;
  };
  K.laplacian = [](const Eigen::VectorXd&) { return 0.0; };
  return K;
}

ConformalFactorField ball_factor() {
  // K = 2/(1-|y|^2):  grad K = K^2 y,  Lap K = 2 K^3 |y|^2 + n K^2.
  ConformalFactorField K;
  K.value = [](const Eigen::VectorXd& y) {
    return 2.0 / (1.0 - y.squaredNorm());
  };
  K.gradient = [](const Eigen::VectorXd& y) {
    const double k = 2.0 / (1.0 - y.squaredNorm());
    return (k * k * y).eval();
  };
  K.laplacian = [](const Eigen::VectorXd& y) {
    const double r2 = y.squaredNorm();
    const double k = 2.0 / (1.0 - r2);
    const double n = static_cast<double>(y.size());
    return 2.0 * k * k * k * r2 + n * k * k;
  };
  return K;
}

double conjugated_potential(const ConformalFactorField& K,
                            const Eigen::VectorXd& point) {
  const int n = static_cast<int>(point.size());
  const double k = K.value(point);
  if (!(k > 0.0))
    throw std::invalid_argument("conjugated_potential: K must be positive");
  const double grad2 = K.gradient(point).squaredNorm();
  const double lap = K.laplacian(point);
  const double kappa = static_cast<double>((n - 1) * (n - 1));
  return ((n - 2) * (n * grad2 - 2.0 * k * lap) - kappa) / (4.0 * k * k);
}

double conjugation_residual(const ConformalFactorField& K,
                            const SmoothFunction& f, const Eigen::VectorXd& lo,
                            const Eigen::VectorXd& hi, int points_per_axis) {
  const int n = static_cast<int>(lo.size());
  if (n < 2 || hi.size() != n)
    throw std::invalid_argument("conjugation_residual: bad box");
  if (points_per_axis < 3)
    throw std::invalid_argument("conjugation_residual: need >= 3 points per axis");

  const double kappa = 0.25 * (n - 1) * (n - 1);
  Eigen::VectorXd h(n);
  for (int k = 0; k < n; ++k) h[k] = (hi[k] - lo[k]) / (points_per_axis - 1);

  const double half_exp = 0.5 * (n - 2);
  auto g = [&](const Eigen::VectorXd& x) {
    return std::pow(K.value(x), half_exp) * f.value(x);
  };

  double worst = 0.0;
  Eigen::VectorXi idx = Eigen::VectorXi::Ones(n);
  while (true) {
    Eigen::VectorXd x(n);
    for (int k = 0; k < n; ++k) x[k] = lo[k] + h[k] * idx[k];

    const double kx = K.value(x);
    const Eigen::VectorXd gk = K.gradient(x);

    double lap_g = 0.0, advect = 0.0;
    const double gc = g(x);
    for (int k = 0; k < n; ++k) {
      Eigen::VectorXd xp = x, xm = x;
      xp[k] += h[k];
      xm[k] -= h[k];
      const double gp = g(xp), gm = g(xm);
      lap_g += (gp - 2.0 * gc + gm) / (h[k] * h[k]);
      advect += gk[k] * (gp - gm) / (2.0 * h[k]);
    }

    const double hk_g = -kx * kx * lap_g + (n - 2) * kx * advect - kappa * gc;
    const double lhs = std::pow(kx, -0.5 * (n + 2)) * hk_g;
    const double rhs = -f.laplacian(x) + conjugated_potential(K, x) * f.value(x);
    worst = std::max(worst, std::abs(lhs - rhs));

    int k = 0;
    for (; k < n; ++k) {
      if (++idx[k] < points_per_axis - 1) break;
      idx[k] = 1;
    }
    if (k == n) break;
  }
  return worst;
}

namespace {

// Composite 2-point Gauss-Legendre nodes over [a, b] in `panels` panels:
// degree-3 exactness per panel, so smooth integrands converge at 4th order.
void gauss2_nodes(double a, double b, int panels, std::vector<double>& nodes,
                  std::vector<double>& weights) {
  const double w = (b - a) / panels;
  const double offset = 0.5 / std::sqrt(3.0);
  nodes.clear();
  weights.clear();
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * w;
    nodes.push_back(mid - offset * w);
    nodes.push_back(mid + offset * w);
    weights.push_back(0.5 * w);
    weights.push_back(0.5 * w);
  }
}

double apply_h0_analytic(const SmoothFunction& u, const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  const double xn = x[n - 1];
  const double kappa = 0.25 * (n - 1) * (n - 1);
  return -xn * xn * u.laplacian(x) + (n - 2) * xn * u.gradient(x)[n - 1] -
         kappa * u.value(x);
}

} // namespace

double greens_identity_residual(const SmoothFunction& u, const SmoothFunction& v,
                                const Eigen::VectorXd& center, double radius,
                                int panels) {
  const int n = static_cast<int>(center.size());
  if (n != 2 && n != 3)
    throw std::invalid_argument("greens_identity_residual: dimension 2 or 3");
  if (!(radius > 0.0) || !(center[n - 1] - radius > 0.0))
    throw std::invalid_argument(
        "greens_identity_residual: ball must sit strictly inside the half-space");
  if (panels < 1)
    throw std::invalid_argument("greens_identity_residual: need >= 1 panel");

  std::vector<double> rn, rw, an, aw, pn, pw;
  gauss2_nodes(0.0, radius, panels, rn, rw);
  gauss2_nodes(0.0, 2.0 * M_PI, std::max(2 * panels, 4), an, aw);
  if (n == 3) gauss2_nodes(-1.0, 1.0, panels, pn, pw);

  // direction list: (unit vector, angular weight) so that
  // dS(radius r) = r^{n-1} * sum over directions
  std::vector<Eigen::VectorXd> dirs;
  std::vector<double> dirw;
  if (n == 2) {
    for (std::size_t i = 0; i < an.size(); ++i) {
      dirs.push_back(Eigen::Vector2d(std::cos(an[i]), std::sin(an[i])));
      dirw.push_back(aw[i]);
    }
  } else {
    for (std::size_t i = 0; i < an.size(); ++i)
      for (std::size_t j = 0; j < pn.size(); ++j) {
        const double su = std::sqrt(1.0 - pn[j] * pn[j]);
        dirs.push_back(Eigen::Vector3d(su * std::cos(an[i]),
                                       su * std::sin(an[i]), pn[j]));
        dirw.push_back(aw[i] * pw[j]);
      }
  }

  double vol_uv = 0.0, vol_vu = 0.0, boundary = 0.0;
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    for (std::size_t i = 0; i < rn.size(); ++i) {
      const Eigen::VectorXd x = center + rn[i] * dirs[d];
      const double xn = x[n - 1];
      const double measure =
          std::pow(rn[i], n - 1) * dirw[d] * rw[i] * std::pow(xn, -n);
      vol_uv += u.value(x) * apply_h0_analytic(v, x) * measure;
      vol_vu += v.value(x) * apply_h0_analytic(u, x) * measure;
    }
    // boundary term at r = radius: (v d_nu u - u d_nu v) x_n^{-(n-1)} dS
    const Eigen::VectorXd x = center + radius * dirs[d];
    const double xn = x[n - 1];
    const double dnu_u = xn * dirs[d].dot(u.gradient(x));
    const double dnu_v = xn * dirs[d].dot(v.gradient(x));
    boundary += (v.value(x) * dnu_u - u.value(x) * dnu_v) *
                std::pow(radius, n - 1) * dirw[d] * std::pow(xn, -(n - 1));
  }
  return std::abs(vol_uv - boundary - vol_vu);
}

std::array<double, 3> radial_h0_coefficients(int n, double rho) {
  if (n < 2) throw std::invalid_argument("radial_h0_coefficients: n >= 2");
  if (!(rho >= 0.0))
    throw std::invalid_argument("radial_h0_coefficients: rho >= 0");
  return {-rho * (rho + 1.0), -(n * rho + 0.5 * n),
          -0.25 * (n - 1) * (n - 1)};
}

} // namespace htev
