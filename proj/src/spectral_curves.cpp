#include "htev/spectral_curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "htev/errors.hpp"
#include "htev/geometry.hpp"

namespace htev {

namespace {

// 8-point Gauss-Legendre rule on [-1, 1] for the half-cell mass at rho = 0,
// where the weight w_n can vanish like rho^{(n-2)/2} and the midpoint rule
// would produce a singular mass matrix.
constexpr int kGaussN = 8;
constexpr double kGaussX[kGaussN] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGaussW[kGaussN] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

double half_cell_mass(int n, double h) {
  const double half = 0.5 * h;
  double acc = 0.0;
  for (int g = 0; g < kGaussN; ++g) {
    const double rho = 0.5 * half * (1.0 + kGaussX[g]);
    acc += kGaussW[g] * radial_weight(n, rho);
  }
  return 0.5 * half * acc;
}

// Symmetric pentadiagonal matrix on the clamped subspace, stored by bands.
struct BandedT {
  Eigen::VectorXd d0;  // diagonal, size r
  Eigen::VectorXd d1;  // first band, size r-1
  Eigen::VectorXd d2;  // second band, size r-2
};

// Assembles E^T [ (1/|V0|) A W^{-1} A + lambda^nu sign(V0) A ] E with
// A = WL - lambda W symmetric tridiagonal, in O(m).
BandedT assemble_banded(const RadialDiscretization& disc,
                        const RadialProblem& prob, double lambda) {
  const int m = disc.m;
  const int r = m - 1;
  const Eigen::VectorXd& M = disc.weights;
  const Eigen::VectorXd ad = disc.wl_diag - lambda * M;
  const Eigen::VectorXd& ao = disc.wl_off;

  Eigen::VectorXd b0(m), b1(m - 1), b2(m - 2);
  for (int i = 0; i < m; ++i) {
    double acc = ad[i] * ad[i] / M[i];
    if (i > 0) acc += ao[i - 1] * ao[i - 1] / M[i - 1];
    if (i < m - 1) acc += ao[i] * ao[i] / M[i + 1];
    b0[i] = acc;
  }
  for (int i = 0; i < m - 1; ++i)
    b1[i] = ao[i] * (ad[i] / M[i] + ad[i + 1] / M[i + 1]);
  for (int i = 0; i < m - 2; ++i) b2[i] = ao[i] * ao[i + 1] / M[i + 1];

  const double inv_v = 1.0 / std::abs(prob.V0);
  const double sigma = prob.V0 > 0.0 ? 1.0 : -1.0;
  const double power = prob.nu == 1 ? lambda : 1.0;
  const double c = sigma * power;

  Eigen::VectorXd t0 = inv_v * b0 + c * ad;
  Eigen::VectorXd t1 = inv_v * b1 + c * ao;
  Eigen::VectorXd t2 = inv_v * b2;

  // Fold the dependent ghost node m-1 into column m-2 with coefficient 1/4.
  const double e = 0.25;
  BandedT out;
  out.d0 = t0.head(r);
  out.d1 = t1.head(r - 1);
  out.d2 = t2.head(r - 2);
  out.d0[r - 1] = t0[m - 2] + 2.0 * e * t1[m - 2] + e * e * t0[m - 1];
  out.d1[r - 2] = t1[m - 3] + e * t2[m - 3];
  // T[m-4, m-2] keeps t2[m-4]: the folded column contributes only through
  // the (zero) third band of the pentadiagonal full matrix.
  return out;
}

// LDL^T inertia of a symmetric pentadiagonal matrix.  Returns the negative
// pivot count, or -1 on a breakdown pivot (relative magnitude below 1e-13).
int banded_negative_pivots(const BandedT& T) {
  const int r = static_cast<int>(T.d0.size());
  Eigen::VectorXd d(r), a(std::max(r - 1, 0)), b(std::max(r - 2, 0));
  int neg = 0;
  for (int j = 0; j < r; ++j) {
    double pivot = T.d0[j];
    double scale = std::abs(T.d0[j]);
    if (j >= 1) {
      const double s = a[j - 1] * a[j - 1] * d[j - 1];
      pivot -= s;
      scale += std::abs(s);
    }
    if (j >= 2) {
      const double s = b[j - 2] * b[j - 2] * d[j - 2];
      pivot -= s;
      scale += std::abs(s);
    }
    if (!(std::abs(pivot) > 1e-13 * (scale + 1e-300))) return -1;
    d[j] = pivot;
    if (pivot < 0.0) ++neg;
    if (j < r - 1) {
      double off = T.d1[j];
      if (j >= 1) off -= a[j - 1] * b[j - 1] * d[j - 1];
      a[j] = off / pivot;
    }
    if (j < r - 2) b[j] = T.d2[j] / pivot;
  }
  return neg;
}

Eigen::MatrixXd banded_to_dense(const BandedT& T) {
  const int r = static_cast<int>(T.d0.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(r, r);
  for (int i = 0; i < r; ++i) out(i, i) = T.d0[i];
  for (int i = 0; i + 1 < r; ++i) {
    out(i, i + 1) = T.d1[i];
    out(i + 1, i) = T.d1[i];
  }
  for (int i = 0; i + 2 < r; ++i) {
    out(i, i + 2) = T.d2[i];
    out(i + 2, i) = T.d2[i];
  }
  return out;
}

void check_lambda(double lambda) {
  if (!std::isfinite(lambda))
    throw std::invalid_argument("spectral energy must be finite");
}

// Clusters refined crossing locations that coincide to 1e-6 relative into
// single entries with summed multiplicity.
std::vector<Crossing> cluster_crossings(std::vector<Crossing> raw) {
  std::sort(raw.begin(), raw.end(),
            [](const Crossing& a, const Crossing& b) { return a.lambda < b.lambda; });
  std::vector<Crossing> out;
  for (const Crossing& c : raw) {
    if (!out.empty() &&
        std::abs(c.lambda - out.back().lambda) <=
            1e-6 * (1.0 + std::abs(out.back().lambda))) {
      out.back().multiplicity += c.multiplicity;
      out.back().bracket_lo = std::min(out.back().bracket_lo, c.bracket_lo);
      out.back().bracket_hi = std::max(out.back().bracket_hi, c.bracket_hi);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

ComparisonReport match_crossings(const std::vector<double>& crossing_values,
                                 const EigenvalueList& roots, double rel_tol) {
  ComparisonReport report;
  report.max_rel_gap = 0.0;
  std::vector<bool> used(crossing_values.size(), false);
  for (const RootRecord& root : roots.roots) {
    int best = -1;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int j = 0; j < static_cast<int>(crossing_values.size()); ++j) {
      if (used[j]) continue;
      const double gap = std::abs(crossing_values[j] - root.lambda);
      if (gap < best_gap) {
        best_gap = gap;
        best = j;
      }
    }
    const double scale = std::max(std::abs(root.lambda), 1e-12);
    if (best >= 0 && best_gap / scale <= rel_tol) {
      used[best] = true;
      report.matched.push_back({root.lambda, crossing_values[best], best_gap / scale});
      report.max_rel_gap = std::max(report.max_rel_gap, best_gap / scale);
    } else {
      report.unmatched_roots.push_back(root.lambda);
    }
  }
  for (int j = 0; j < static_cast<int>(crossing_values.size()); ++j)
    if (!used[j]) report.unmatched_crossings.push_back(crossing_values[j]);
  return report;
}

}  // namespace

RadialDiscretization assemble(const RadialProblem& prob, int m) {
  if (m < 50)
    throw std::invalid_argument(
        "discretization needs at least 50 intervals for the boundary clamp");
  RadialDiscretization disc;
  disc.n = prob.n;
  disc.m = m;
  disc.P = prob.cap();
  disc.h = disc.P / m;
  const double h = disc.h;

  disc.grid.resize(m + 1);
  for (int i = 0; i <= m; ++i) disc.grid[i] = i * h;
  disc.grid[m] = disc.P;

  disc.weights.resize(m);
  disc.weights[0] = half_cell_mass(prob.n, h);
  for (int i = 1; i < m; ++i)
    disc.weights[i] = radial_weight(prob.n, disc.grid[i]) * h;

  // Interface conductivities a_{i+1/2} = (p w)(rho) = (rho(rho+1))^{n/2}.
  Eigen::VectorXd iface(m);
  for (int i = 0; i < m; ++i) {
    const double rho = (i + 0.5) * h;
    iface[i] = std::pow(rho * (rho + 1.0), 0.5 * prob.n);
  }

  const double s = 0.5 * (prob.n - 1);
  disc.wl_diag.resize(m);
  disc.wl_off.resize(m - 1);
  for (int i = 0; i < m; ++i) {
    double flux = iface[i] / h;           // toward node i+1 (node m holds u = 0)
    if (i > 0) flux += iface[i - 1] / h;  // toward node i-1; zero flux at rho = 0
    disc.wl_diag[i] = flux - s * s * disc.weights[i];
  }
  for (int i = 0; i + 1 < m; ++i) disc.wl_off[i] = -iface[i] / h;

  disc.L.setZero(m, m);
  for (int i = 0; i < m; ++i) {
    disc.L(i, i) = disc.wl_diag[i] / disc.weights[i];
    if (i + 1 < m) {
      disc.L(i, i + 1) = disc.wl_off[i] / disc.weights[i];
      disc.L(i + 1, i) = disc.wl_off[i] / disc.weights[i + 1];
    }
  }
  return disc;
}

Eigen::VectorXd reduced_masses(const RadialDiscretization& disc) {
  const int r = disc.m - 1;
  Eigen::VectorXd out = disc.weights.head(r);
  out[r - 1] += 0.0625 * disc.weights[disc.m - 1];
  return out;
}

Eigen::VectorXd embed_clamped(const RadialDiscretization& disc,
                              const Eigen::VectorXd& u_reduced) {
  if (u_reduced.size() != disc.m - 1)
    throw std::invalid_argument("clamped-subspace vector has wrong size");
  Eigen::VectorXd full(disc.m);
  full.head(disc.m - 1) = u_reduced;
  full[disc.m - 1] = 0.25 * u_reduced[disc.m - 2];
  return full;
}

Eigen::MatrixXd t_lambda_matrix(const RadialDiscretization& disc,
                                const RadialProblem& prob, double lambda) {
  check_lambda(lambda);
  return banded_to_dense(assemble_banded(disc, prob, lambda));
}

Eigen::VectorXd generalized_eigenvalues(const Eigen::MatrixXd& T,
                                        const Eigen::VectorXd& masses) {
  if (T.rows() != T.cols() || T.rows() != masses.size())
    throw std::invalid_argument("matrix and mass vector sizes disagree");
  if ((masses.array() <= 0.0).any())
    throw std::invalid_argument("mass matrix must be positive");
  const Eigen::VectorXd scale = masses.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd C = scale.asDiagonal() * T * scale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      0.5 * (C + C.transpose()), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericFailure("symmetric eigensolver did not converge");
  return solver.eigenvalues();
}

int negative_count(const RadialDiscretization& disc, const RadialProblem& prob,
                   double lambda) {
  check_lambda(lambda);
  const double jitter = 1e-9 * (1.0 + std::abs(lambda));
  const double shifts[4] = {0.0, jitter, -jitter, 3.7 * jitter};
  for (double shift : shifts) {
    const int neg = banded_negative_pivots(
        assemble_banded(disc, prob, lambda + shift));
    if (neg >= 0) return neg;
  }
  throw NumericFailure(
      "inertia factorization broke down at jittered energies");
}

CrossingSet inertia_crossings(const RadialProblem& prob, double lambda_lo,
                              double lambda_hi, int m, double scan_step) {
  if (!(std::isfinite(lambda_lo) && std::isfinite(lambda_hi) &&
        lambda_hi > lambda_lo))
    throw std::invalid_argument("crossing scan needs a finite ascending range");
  if (!(scan_step > 0.0))
    throw std::invalid_argument("crossing scan step must be positive");

  const RadialDiscretization disc = assemble(prob, m);
  CrossingSet set;
  set.resolution = m;
  set.downward_jumps = 0;

  std::vector<Crossing> raw;
  double prev_lambda = lambda_lo;
  int prev_count = negative_count(disc, prob, lambda_lo);
  const int steps = static_cast<int>(
      std::ceil((lambda_hi - lambda_lo) / scan_step - 1e-12));
  for (int k = 1; k <= steps; ++k) {
    const double lam = std::min(lambda_lo + k * scan_step, lambda_hi);
    const int count = negative_count(disc, prob, lam);
    if (count < prev_count) ++set.downward_jumps;
    // Bisect each unit increase of the inertia inside this bracket.
    double lo = prev_lambda;
    for (int target = prev_count + 1; target <= count; ++target) {
      double a = lo, b = lam;
      while (b - a > 1e-9 * (std::abs(b) + 1.0)) {
        const double mid = 0.5 * (a + b);
        if (negative_count(disc, prob, mid) >= target)
          b = mid;
        else
          a = mid;
      }
      raw.push_back({0.5 * (a + b), 1, prev_lambda, lam});
      lo = a;  // later thresholds in the same bracket sit at or above this one
    }
    prev_lambda = lam;
    prev_count = count;
  }
  set.crossings = cluster_crossings(std::move(raw));
  return set;
}

RefinedCrossings refined_crossings(const RadialProblem& prob, double lambda_lo,
                                   double lambda_hi, int m, double scan_step) {
  RefinedCrossings out;
  out.coarse = inertia_crossings(prob, lambda_lo, lambda_hi, m, scan_step);
  out.fine = inertia_crossings(prob, lambda_lo, lambda_hi, 2 * m, scan_step);

  // Expand clustered entries back to per-curve values so the two resolutions
  // pair one-for-one even if clustering differed.
  auto expand = [](const CrossingSet& s) {
    std::vector<double> v;
    for (const Crossing& c : s.crossings)
      for (int k = 0; k < c.multiplicity; ++k) v.push_back(c.lambda);
    return v;
  };
  const std::vector<double> coarse = expand(out.coarse);
  const std::vector<double> fine = expand(out.fine);
  out.count_mismatch = coarse.size() != fine.size();
  const std::size_t pairs = std::min(coarse.size(), fine.size());
  out.published.reserve(pairs);
  for (std::size_t k = 0; k < pairs; ++k)
    out.published.push_back((4.0 * fine[k] - coarse[k]) / 3.0);
  return out;
}

EigencurveTable eigencurves(const RadialDiscretization& disc,
                            const RadialProblem& prob,
                            const Eigen::VectorXd& lambda_grid, int count) {
  if (lambda_grid.size() < 2)
    throw std::invalid_argument("eigencurve grid needs at least two energies");
  for (int j = 0; j < lambda_grid.size(); ++j) {
    check_lambda(lambda_grid[j]);
    if (j > 0 && !(lambda_grid[j] > lambda_grid[j - 1]))
      throw std::invalid_argument("eigencurve grid must be strictly ascending");
  }
  const int r = disc.m - 1;
  if (count < 1 || count > r)
    throw std::invalid_argument("curve count must lie in [1, m-1]");

  const Eigen::VectorXd masses = reduced_masses(disc);
  EigencurveTable table;
  table.lambdas = lambda_grid;
  table.mu.resize(lambda_grid.size(), count);
  table.solved.assign(lambda_grid.size(), 1);
  table.resolution = disc.m;

  auto lowest = [&](double lambda) -> Eigen::VectorXd {
    return generalized_eigenvalues(t_lambda_matrix(disc, prob, lambda), masses)
        .head(count);
  };

  for (int j = 0; j < lambda_grid.size(); ++j) {
    try {
      table.mu.row(j) = lowest(lambda_grid[j]).transpose();
    } catch (const NumericFailure&) {
      table.solved[j] = 0;
      table.mu.row(j).setConstant(std::numeric_limits<double>::quiet_NaN());
    }
  }

  std::vector<Crossing> raw;
  for (int c = 0; c < count; ++c) {
    for (int j = 0; j + 1 < lambda_grid.size(); ++j) {
      if (!table.solved[j] || !table.solved[j + 1]) continue;
      const double f_lo = table.mu(j, c);
      const double f_hi = table.mu(j + 1, c);
      if (!(f_lo > 0.0 && f_hi <= 0.0) && !(f_lo <= 0.0 && f_hi > 0.0))
        continue;
      double a = lambda_grid[j], b = lambda_grid[j + 1];
      double fa = f_lo;
      while (b - a > 1e-9 * (std::abs(b) + 1.0)) {
        const double mid = 0.5 * (a + b);
        const double fm = lowest(mid)[c];
        if ((fa > 0.0) == (fm > 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      raw.push_back({0.5 * (a + b), 1, lambda_grid[j], lambda_grid[j + 1]});
    }
  }
  table.crossings = cluster_crossings(std::move(raw));
  return table;
}

ComparisonReport crossings_vs_determinant(const RadialProblem&,
                                          const RefinedCrossings& crossings,
                                          const EigenvalueList& roots,
                                          double rel_tol) {
  return match_crossings(crossings.published, roots, rel_tol);
}

ComparisonReport crossings_vs_determinant(const RadialProblem&,
                                          const EigencurveTable& table,
                                          const EigenvalueList& roots,
                                          double rel_tol) {
  std::vector<double> values;
  for (const Crossing& c : table.crossings)
    for (int k = 0; k < c.multiplicity; ++k) values.push_back(c.lambda);
  return match_crossings(values, roots, rel_tol);
}

double fourth_order_residual(const RadialDiscretization& disc,
                             const RadialProblem& prob, double lambda,
                             const Eigen::VectorXd& u_reduced) {
  check_lambda(lambda);
  const int m = disc.m;
  if (u_reduced.size() != m - 1)
    throw std::invalid_argument(
        "clamped boundary contract: vector must live on the reduced grid");

  const Eigen::VectorXd masses = reduced_masses(disc);
  const double den = u_reduced.cwiseAbs2().dot(masses);
  if (den == 0.0) return 0.0;

  // First application z = (L - lambda) E u through the banded form, then the
  // quadratic form  sum M z^2 / |V0| + sign(V0) lambda^nu sum M u z, which
  // equals u^T T_lambda u exactly.
  const Eigen::VectorXd u = embed_clamped(disc, u_reduced);
  const Eigen::VectorXd& M = disc.weights;
  Eigen::VectorXd z(m);
  for (int i = 0; i < m; ++i) {
    double acc = (disc.wl_diag[i] - lambda * M[i]) * u[i];
    if (i > 0) acc += disc.wl_off[i - 1] * u[i - 1];
    if (i < m - 1) acc += disc.wl_off[i] * u[i + 1];
    z[i] = acc / M[i];
  }
  const double inv_v = 1.0 / std::abs(prob.V0);
  const double c = (prob.V0 > 0.0 ? 1.0 : -1.0) * (prob.nu == 1 ? lambda : 1.0);
  double form = 0.0;
  for (int i = 0; i < m; ++i)
    form += M[i] * (inv_v * z[i] * z[i] + c * u[i] * z[i]);

  // The cells tile [0, P - h/2] only; u vanishes at P but z does not, so the
  // strip [P - h/2, P] carries an O(h) share of the z^2 integral.  Complete
  // the quadrature with the extrapolated boundary value of z.
  const double z_end = 3.0 * z[m - 1] - 3.0 * z[m - 2] + z[m - 3];
  form += 0.5 * disc.h * radial_weight(disc.n, disc.P) * inv_v * z_end * z_end;
  return std::abs(form) / den;
}

}  // namespace htev
