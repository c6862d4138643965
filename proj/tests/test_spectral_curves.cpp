#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "htev/errors.hpp"
#include "htev/operators.hpp"
#include "htev/radial_tev.hpp"
#include "htev/spectral_curves.hpp"

using htev::assemble;
using htev::eigencurves;
using htev::RadialDiscretization;
using htev::RadialProblem;

namespace {

// Reference roots of the boundary-matching determinant for
// (n, R, V0, nu) = (2, 1, 0.5, 1), pinned by the radial solver's own suite.
const double kRoots[4] = {108.775048055, 485.143813794, 1036.30810191,
                          1790.18580778};

// Smooth clamped test profile f(rho) = (P - rho)^2 rho with its exact
// derivatives, used as the consistency oracle against the analytic radial
// coefficients.
struct ClampedProfile {
  double P;
  double value(double rho) const { return (P - rho) * (P - rho) * rho; }
  double d1(double rho) const {
    return (P - rho) * (P - rho) - 2.0 * (P - rho) * rho;
  }
  double d2(double rho) const { return -4.0 * (P - rho) + 2.0 * rho; }
  double h0(int n, double rho) const {
    const std::array<double, 3> c = htev::radial_h0_coefficients(n, rho);
    return c[0] * d2(rho) + c[1] * d1(rho) + c[2] * value(rho);
  }
};

// Largest deviation between the discrete operator rows and the analytic
// action, skipping the first-order natural-condition row at rho = 0 and,
// when rho_min > 0, the near-axis rows where a degenerate weight caps the
// pointwise order.
double consistency_error(const RadialProblem& prob, int m, double rho_min) {
  const RadialDiscretization disc = assemble(prob, m);
  const ClampedProfile f{disc.P};
  Eigen::VectorXd samples(m);
  for (int i = 0; i < m; ++i) samples[i] = f.value(disc.grid[i]);
  const Eigen::VectorXd applied = disc.L * samples;
  double worst = 0.0;
  for (int i = 1; i < m; ++i) {
    if (disc.grid[i] < rho_min) continue;
    worst = std::max(worst, std::abs(applied[i] - f.h0(prob.n, disc.grid[i])));
  }
  return worst;
}

double first_dirichlet_eigenvalue(const RadialProblem& prob, int m) {
  const RadialDiscretization disc = assemble(prob, m);
  const Eigen::MatrixXd wl = disc.weights.asDiagonal() * disc.L;
  // The free radial equation reads (flux part) w = (s^2 + t^2) w, so the
  // operator eigenvalue sigma = s^2 + t^2 - s^2 equals lambda = t^2 itself.
  return htev::generalized_eigenvalues(wl, disc.weights)[0];
}

// Samples of the scaled transmission pair w(P) v - v(P) w on the reduced
// grid; at determinant roots this function carries both boundary clamps.
Eigen::VectorXd transmission_pair_samples(const RadialDiscretization& disc,
                                          const RadialProblem& prob,
                                          double lambda) {
  const double vP = htev::solution_v(prob, lambda, disc.P);
  const double wP = htev::solution_w(prob, lambda, disc.P);
  Eigen::VectorXd u(disc.m - 1);
  for (int i = 0; i < disc.m - 1; ++i) {
    const double rho = disc.grid[i];
    u[i] = wP * htev::solution_v(prob, lambda, rho) -
           vP * htev::solution_w(prob, lambda, rho);
  }
  return u;
}

double min_generalized_eigenvalue(const RadialDiscretization& disc,
                                  const RadialProblem& prob, double lambda) {
  return htev::generalized_eigenvalues(
             htev::t_lambda_matrix(disc, prob, lambda),
             htev::reduced_masses(disc))[0];
}

}  // namespace

TEST_CASE("assembly produces a weighted-symmetric operator on the right grid") {
  const RadialProblem prob(3, 1.0, 0.5, 1);
  const int m = 80;
  const RadialDiscretization disc = assemble(prob, m);

  CHECK(disc.m == m);
  CHECK(disc.grid.size() == m + 1);
  CHECK(disc.grid[0] == 0.0);
  CHECK(std::abs(disc.grid[m] - prob.cap()) <= 1e-15);
  CHECK(std::abs(disc.h - prob.cap() / m) <= 1e-18);

  // All cell masses positive, including the half cell at rho = 0 where the
  // weight vanishes like sqrt(rho) in dimension three.
  CHECK(disc.weights.size() == m);
  CHECK(disc.weights.minCoeff() > 0.0);
  // Half-cell mass below a full midpoint cell but well above zero.
  CHECK(disc.weights[0] < disc.weights[1]);
  CHECK(disc.weights[0] > 0.1 * disc.weights[1]);

  const Eigen::MatrixXd wl = disc.weights.asDiagonal() * disc.L;
  const double defect = (wl - wl.transpose()).norm() / wl.norm();
  CHECK(defect < 1e-12);

  // Banded storage and the dense operator describe the same matrix.
  for (int i = 0; i < m; ++i)
    CHECK(std::abs(wl(i, i) - disc.wl_diag[i]) <=
          1e-12 * std::abs(disc.wl_diag[i]));
  for (int i = 0; i + 1 < m; ++i)
    CHECK(std::abs(wl(i, i + 1) - disc.wl_off[i]) <=
          1e-12 * std::abs(disc.wl_off[i]));

  CHECK_THROWS_AS(assemble(prob, 49), std::invalid_argument);
}

TEST_CASE("discrete operator matches the analytic radial action at second order") {
  // n = 2 has a uniform weight, so the interior rows are second order on the
  // whole grid; for n >= 3 the weight degenerates at the axis and the
  // second-order window starts away from it.
  for (int n : {2, 3, 4}) {
    CAPTURE(n);
    const RadialProblem prob(n, 1.0, 0.5, 1);
    const double rho_min = n == 2 ? 0.0 : prob.cap() / 8.0;
    const double e100 = consistency_error(prob, 100, rho_min);
    const double e200 = consistency_error(prob, 200, rho_min);
    CHECK(e100 < 1e-3);
    CHECK(e100 / e200 >= 3.5);
    CHECK(e100 / e200 <= 4.6);
  }
}

TEST_CASE("first Dirichlet eigenvalue in dimension three converges to pi^2") {
  // In H^3 the free radial solution is sin(t r)/(t sinh r) up to scale, so
  // the first value-clamped eigenvalue at R = 1 is exactly pi^2.  The
  // hypergeometric solver locates it independently of the grid; the
  // discretization converges to it at the reduced axis order ~ h^{3/2}.
  const RadialProblem prob(3, 1.0, 0.5, 1);
  const double P = prob.cap();
  double lo = 5.0, hi = 15.0;
  const bool lo_neg = htev::solution_w(prob, lo, P) < 0.0;
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if ((htev::solution_w(prob, mid, P) < 0.0) == lo_neg)
      lo = mid;
    else
      hi = mid;
  }
  const double lambda1 = 0.5 * (lo + hi);
  const double pi2 = M_PI * M_PI;
  CHECK(std::abs(lambda1 - pi2) <= 1e-9 * pi2);

  const double e100 = std::abs(first_dirichlet_eigenvalue(prob, 100) - lambda1);
  const double e200 = std::abs(first_dirichlet_eigenvalue(prob, 200) - lambda1);
  const double e400 = std::abs(first_dirichlet_eigenvalue(prob, 400) - lambda1);
  CHECK(e400 < 5e-4);
  CHECK(e100 / e200 >= 2.3);
  CHECK(e200 / e400 >= 2.3);
}

TEST_CASE("value-clamped operator stays spectrally bounded below") {
  const RadialProblem prob(2, 1.0, 0.5, 1);
  const RadialDiscretization disc = assemble(prob, 400);
  const Eigen::MatrixXd wl = disc.weights.asDiagonal() * disc.L;
  const Eigen::VectorXd eigs = htev::generalized_eigenvalues(wl, disc.weights);
  // The first Dirichlet-type eigenvalue of the radial operator is strictly
  // positive (first zero of the free solution at the boundary).
  CHECK(eigs[0] >= -1e-3);
  CHECK(eigs[0] > 1.0);
  CHECK(eigs[0] < 50.0);
}

TEST_CASE("fourth-order family is positive where theory demands it") {
  const int m = 200;

  SUBCASE("energy-scaled flavor at lambda = 0") {
    const RadialProblem prob(2, 1.0, 0.5, 1);
    const RadialDiscretization disc = assemble(prob, m);
    const Eigen::MatrixXd t0 = htev::t_lambda_matrix(disc, prob, 0.0);
    CHECK((t0 - t0.transpose()).norm() <= 1e-12 * t0.norm());
    CHECK(t0.rows() == m - 1);
    CHECK(min_generalized_eigenvalue(disc, prob, 0.0) > 0.0);
  }

  SUBCASE("fixed-potential flavor below the spectrum") {
    const RadialProblem prob(2, 1.0, 0.5, 0);
    const RadialDiscretization disc = assemble(prob, m);
    for (double lambda : {-10.0, -1.0, 0.0}) {
      CAPTURE(lambda);
      CHECK(htev::negative_count(disc, prob, lambda) == 0);
      CHECK(min_generalized_eigenvalue(disc, prob, lambda) > 0.0);
    }
  }

  SUBCASE("fixed-potential coercivity mu_min + lambda >= 0") {
    const RadialProblem prob(2, 1.0, 0.5, 0);
    const RadialDiscretization disc = assemble(prob, m);
    for (double lambda : {-10.0, -1.0, 0.0, 1.0, 5.0, 20.0, 100.0}) {
      CAPTURE(lambda);
      CHECK(min_generalized_eigenvalue(disc, prob, lambda) + lambda >= 0.0);
    }
  }

  SUBCASE("energy-scaled attractive flavor has no negative-energy crossings") {
    const RadialProblem prob(2, 1.0, -2.0, 1);
    const RadialDiscretization disc = assemble(prob, m);
    for (double lambda : {-100.0, -75.0, -50.0, -25.0, -10.0, -1.0, -0.25}) {
      CAPTURE(lambda);
      CHECK(htev::negative_count(disc, prob, lambda) == 0);
    }
    CHECK(min_generalized_eigenvalue(disc, prob, -10.0) > 0.0);
  }
}

TEST_CASE("eigencurves descend continuously and cross at the first root") {
  const RadialProblem prob(2, 1.0, 0.5, 1);
  const RadialDiscretization disc = assemble(prob, 200);
  const int count = 5;

  auto grid = [](int points) {
    Eigen::VectorXd g(points);
    for (int j = 0; j < points; ++j) g[j] = 120.0 * j / (points - 1);
    return g;
  };
  const htev::EigencurveTable coarse = eigencurves(disc, prob, grid(41), count);
  const htev::EigencurveTable fine = eigencurves(disc, prob, grid(81), count);

  for (char ok : coarse.solved) CHECK(ok == 1);
  CHECK(coarse.mu.rows() == 41);
  CHECK(coarse.mu.cols() == count);

  // Columns are index-matched ascending at every energy.
  for (int j = 0; j < coarse.mu.rows(); ++j)
    for (int c = 0; c + 1 < count; ++c)
      CHECK(coarse.mu(j, c) <= coarse.mu(j, c + 1));

  // All curves start positive at lambda = 0.
  for (int c = 0; c < count; ++c) CHECK(coarse.mu(0, c) > 0.0);

  // Difference-quotient bound is stable when the energy grid is refined.
  auto lipschitz = [](const htev::EigencurveTable& t) {
    double worst = 0.0;
    for (int j = 0; j + 1 < t.mu.rows(); ++j) {
      const double dl = t.lambdas[j + 1] - t.lambdas[j];
      for (int c = 0; c < t.mu.cols(); ++c)
        worst = std::max(worst, std::abs(t.mu(j + 1, c) - t.mu(j, c)) / dl);
    }
    return worst;
  };
  const double c_coarse = lipschitz(coarse);
  const double c_fine = lipschitz(fine);
  CHECK(std::isfinite(c_coarse));
  CHECK(c_fine <= 1.6 * c_coarse + 1e-9);

  // Exactly one curve crosses zero below 120, at the first determinant root.
  REQUIRE(coarse.crossings.size() == 1);
  const htev::Crossing cross = coarse.crossings[0];
  CHECK(cross.multiplicity == 1);
  CHECK(cross.bracket_lo <= cross.lambda);
  CHECK(cross.lambda <= cross.bracket_hi);
  CHECK(std::abs(cross.lambda - kRoots[0]) / kRoots[0] < 1e-2);

  // The dense table agrees with the determinant on this window.
  const htev::EigenvalueList roots = htev::find_eigenvalues(prob, 120.0);
  const htev::ComparisonReport report =
      htev::crossings_vs_determinant(prob, coarse, roots);
  REQUIRE(report.matched.size() == 1);
  CHECK(report.unmatched_roots.empty());
  CHECK(report.unmatched_crossings.empty());
  CHECK(report.max_rel_gap < 1e-2);
}

TEST_CASE("eigencurve grid and count preconditions are enforced") {
  const RadialProblem prob(2, 1.0, 0.5, 1);
  const RadialDiscretization disc = assemble(prob, 60);
  Eigen::VectorXd good(3);
  good << 0.0, 1.0, 2.0;
  Eigen::VectorXd unsorted(3);
  unsorted << 0.0, 2.0, 1.0;
  Eigen::VectorXd single(1);
  single << 1.0;
  CHECK_THROWS_AS(eigencurves(disc, prob, unsorted, 3), std::invalid_argument);
  CHECK_THROWS_AS(eigencurves(disc, prob, single, 3), std::invalid_argument);
  CHECK_THROWS_AS(eigencurves(disc, prob, good, 0), std::invalid_argument);
  CHECK_THROWS_AS(eigencurves(disc, prob, good, 60), std::invalid_argument);
  CHECK_THROWS_AS(htev::inertia_crossings(prob, 5.0, 5.0, 60),
                  std::invalid_argument);
  CHECK_THROWS_AS(htev::inertia_crossings(prob, 0.0, 10.0, 60, -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(htev::embed_clamped(disc, Eigen::VectorXd::Zero(10)),
                  std::invalid_argument);
}

TEST_CASE("inertia crossings reproduce the determinant roots and refine") {
  const RadialProblem prob(2, 1.0, 0.5, 1);
  const double lambda_hi = 1200.0;

  const htev::EigenvalueList roots = htev::find_eigenvalues(prob, lambda_hi);
  REQUIRE(roots.roots.size() == 3);

  const htev::RefinedCrossings at400 =
      htev::refined_crossings(prob, 0.0, lambda_hi, 400);
  CHECK(!at400.count_mismatch);
  CHECK(at400.coarse.downward_jumps == 0);
  CHECK(at400.fine.downward_jumps == 0);
  CHECK(at400.published.size() == 3);

  const htev::ComparisonReport rep400 =
      htev::crossings_vs_determinant(prob, at400, roots);
  REQUIRE(rep400.matched.size() == 3);
  CHECK(rep400.unmatched_roots.empty());
  CHECK(rep400.unmatched_crossings.empty());
  CHECK(rep400.max_rel_gap < 1e-2);

  // Doubling the resolution tightens the published locations.
  const htev::RefinedCrossings at800 =
      htev::refined_crossings(prob, 0.0, lambda_hi, 800);
  const htev::ComparisonReport rep800 =
      htev::crossings_vs_determinant(prob, at800, roots);
  REQUIRE(rep800.matched.size() == 3);
  CHECK(rep800.max_rel_gap < rep400.max_rel_gap);

  // Formal empty sanity: no roots and no crossings reconcile trivially.
  htev::EigenvalueList empty_roots;
  empty_roots.lambda_max = 0.0;
  empty_roots.scan_step = 1.0;
  empty_roots.spacing_warning = false;
  htev::RefinedCrossings empty_cross;
  empty_cross.count_mismatch = false;
  const htev::ComparisonReport empty_rep =
      htev::crossings_vs_determinant(prob, empty_cross, empty_roots);
  CHECK(empty_rep.matched.empty());
  CHECK(empty_rep.unmatched_roots.empty());
  CHECK(empty_rep.unmatched_crossings.empty());
  CHECK(empty_rep.max_rel_gap == 0.0);
}

TEST_CASE("fourth-order residual vanishes at roots and only at roots") {
  const RadialProblem prob(2, 1.0, 0.5, 1);
  const double root = kRoots[0];
  const double nonroot = 300.0;

  const RadialDiscretization d100 = assemble(prob, 100);
  const RadialDiscretization d200 = assemble(prob, 200);

  const double at_root_100 = htev::fourth_order_residual(
      d100, prob, root, transmission_pair_samples(d100, prob, root));
  const double at_root_200 = htev::fourth_order_residual(
      d200, prob, root, transmission_pair_samples(d200, prob, root));
  CHECK(at_root_100 > 0.0);
  CHECK(at_root_100 / at_root_200 >= 3.0);

  const double off_root_100 = htev::fourth_order_residual(
      d100, prob, nonroot, transmission_pair_samples(d100, prob, nonroot));
  const double off_root_200 = htev::fourth_order_residual(
      d200, prob, nonroot, transmission_pair_samples(d200, prob, nonroot));
  // The derivative clamp is genuinely violated away from roots: the
  // residual stays large (here it grows) instead of converging to zero.
  CHECK(off_root_100 > 100.0 * at_root_100);
  CHECK(off_root_200 > 100.0 * at_root_200);
  CHECK(off_root_200 > 0.5 * off_root_100);

  CHECK(htev::fourth_order_residual(
            d100, prob, root, Eigen::VectorXd::Zero(d100.m - 1)) == 0.0);
  CHECK_THROWS_AS(htev::fourth_order_residual(d100, prob, root,
                                              Eigen::VectorXd::Zero(d100.m)),
                  std::invalid_argument);
}

TEST_CASE("embedding carries the one-sided derivative clamp") {
  const RadialProblem prob(2, 1.0, 0.5, 1);
  const RadialDiscretization disc = assemble(prob, 60);
  Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(disc.m - 1, 1.0, 2.0);
  const Eigen::VectorXd full = htev::embed_clamped(disc, u);
  CHECK(full.size() == disc.m);
  CHECK(full.head(disc.m - 1) == u);
  CHECK(full[disc.m - 1] == 0.25 * u[disc.m - 2]);

  const Eigen::VectorXd masses = htev::reduced_masses(disc);
  CHECK(masses.size() == disc.m - 1);
  CHECK(masses.minCoeff() > 0.0);
  // Last reduced mass folds in the ghost node's cell.
  CHECK(masses[disc.m - 2] ==
        doctest::Approx(disc.weights[disc.m - 2] +
                        0.0625 * disc.weights[disc.m - 1]));
}
