#include "htev/radial_tev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "htev/errors.hpp"
#include "htev/geometry.hpp"
#include "htev/hyp2f1.hpp"

namespace htev {

namespace {

// Regular solution of rho(rho+1) y'' + (n rho + n/2) y' + (s^2 + t^2) y = 0
// normalized to y(0) = 1, as a balanced hypergeometric value at x = -rho.
double regular_solution(int n, double t_squared, double rho) {
  const double s = 0.5 * (n - 1);
  const double c = 0.5 * n;
  return gauss_2f1_general(s, t_squared, c, -rho);
}

// Boundary derivative with the common factor -2/n dropped:
// y'(P) = -(2/n) * slope_factor(n, t^2, P).
double slope_factor(int n, double t_squared, double P) {
  const double s = 0.5 * (n - 1);
  const double coef = s * s + t_squared;
  return coef * gauss_2f1_general(s + 1.0, t_squared, 0.5 * n + 1.0, -P);
}

void require_positive_lambda(double lambda, const char* who) {
  if (!(lambda > 0.0))
    throw std::invalid_argument(std::string(who) + ": lambda must be positive, got " +
                                std::to_string(lambda));
}

}  // namespace

RadialProblem::RadialProblem(int n_, double R_, double V0_, int nu_)
    : n(n_), R(R_), V0(V0_), nu(nu_) {
  if (n < 2) throw std::invalid_argument("RadialProblem: dimension must be >= 2");
  if (!(R > 0.0) || !std::isfinite(R))
    throw std::invalid_argument("RadialProblem: ball radius must be positive and finite");
  if (!(V0 < 1.0) || V0 == 0.0 || !std::isfinite(V0))
    throw std::invalid_argument(
        "RadialProblem: potential must satisfy V0 < 1 and V0 != 0");
  if (nu != 0 && nu != 1)
    throw std::invalid_argument("RadialProblem: coupling flavor nu must be 0 or 1");
}

double RadialProblem::cap() const { return rho_of_r(R); }

double RadialProblem::interior_t_squared(double lambda) const {
  return lambda - (nu == 1 ? lambda * V0 : V0);
}

double solution_v(const RadialProblem& prob, double lambda, double rho) {
  require_positive_lambda(lambda, "solution_v");
  if (!(rho >= 0.0))
    throw std::invalid_argument("solution_v: rho must be nonnegative");
  return regular_solution(prob.n, prob.interior_t_squared(lambda), rho);
}

double solution_w(const RadialProblem& prob, double lambda, double rho) {
  require_positive_lambda(lambda, "solution_w");
  if (!(rho >= 0.0))
    throw std::invalid_argument("solution_w: rho must be nonnegative");
  return regular_solution(prob.n, lambda, rho);
}

double derivative_v(const RadialProblem& prob, double lambda) {
  require_positive_lambda(lambda, "derivative_v");
  return -(2.0 / prob.n) *
         slope_factor(prob.n, prob.interior_t_squared(lambda), prob.cap());
}

double derivative_w(const RadialProblem& prob, double lambda) {
  require_positive_lambda(lambda, "derivative_w");
  return -(2.0 / prob.n) * slope_factor(prob.n, lambda, prob.cap());
}

DeterminantSample matching_determinant_core(int n, double R, double tv_squared,
                                            double tw_squared, double lambda) {
  if (n < 2)
    throw std::invalid_argument("matching_determinant_core: dimension must be >= 2");
  if (!(R > 0.0))
    throw std::invalid_argument("matching_determinant_core: radius must be positive");
  const double P = rho_of_r(R);
  DeterminantSample out;
  out.lambda = lambda;
  out.value_v = regular_solution(n, tv_squared, P);
  out.value_w = regular_solution(n, tw_squared, P);
  out.slope_v = slope_factor(n, tv_squared, P);
  out.slope_w = slope_factor(n, tw_squared, P);
  out.value = out.value_v * out.slope_w - out.value_w * out.slope_v;
  return out;
}

DeterminantSample matching_determinant(const RadialProblem& prob, double lambda) {
  require_positive_lambda(lambda, "matching_determinant");
  return matching_determinant_core(prob.n, prob.R, prob.interior_t_squared(lambda),
                                   lambda, lambda);
}

DeterminantSample matching_determinant_extended(const RadialProblem& prob,
                                                double lambda) {
  if (lambda == 0.0 || !std::isfinite(lambda))
    throw std::invalid_argument(
        "matching_determinant_extended: lambda must be a nonzero finite real");
  return matching_determinant_core(prob.n, prob.R, prob.interior_t_squared(lambda),
                                   lambda, lambda);
}

namespace {

RootRecord refine_bracket(const RadialProblem& prob, double lo, double hi,
                          double f_lo, double f_hi) {
  RootRecord rec;
  rec.bracket_lo = lo;
  rec.bracket_hi = hi;
  rec.lambda = 0.5 * (lo + hi);
  rec.residual = std::min(std::abs(f_lo), std::abs(f_hi));
  rec.local_scale = std::max(std::abs(f_lo), std::abs(f_hi));
  int it = 0;
  // Bisect past the width criterion until the determinant itself has
  // cancelled to nine digits of its term scale: at the width stop alone the
  // midpoint can still carry |det| ~ det' * width, above the contract.
  while (it < 200) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;  // bracket narrowed to adjacent doubles
    const DeterminantSample sample = matching_determinant(prob, mid);
    ++it;
    const double scale = std::abs(sample.value_v * sample.slope_w) +
                         std::abs(sample.value_w * sample.slope_v);
    if (std::abs(sample.value) < rec.residual) {
      rec.residual = std::abs(sample.value);
      rec.lambda = mid;
      rec.local_scale = scale;
    }
    if (sample.value == 0.0) break;
    if ((f_lo < 0.0) == (sample.value < 0.0)) {
      lo = mid;
      f_lo = sample.value;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-10 * 0.5 * (lo + hi) && rec.residual <= 1e-9 * scale) break;
  }
  rec.iterations = it;
  return rec;
}

}  // namespace

EigenvalueList find_eigenvalues(const RadialProblem& prob, double lambda_max,
                                double scan_step, double t_cap) {
  if (!(lambda_max > 0.0) || !(scan_step > 0.0) || !(t_cap > 0.0))
    throw std::invalid_argument(
        "find_eigenvalues: lambda_max, scan_step and t_cap must be positive");
  const double peak_t2 =
      std::max({prob.interior_t_squared(lambda_max), lambda_max, 0.0});
  if (std::sqrt(peak_t2) > t_cap)
    throw std::invalid_argument(
        "find_eigenvalues: lambda_max exceeds the accuracy envelope (peak frequency " +
        std::to_string(std::sqrt(peak_t2)) + " > t_cap " + std::to_string(t_cap) + ")");

  EigenvalueList out;
  out.lambda_max = lambda_max;
  out.scan_step = scan_step;
  out.spacing_warning = false;

  const long steps = static_cast<long>(std::floor(lambda_max / scan_step + 1e-9));
  double prev_lambda = 0.0;
  double prev_det = 0.0;
  bool have_prev = false;
  for (long k = 1; k <= steps; ++k) {
    const double lam = static_cast<double>(k) * scan_step;
    const DeterminantSample sample = matching_determinant(prob, lam);
    const double det = sample.value;
    if (det == 0.0) {
      RootRecord rec;
      rec.lambda = lam;
      rec.bracket_lo = rec.bracket_hi = lam;
      rec.iterations = 0;
      rec.residual = 0.0;
      rec.local_scale = std::abs(sample.value_v * sample.slope_w) +
                        std::abs(sample.value_w * sample.slope_v);
      out.roots.push_back(rec);
    } else if (have_prev && prev_det * det < 0.0) {
      out.roots.push_back(refine_bracket(prob, prev_lambda, lam, prev_det, det));
    }
    prev_lambda = lam;
    prev_det = det;
    have_prev = (det != 0.0);
  }

  for (std::size_t i = 1; i < out.roots.size(); ++i)
    if (out.roots[i].lambda - out.roots[i - 1].lambda < 2.0 * scan_step)
      out.spacing_warning = true;
  // Asymptotic guard: the fastest determinant oscillation advances its phase
  // at rate R * d(t_v + t_w)/dlambda, so consecutive zeros sit about
  // pi / (R * rate) apart in lambda near lambda_max.
  const double dl = 1e-6 * lambda_max;
  auto phase = [&prob](double lam) {
    return std::sqrt(std::max(prob.interior_t_squared(lam), 0.0)) + std::sqrt(lam);
  };
  const double rate = (phase(lambda_max) - phase(lambda_max - dl)) / dl;
  if (rate > 0.0 && M_PI / (prob.R * rate) < 2.0 * scan_step)
    out.spacing_warning = true;
  return out;
}

double asymptotic_m(const RadialProblem& prob, double lambda) {
  require_positive_lambda(lambda, "asymptotic_m");
  const double tv2 = prob.interior_t_squared(lambda);
  if (tv2 < 0.0)
    throw std::invalid_argument(
        "asymptotic_m: interior frequency is imaginary at this lambda");
  const double tv = std::sqrt(tv2);
  const double tw = std::sqrt(lambda);
  const double ratio = tv / tw;
  return (1.0 - ratio) * std::cos(prob.R * (tw + tv) - prob.n * M_PI / 2.0) +
         (1.0 + ratio) * std::sin(prob.R * (tw - tv));
}

FlavorBridge helmholtz_to_schrodinger(const RadialProblem& prob, double lambda0) {
  if (prob.nu != 1)
    throw std::invalid_argument(
        "helmholtz_to_schrodinger: expects a multiplicative-coupling problem (nu == 1)");
  require_positive_lambda(lambda0, "helmholtz_to_schrodinger");
  FlavorBridge bridge;
  bridge.energy = lambda0;
  bridge.scaled_potential = lambda0 * prob.V0;
  bridge.det_multiplicative = matching_determinant(prob, lambda0).value;
  // Additive side: energy minus the scaled constant potential, the nu = 0
  // frequency formula applied to lambda0 * V0.
  bridge.det_additive =
      matching_determinant_core(prob.n, prob.R, lambda0 - bridge.scaled_potential,
                                lambda0, lambda0)
          .value;
  bridge.discrepancy = std::abs(bridge.det_multiplicative - bridge.det_additive);
  return bridge;
}

double oscillation_aware_slope(const Eigen::VectorXd& log_rho,
                               const Eigen::VectorXd& q, double omega) {
  if (log_rho.size() != q.size())
    throw std::invalid_argument("oscillation_aware_slope: size mismatch");
  if (log_rho.size() < 8)
    throw std::invalid_argument("oscillation_aware_slope: need at least 8 samples");
  Eigen::MatrixXd design(log_rho.size(), 4);
  design.col(0).setOnes();
  design.col(1) = log_rho;
  design.col(2) = (omega * log_rho.array()).cos();
  design.col(3) = (omega * log_rho.array()).sin();
  const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(q);
  const double level = beta[0] + beta[1] * log_rho.mean();
  if (!(level > 0.0)) {
    // The trend line dipped to zero inside the window; report the signed
    // raw rate against the window's mean value instead of dividing by it.
    const double mean_q = q.mean();
    return beta[1] / std::max(mean_q, 1e-300);
  }
  return beta[1] / level;
}

FarfieldReport farfield_decay_check(const RadialProblem& prob, double lambda,
                                    double rho_max, double slope_threshold) {
  require_positive_lambda(lambda, "farfield_decay_check");
  if (!(rho_max >= 100.0))
    throw std::invalid_argument(
        "farfield_decay_check: rho_max must be >= 100 so the trend window "
        "[10, rho_max] spans at least a decade");

  const int points_per_decade = 64;
  const double decades = std::log10(rho_max);
  const int m = static_cast<int>(std::ceil(decades * points_per_decade)) + 1;

  FarfieldReport rep;
  rep.sup = 0.0;
  rep.min_value = std::numeric_limits<double>::infinity();
  rep.window_lo = 10.0;
  rep.samples = m;

  std::vector<double> window_log, window_q;
  window_log.reserve(m);
  window_q.reserve(m);
  for (int i = 0; i < m; ++i) {
    const double rho = std::pow(10.0, decades * i / (m - 1));
    const double w = solution_w(prob, lambda, rho);
    const double q = w * w * std::pow(rho, prob.n - 1);
    if (!std::isfinite(q))
      throw NumericFailure("farfield_decay_check: non-finite sample at rho = " +
                           std::to_string(rho));
    rep.sup = std::max(rep.sup, q);
    rep.min_value = std::min(rep.min_value, q);
    if (rho >= rep.window_lo * (1.0 - 1e-12)) {
      window_log.push_back(std::log(rho));
      window_q.push_back(q);
    }
  }

  const Eigen::Map<const Eigen::VectorXd> L(window_log.data(), window_log.size());
  const Eigen::Map<const Eigen::VectorXd> q(window_q.data(), window_q.size());
  rep.slope = oscillation_aware_slope(L, q, 2.0 * std::sqrt(lambda));
  rep.no_growth_trend = rep.slope <= slope_threshold;
  return rep;
}

}  // namespace htev
