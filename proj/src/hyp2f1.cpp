#include "htev/hyp2f1.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace htev {

namespace {

namespace mp = boost::multiprecision;
using Float50 = mp::cpp_bin_float_50;
using Float100 = mp::cpp_bin_float_100;
using Float160 = mp::number<mp::cpp_bin_float<160>>;

constexpr std::size_t kTermCap = 1000000;
constexpr double kLn10 = 2.302585092994046;

void validate(double s, double c, double x) {
  if (!std::isfinite(s) || !std::isfinite(c) || !std::isfinite(x))
    throw std::invalid_argument("gauss_2f1: parameters must be finite");
  if (!(s >= 0.0)) throw std::invalid_argument("gauss_2f1: s must be >= 0");
  if (!(c > 0.0)) throw std::invalid_argument("gauss_2f1: c must be > 0");
  if (x > 0.0) throw std::invalid_argument("gauss_2f1: x must be <= 0");
}

// How hard is this input?  All in double; only steers tier choice and caps.
struct Difficulty {
  double zp;            // x/(x-1) in [0,1)
  double cancel_digits; // bound on digits lost to oscillatory cancellation
  double est_terms;     // safe overestimate of the terms needed
};

Difficulty assess(double t2, double x, double target_digits) {
  Difficulty d;
  d.zp = x / (x - 1.0);
  d.cancel_digits =
      t2 > 0.0 ? 2.0 * std::sqrt(t2) * std::asin(std::sqrt(d.zp)) / kLn10 : 0.0;
  if (d.zp <= 0.0) {
    d.est_terms = 2.0;
    return d;
  }
  // Terms grow until k ~ t sqrt(z'/(1-z')), then decay by a factor ~ z' each;
  // we need enough decay steps to drop (target + cancellation) digits.
  const double digits = target_digits + d.cancel_digits;
  const double tail_rate = -std::log(d.zp);
  const double peak =
      t2 > 0.0 ? std::sqrt(t2) * std::sqrt(d.zp / (1.0 - d.zp)) : 0.0;
  d.est_terms = (peak + digits * kLn10) / tail_rate + 50.0;
  return d;
}

struct CoreResult {
  double value = 0;
  std::size_t terms = 0;
  double tail_bound = 0; // absolute, prefactor modulus included
  bool hit_cap = false;
};

// Inner Pfaff sum for the conjugate pair (t^2 >= 0):  S = sum T_k with
//   T_{k+1}/T_k = (s+k - it)((c-s)+k - it) / ((c+k)(k+1)) * z',
// real/imaginary parts tracked separately; then Re[(1-x)^{-s+it} S].
template <class Real>
CoreResult oscillatory_core(double s, double t2, double c, double x,
                            double stop_digits, std::size_t cap) {
  using std::cos;
  using std::log;
  using std::pow;
  using std::sin;
  using std::sqrt;

  const Real zp = Real(x) / (Real(x) - 1);
  const Real cc = Real(c);
  const Real tq = t2 > 0.0 ? Real(sqrt(Real(t2))) : Real(0);
  const Real stop = pow(Real(10), Real(-stop_digits));

  Real t_re = 1, t_im = 0; // current term
  Real s_re = 1, s_im = 0; // partial sum
  Real max_mod2 = 1;
  Real fac_re = 0, fac_im = 0, mod2 = 0;
  std::size_t k = 0;
  int quiet = 0;
  CoreResult out;
  while (true) {
    if (k >= cap) {
      out.hit_cap = true;
      break;
    }
    const Real kk = Real(static_cast<double>(k));
    const Real p = Real(s) + kk;
    const Real q = cc - Real(s) + kk;
    const Real scale = zp / ((cc + kk) * (kk + 1));
    fac_re = (p * q - Real(t2)) * scale;
    fac_im = -tq * (p + q) * scale;
    const Real n_re = t_re * fac_re - t_im * fac_im;
    const Real n_im = t_re * fac_im + t_im * fac_re;
    t_re = n_re;
    t_im = n_im;
    ++k;
    s_re += t_re;
    s_im += t_im;
    mod2 = t_re * t_re + t_im * t_im;
    if (mod2 > max_mod2) max_mod2 = mod2;
    if (mod2 <= max_mod2 * stop * stop) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
  }
  out.terms = k;

  const Real one_minus_x = Real(1) - Real(x);
  const Real amp = pow(one_minus_x, Real(-s));
  Real pre_re = amp, pre_im = 0;
  if (t2 > 0.0) {
    const Real phase = tq * log(one_minus_x);
    pre_re = amp * cos(phase);
    pre_im = amp * sin(phase);
  }
  out.value = static_cast<double>(pre_re * s_re - pre_im * s_im);

  // geometric tail estimate: beyond the peak the term ratio decreases to z'
  double ratio = std::sqrt(static_cast<double>(fac_re * fac_re + fac_im * fac_im));
  ratio = std::min(std::max(ratio, static_cast<double>(zp)), 0.999999);
  out.tail_bound = static_cast<double>(amp) *
                   std::sqrt(static_cast<double>(mod2)) * ratio / (1.0 - ratio);
  return out;
}

// Real parameter pair (t^2 = -tau^2 < 0): Pfaff on s+tau gives the
// all-positive series F(s+tau, (c-s)+tau; c; z') with prefactor
// (1-x)^{-(s+tau)}; no cancellation, but magnitudes can be extreme.
template <class Real>
CoreResult real_pair_core(double s, double tau, double c, double x,
                          double stop_digits, std::size_t cap) {
  using std::log;
  using std::pow;

  const Real zp = Real(x) / (Real(x) - 1);
  const Real A = Real(s) + Real(tau);
  const Real B = Real(c) - Real(s) + Real(tau);
  const Real cc = Real(c);
  const Real stop = pow(Real(10), Real(-stop_digits));

  Real term = 1, sum = 1, max_term = 1, factor = 0;
  std::size_t k = 0;
  int quiet = 0;
  CoreResult out;
  while (true) {
    if (k >= cap) {
      out.hit_cap = true;
      break;
    }
    const Real kk = Real(static_cast<double>(k));
    factor = (A + kk) * (B + kk) * zp / ((cc + kk) * (kk + 1));
    term *= factor;
    ++k;
    sum += term;
    if (term > max_term) max_term = term;
    if (term <= max_term * stop) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
  }
  out.terms = k;
  const Real amp = pow(Real(1) - Real(x), -A);
  out.value = static_cast<double>(amp * sum);
  double ratio = std::min(
      std::max(static_cast<double>(factor), static_cast<double>(zp)), 0.999999);
  // amp*term in Real first: the factors separately can overrun double's range
  out.tail_bound =
      static_cast<double>(amp * term) * ratio / (1.0 - ratio);
  return out;
}

template <class Real>
CoreResult run_core(double s, double t2, double c, double x, double stop_digits,
                    std::size_t cap) {
  if (t2 >= 0.0) return oscillatory_core<Real>(s, t2, c, x, stop_digits, cap);
  return real_pair_core<Real>(s, std::sqrt(-t2), c, x, stop_digits, cap);
}

[[noreturn]] void fail(const char* who, double s, double t2, double c, double x,
                       const Difficulty& d, double needed_digits,
                       std::size_t terms_used) {
  std::ostringstream msg;
  msg << who << ": input outside the evaluation envelope"
      << " (s=" << s << ", t^2=" << t2 << ", c=" << c << ", x=" << x
      << "): cancellation ~" << d.cancel_digits << " digits, estimated terms "
      << d.est_terms << ", working digits needed " << needed_digits;
  if (terms_used) msg << ", terms summed before giving up " << terms_used;
  throw NumericFailure(msg.str());
}

// For a real pair the prefactor and the sum can each overrun double's
// exponent range even though their product is tame; detect that.
double magnitude_digits(double s, double t2, double x) {
  if (t2 >= 0.0 || x == 0.0) return 0.0;
  const double tau = std::sqrt(-t2);
  const double zp = x / (x - 1.0);
  const double L = std::log1p(-x);
  const double growth = 2.0 * std::atanh(std::sqrt(zp));
  return (tau * std::max(L, growth) + (s + tau) * L) / kLn10;
}

double eval_tiered(double s, double t2, double c, double x,
                   EvaluationInfo* info) {
  validate(s, c, x);
  if (!std::isfinite(t2))
    throw std::invalid_argument("gauss_2f1: t^2 must be finite");
  if (x == 0.0) {
    if (info) *info = {1, 0.0, 16, 0.0};
    return 1.0;
  }

  const Difficulty d = assess(t2, x, 16.0);
  // Terms decay geometrically, so roundoff accumulates far below terms*eps;
  // half a log10 of the count is a comfortable envelope in practice.
  const double roundoff = 0.5 * std::log10(d.est_terms + 10.0);
  const double needed = 13.0 + d.cancel_digits + roundoff + 0.5;
  const double mag = magnitude_digits(s, t2, x);
  if (d.est_terms > 3.0 * static_cast<double>(kTermCap))
    fail("gauss_2f1", s, t2, c, x, d, needed, 0);

  const double stop_digits = std::min(13.0 + d.cancel_digits + 2.0, 96.0);
  CoreResult res;
  int tier = 0;
  if (needed <= 15.9 && mag < 250.0) {
    tier = 16;
    res = run_core<double>(s, t2, c, x, std::min(stop_digits, 15.0), kTermCap);
  } else if (needed <= 48.0) {
    tier = 50;
    res = run_core<Float50>(s, t2, c, x, std::min(stop_digits, 48.0), kTermCap);
  } else if (needed <= 98.0) {
    tier = 100;
    res = run_core<Float100>(s, t2, c, x, stop_digits, kTermCap);
  } else {
    fail("gauss_2f1", s, t2, c, x, d, needed, 0);
  }
  if (res.hit_cap) fail("gauss_2f1", s, t2, c, x, d, needed, res.terms);
  if (info) *info = {res.terms, d.cancel_digits, tier, res.tail_bound};
  return res.value;
}

} // namespace

double gauss_2f1(const HypergeometricInput& in) {
  return gauss_2f1_general(in.s, in.t * in.t, in.c, in.x);
}

double gauss_2f1(const HypergeometricInput& in, EvaluationInfo& info) {
  return gauss_2f1_general(in.s, in.t * in.t, in.c, in.x, info);
}

double gauss_2f1_general(double s, double t_squared, double c, double x) {
  return eval_tiered(s, t_squared, c, x, nullptr);
}

double gauss_2f1_general(double s, double t_squared, double c, double x,
                         EvaluationInfo& info) {
  return eval_tiered(s, t_squared, c, x, &info);
}

double gauss_2f1_derivative(const HypergeometricInput& in) {
  const double t2 = in.t * in.t;
  const double shifted = gauss_2f1_general(in.s + 1.0, t2, in.c + 1.0, in.x);
  return (in.s * in.s + t2) / in.c * shifted;
}

double series_oracle(const HypergeometricInput& in, int precision_digits) {
  if (precision_digits < 10 || precision_digits > 60)
    throw std::invalid_argument("series_oracle: precision_digits must be in [10, 60]");
  validate(in.s, in.c, in.x);
  const double t2 = in.t * in.t;
  if (in.x == 0.0) return 1.0;

  const double p = static_cast<double>(precision_digits);
  const Difficulty d = assess(t2, in.x, p + 5.0);
  const double roundoff = std::log10(d.est_terms + 10.0) + 1.0;
  const double needed = p + d.cancel_digits + roundoff + 5.0;
  if (d.est_terms > 3.0 * static_cast<double>(kTermCap))
    fail("series_oracle", in.s, t2, in.c, in.x, d, needed, 0);

  const double stop_digits = p + d.cancel_digits + 5.0;
  CoreResult res;
  if (needed <= 48.0)
    res = run_core<Float50>(in.s, t2, in.c, in.x, std::min(stop_digits, 48.0),
                            kTermCap);
  else if (needed <= 98.0)
    res = run_core<Float100>(in.s, t2, in.c, in.x, std::min(stop_digits, 96.0),
                             kTermCap);
  else if (needed <= 158.0)
    res = run_core<Float160>(in.s, t2, in.c, in.x, std::min(stop_digits, 156.0),
                             kTermCap);
  else
    fail("series_oracle", in.s, t2, in.c, in.x, d, needed, 0);
  if (res.hit_cap)
    fail("series_oracle", in.s, t2, in.c, in.x, d, needed, res.terms);

  // interval-style honesty: the truncated tail must sit inside the request
  if (res.tail_bound >
      std::pow(10.0, -p) * std::max(1.0, std::abs(res.value))) {
    std::ostringstream msg;
    msg << "series_oracle: tail bound " << res.tail_bound
        << " exceeds requested 1e-" << precision_digits << " at s=" << in.s
        << ", t=" << in.t << ", c=" << in.c << ", x=" << in.x;
    throw NumericFailure(msg.str());
  }
  return res.value;
}

} // namespace htev
