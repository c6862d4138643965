#pragma once

// Gauss hypergeometric function for conjugate parameter pairs on the negative
// real axis:
//
//   F(s - it, s + it; c; x),   s >= 0, c > 0, t real or imaginary, x <= 0,
//
// which is real-valued.  This is the parameter family radial eigenfunctions
// live in: the spectral parameter enters through t^2, so t^2 < 0 (imaginary t,
// i.e. a real parameter pair s +- tau) is meaningful and supported.
//
// Evaluation strategy.  The defining series diverges for x < -1, so we apply
// the Pfaff transformation
//
//   F(a, b; c; x) = (1-x)^{-a} F(a, c-b; c; x/(x-1)),
//
// mapping x <= 0 to z' = x/(x-1) in [0, 1).  With a = s - it, b = s + it the
// inner parameters are (s - it, (c-s) - it): both carry -it, so each series
// term is a complex number whose real and imaginary parts we track as a pair
// of real accumulators (no complex gamma functions, no std::complex in the
// hot loop).  The real part of (1-x)^{-a} * sum recovers F.
//
// The inner sum suffers catastrophic cancellation for large t: terms grow to
// modulus ~ exp(2t asin sqrt(z')) while the sum stays O(1).  We bound the lost
// digits by 2 t asin(sqrt z') / ln 10, estimate the term count from the tail
// ratio z', and pick a working precision tier (double, ~50, or ~100 digits)
// accordingly.  Inputs needing more than the largest tier, or more than the
// term cap, raise NumericFailure with diagnostics instead of returning noise.

#include <htev/errors.hpp>

#include <cstddef>

namespace htev {

// F(s - it, s + it; c; x).  Requires c > 0, t >= 0, x <= 0.
struct HypergeometricInput {
  double s;
  double t;
  double c;
  double x;
};

// Diagnostics from one evaluation: how hard the input was.
struct EvaluationInfo {
  std::size_t terms = 0;          // series terms actually summed
  double cancellation_digits = 0; // a-priori bound on digits lost to cancellation
  int working_digits = 0;         // precision tier used (16, 50, or 100)
  double tail_bound = 0;          // bound on the truncated tail, prefactor included
};

// Evaluate F(s - it, s + it; c; x) to near double precision.
double gauss_2f1(const HypergeometricInput& in);
double gauss_2f1(const HypergeometricInput& in, EvaluationInfo& info);

// Same function parametrized by t^2, which may be negative: t^2 = -tau^2 gives
// the real pair F(s + tau, s - tau; c; x).  This is the entry point radial
// solvers use, since their spectral parameter appears only as t^2.
double gauss_2f1_general(double s, double t_squared, double c, double x);
double gauss_2f1_general(double s, double t_squared, double c, double x,
                         EvaluationInfo& info);

// d/dx F(s - it, s + it; c; x) = ((s^2 + t^2)/c) F(s+1-it, s+1+it; c+1; x).
double gauss_2f1_derivative(const HypergeometricInput& in);

// Reference evaluator: straightforward summation of the same Pfaff series in
// extended precision (50 to 160 digits), truncating when terms drop below the
// requested tolerance and tracking an explicit tail bound.  precision_digits
// must lie in [10, 60]; the result is returned rounded to double, so requests
// beyond ~16 digits are meaningful only as internal stringency.
double series_oracle(const HypergeometricInput& in, int precision_digits);

} // namespace htev
