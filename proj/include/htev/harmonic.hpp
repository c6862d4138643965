#pragma once

#include <vector>

#include <Eigen/Dense>

namespace htev {

/// Dense homogeneous polynomial in n variables: coefficients are aligned
/// with homogeneous_multi_indices(n, degree) (lexicographic within the
/// fixed total degree).  Elements produced by harmonic_basis carry integer
/// coefficients and are exactly harmonic.
struct HomogeneousPolynomial {
  int n;
  int degree;
  Eigen::VectorXd coefficients;
};

/// All exponent vectors alpha with |alpha| = degree, n components, in
/// lexicographic order (first component descending).  Size
/// C(degree + n - 1, n - 1).
std::vector<std::vector<int>> homogeneous_multi_indices(int n, int degree);

/// Dimension of the space of harmonic homogeneous polynomials of the given
/// degree: C(N+n-1, n-1) - C(N+n-3, n-1); equals 2 for n = 2, N >= 1 and
/// 2N+1 for n = 3.
int harmonic_dimension(int n, int degree);

/// Basis of the kernel of the Laplacian on homogeneous degree-N
/// polynomials, computed by exact rational elimination and rescaled to
/// coprime integer coefficients, so harmonicity holds exactly in integer
/// arithmetic.  Requires n >= 2, N >= 0.
std::vector<HomogeneousPolynomial> harmonic_basis(int n, int N);

/// Pointwise evaluation.
double evaluate(const HomogeneousPolynomial& P, const Eigen::VectorXd& x);

/// Laplacian as an exact coefficient map; result has degree max(degree-2, 0)
/// (the zero polynomial for degree < 2).
HomogeneousPolynomial laplacian(const HomogeneousPolynomial& P);

/// Composition x -> P(A x) with a square matrix A; the result is
/// homogeneous of the same degree.
HomogeneousPolynomial substitute_linear(const HomogeneousPolynomial& P,
                                        const Eigen::MatrixXd& A);

/// Euclidean norm of the coefficient vector.
double coefficient_norm(const HomogeneousPolynomial& P);

}  // namespace htev
