#include "htev/harmonic.hpp"

#include <map>
#include <stdexcept>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace htev {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

void check_shape(int n, int degree) {
  if (n < 2) throw std::invalid_argument("polynomial dimension must be at least 2");
  if (degree < 0) throw std::invalid_argument("polynomial degree must be nonnegative");
}

void append_indices(int n, int degree, std::vector<int>& prefix,
                    std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == n - 1) {
    prefix.push_back(degree);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int k = degree; k >= 0; --k) {
    prefix.push_back(k);
    append_indices(n, degree - k, prefix, out);
    prefix.pop_back();
  }
}

long long binomial(int top, int bottom) {
  if (bottom < 0 || bottom > top) return 0;
  long long acc = 1;
  for (int i = 1; i <= bottom; ++i) acc = acc * (top - bottom + i) / i;
  return acc;
}

int index_of(const std::vector<std::vector<int>>& table, const std::vector<int>& alpha) {
  const auto it = std::lower_bound(table.begin(), table.end(), alpha,
                                   [](const std::vector<int>& a, const std::vector<int>& b) {
                                     return a > b;  // table is lexicographically descending
                                   });
  if (it == table.end() || *it != alpha)
    throw std::logic_error("multi-index not found in monomial table");
  return static_cast<int>(it - table.begin());
}

/// Exact nullspace of an integer matrix via Gauss elimination over the
/// rationals; each kernel vector is rescaled to coprime integers with a
/// positive leading entry.
std::vector<std::vector<cpp_int>> integer_nullspace(
    std::vector<std::vector<cpp_rational>> mat, int cols) {
  const int rows = static_cast<int>(mat.size());
  std::vector<int> pivot_col_of_row;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pr = -1;
    for (int i = r; i < rows; ++i)
      if (mat[i][c] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(mat[r], mat[pr]);
    const cpp_rational inv = mat[r][c];
    for (int j = c; j < cols; ++j) mat[r][j] /= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || mat[i][c] == 0) continue;
      const cpp_rational f = mat[i][c];
      for (int j = c; j < cols; ++j) mat[i][j] -= f * mat[r][j];
    }
    pivot_col_of_row.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col_of_row) is_pivot[c] = true;

  std::vector<std::vector<cpp_int>> kernel;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<cpp_rational> v(cols, 0);
    v[f] = 1;
    for (size_t i = 0; i < pivot_col_of_row.size(); ++i)
      v[pivot_col_of_row[i]] = -mat[i][f];
    cpp_int scale = 1;
    for (const cpp_rational& q : v) scale = lcm(scale, denominator(q));
    std::vector<cpp_int> w(cols);
    cpp_int g = 0;
    for (int j = 0; j < cols; ++j) {
      w[j] = numerator(v[j]) * (scale / denominator(v[j]));
      g = gcd(g, w[j]);
    }
    if (g == 0) g = 1;
    int lead = 0;
    while (lead < cols && w[lead] == 0) ++lead;
    const bool flip = lead < cols && w[lead] < 0;
    for (cpp_int& x : w) {
      x /= g;
      if (flip) x = -x;
    }
    kernel.push_back(std::move(w));
  }
  return kernel;
}

}  // namespace

std::vector<std::vector<int>> homogeneous_multi_indices(int n, int degree) {
  check_shape(n, degree);
  std::vector<std::vector<int>> out;
  std::vector<int> prefix;
  append_indices(n, degree, prefix, out);
  return out;
}

int harmonic_dimension(int n, int degree) {
  check_shape(n, degree);
  return static_cast<int>(binomial(degree + n - 1, n - 1) -
                          binomial(degree + n - 3, n - 1));
}

std::vector<HomogeneousPolynomial> harmonic_basis(int n, int N) {
  check_shape(n, N);
  const auto mono = homogeneous_multi_indices(n, N);
  const int cols = static_cast<int>(mono.size());

  std::vector<std::vector<cpp_rational>> lap;
  if (N >= 2) {
    const auto mono_low = homogeneous_multi_indices(n, N - 2);
    lap.assign(mono_low.size(), std::vector<cpp_rational>(cols, 0));
    for (int c = 0; c < cols; ++c) {
      for (int j = 0; j < n; ++j) {
        const int a = mono[c][j];
        if (a < 2) continue;
        std::vector<int> beta = mono[c];
        beta[j] -= 2;
        lap[index_of(mono_low, beta)][c] += a * (a - 1);
      }
    }
  }

  const auto kernel = integer_nullspace(std::move(lap), cols);
  std::vector<HomogeneousPolynomial> basis;
  basis.reserve(kernel.size());
  for (const auto& vec : kernel) {
    HomogeneousPolynomial P{n, N, Eigen::VectorXd(cols)};
    for (int j = 0; j < cols; ++j) P.coefficients[j] = static_cast<double>(vec[j]);
    basis.push_back(std::move(P));
  }
  return basis;
}

double evaluate(const HomogeneousPolynomial& P, const Eigen::VectorXd& x) {
  if (x.size() != P.n)
    throw std::invalid_argument("evaluation point dimension must match the polynomial");
  const auto mono = homogeneous_multi_indices(P.n, P.degree);
  double acc = 0.0;
  for (size_t k = 0; k < mono.size(); ++k) {
    if (P.coefficients[static_cast<int>(k)] == 0.0) continue;
    double term = P.coefficients[static_cast<int>(k)];
    for (int j = 0; j < P.n; ++j)
      for (int rep = 0; rep < mono[k][j]; ++rep) term *= x[j];
    acc += term;
  }
  return acc;
}

HomogeneousPolynomial laplacian(const HomogeneousPolynomial& P) {
  if (P.degree < 2) {
    HomogeneousPolynomial zero{P.n, 0, Eigen::VectorXd::Zero(1)};
    return zero;
  }
  const auto mono = homogeneous_multi_indices(P.n, P.degree);
  const auto mono_low = homogeneous_multi_indices(P.n, P.degree - 2);
  HomogeneousPolynomial out{P.n, P.degree - 2,
                            Eigen::VectorXd::Zero(static_cast<int>(mono_low.size()))};
  for (size_t k = 0; k < mono.size(); ++k) {
    const double c = P.coefficients[static_cast<int>(k)];
    if (c == 0.0) continue;
    for (int j = 0; j < P.n; ++j) {
      const int a = mono[k][j];
      if (a < 2) continue;
      std::vector<int> beta = mono[k];
      beta[j] -= 2;
      out.coefficients[index_of(mono_low, beta)] += c * a * (a - 1);
    }
  }
  return out;
}

HomogeneousPolynomial substitute_linear(const HomogeneousPolynomial& P,
                                        const Eigen::MatrixXd& A) {
  if (A.rows() != P.n || A.cols() != P.n)
    throw std::invalid_argument("substitution matrix must be square of the polynomial dimension");
  const auto mono = homogeneous_multi_indices(P.n, P.degree);
  // P(A x): expand each monomial by repeated multiplication with the linear
  // forms (A x)_j, accumulating coefficients keyed by exponent vector.
  using Poly = std::map<std::vector<int>, double>;
  Poly total;
  for (size_t k = 0; k < mono.size(); ++k) {
    const double c = P.coefficients[static_cast<int>(k)];
    if (c == 0.0) continue;
    Poly term;
    term[std::vector<int>(P.n, 0)] = c;
    for (int j = 0; j < P.n; ++j) {
      for (int rep = 0; rep < mono[k][j]; ++rep) {
        Poly next;
        for (const auto& [alpha, v] : term) {
          for (int i = 0; i < P.n; ++i) {
            if (A(j, i) == 0.0) continue;
            std::vector<int> beta = alpha;
            ++beta[i];
            next[beta] += v * A(j, i);
          }
        }
        term = std::move(next);
      }
    }
    for (const auto& [alpha, v] : term) total[alpha] += v;
  }
  HomogeneousPolynomial out{P.n, P.degree,
                            Eigen::VectorXd::Zero(static_cast<int>(mono.size()))};
  for (const auto& [alpha, v] : total) out.coefficients[index_of(mono, alpha)] += v;
  return out;
}

double coefficient_norm(const HomogeneousPolynomial& P) { return P.coefficients.norm(); }

}  // namespace htev
