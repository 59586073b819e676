#include "numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ilwe {

namespace {

constexpr double kSymTol = 1e-9;
constexpr int kMaxJacobiSweeps = 100;

void check_symmetric(const DenseMatrix& b, const char* who) {
  if (b.rows() != b.cols()) throw std::invalid_argument(std::string(who) + ": matrix not square");
  const double scale = std::max(1.0, b.max_abs());
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = i + 1; j < b.cols(); ++j)
      if (std::fabs(b(i, j) - b(j, i)) > kSymTol * scale)
        throw std::invalid_argument(std::string(who) + ": matrix not symmetric");
}

}  // namespace

std::vector<double> solve_spd(const DenseMatrix& b, std::span<const double> y) {
  check_symmetric(b, "solve_spd");
  const std::size_t d = b.rows();
  if (y.size() != d) throw std::invalid_argument("solve_spd: right-hand side has wrong length");

  // Lower-triangular Cholesky factor, in place on a copy.
  DenseMatrix l = b;
  for (std::size_t j = 0; j < d; ++j) {
    double diag = l(j, j);
    for (std::size_t t = 0; t < j; ++t) diag -= l(j, t) * l(j, t);
    if (!(diag > 0.0) || !std::isfinite(diag))
      throw SingularOrIndefiniteError("solve_spd: leading minor " + std::to_string(j + 1) +
                                      " is not positive definite");
    const double root = std::sqrt(diag);
    l(j, j) = root;
    for (std::size_t i = j + 1; i < d; ++i) {
      double v = l(i, j);
      for (std::size_t t = 0; t < j; ++t) v -= l(i, t) * l(j, t);
      l(i, j) = v / root;
    }
  }

  // Forward then backward substitution.
  std::vector<double> x(y.begin(), y.end());
  for (std::size_t i = 0; i < d; ++i) {
    double v = x[i];
    for (std::size_t t = 0; t < i; ++t) v -= l(i, t) * x[t];
    x[i] = v / l(i, i);
  }
  for (std::size_t ii = d; ii-- > 0;) {
    double v = x[ii];
    for (std::size_t t = ii + 1; t < d; ++t) v -= l(t, ii) * x[t];
    x[ii] = v / l(ii, ii);
  }
  return x;
}

SymmetricEigen sym_eig(const DenseMatrix& b) {
  check_symmetric(b, "sym_eig");
  const std::size_t d = b.rows();

  DenseMatrix a = b;
  DenseMatrix v(d, d);
  for (std::size_t i = 0; i < d; ++i) v(i, i) = 1.0;

  const double scale = std::max(1.0, b.max_abs());
  const double stop = 1e-14 * scale;

  int sweep = 0;
  for (; sweep < kMaxJacobiSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) off = std::max(off, std::fabs(a(p, q)));
    if (off <= stop) break;

    for (std::size_t p = 0; p + 1 < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t i = 0; i < d; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < d; ++i) {
          const double api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < d; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
  }
  if (sweep == kMaxJacobiSweeps) throw NoConvergenceError("sym_eig: no convergence within 100 sweeps");

  // Descending sort; ties keep original column order so the "last column"
  // is deterministic.
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const double tie = 1e-10 * scale;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
    if (std::fabs(a(lhs, lhs) - a(rhs, rhs)) <= tie) return false;
    return a(lhs, lhs) > a(rhs, rhs);
  });

  SymmetricEigen out;
  out.values.resize(d);
  out.vectors = DenseMatrix(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t src = order[j];
    out.values[j] = a(src, src);
    // Fix the sign: largest-magnitude entry nonnegative.
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < d; ++i)
      if (std::fabs(v(i, src)) > best) {
        best = std::fabs(v(i, src));
        arg = i;
      }
    const double sgn = v(arg, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < d; ++i) out.vectors(i, j) = sgn * v(i, src);
  }
  return out;
}

std::vector<double> lstsq_via_gram(const DenseMatrix& a, std::span<const double> b) {
  if (a.rows() != b.size()) throw std::invalid_argument("lstsq_via_gram: dimension mismatch");
  const std::size_t d = a.cols();
  DenseMatrix gram(d, d);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    for (std::size_t i = 0; i < d; ++i) {
      if (row[i] == 0.0) continue;
      for (std::size_t j = i; j < d; ++j) gram(i, j) += row[i] * row[j];
    }
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < i; ++j) gram(i, j) = gram(j, i);
  std::vector<double> rhs(d, 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    for (std::size_t i = 0; i < d; ++i) rhs[i] += row[i] * b[r];
  }
  return solve_spd(gram, rhs);
}

}  // namespace ilwe
