#include "matform.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ilwe {

double DenseMatrix::max_abs() const {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::fabs(v));
  return best;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      if (ail == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += ail * b(l, j);
    }
  return out;
}

std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    const auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) sum += r[j] * x[j];
    out[i] = sum;
  }
  return out;
}

DenseMatrix negacyclic_matrix(const Poly& f) {
  const int n = f.n();
  DenseMatrix out(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Coeff v = i >= j ? f[i - j] : -f[n + i - j];
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = static_cast<double>(v);
    }
  return out;
}

DenseMatrix block_design(const Poly& c, const PolyVec& z, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("block_design: sign must be +1 or -1");
  if (c.n() != z.n()) throw std::invalid_argument("block_design: mismatched n");
  const int n = z.n(), k = z.k();
  const std::size_t d = static_cast<std::size_t>(n) * static_cast<std::size_t>(k);
  DenseMatrix out(d, d + 1);
  for (int blk = 0; blk < k; ++blk) {
    const std::size_t base = static_cast<std::size_t>(blk * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Coeff v = i >= j ? c[i - j] : -c[n + i - j];
        out(base + static_cast<std::size_t>(i), base + static_cast<std::size_t>(j)) = static_cast<double>(v);
      }
    for (int i = 0; i < n; ++i)
      out(base + static_cast<std::size_t>(i), d) = static_cast<double>(sign) * static_cast<double>(z[blk][i]);
  }
  return out;
}

IlweInstance assemble_instance(std::span<const PolyVec> zs, std::span<const Poly> cs) {
  if (zs.empty() || zs.size() != cs.size())
    throw std::invalid_argument("assemble_instance: need a nonempty, equal-length sample list");
  const int n = zs.front().n(), k = zs.front().k();
  for (std::size_t i = 0; i < zs.size(); ++i)
    if (zs[i].n() != n || zs[i].k() != k || cs[i].n() != n)
      throw std::invalid_argument("assemble_instance: sample shape mismatch");

  const std::size_t d = static_cast<std::size_t>(n) * static_cast<std::size_t>(k);
  IlweInstance inst;
  inst.A = DenseMatrix(zs.size() * d, d);
  inst.b.resize(zs.size() * d);
  for (std::size_t s = 0; s < zs.size(); ++s) {
    const std::size_t top = s * d;
    for (int blk = 0; blk < k; ++blk) {
      const std::size_t base = static_cast<std::size_t>(blk * n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const Coeff v = i >= j ? cs[s][i - j] : -cs[s][n + i - j];
          inst.A(top + base + static_cast<std::size_t>(i), base + static_cast<std::size_t>(j)) =
              static_cast<double>(v);
        }
        inst.b[top + base + static_cast<std::size_t>(i)] = static_cast<double>(zs[s][blk][i]);
      }
    }
  }
  return inst;
}

DenseMatrix submatrix(const DenseMatrix& m, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
  if (r0 < 1 || c0 < 1 || r1 < r0 || c1 < c0 || r1 > m.rows() || c1 > m.cols())
    throw std::out_of_range("submatrix: index range out of bounds");
  DenseMatrix out(r1 - r0 + 1, c1 - c0 + 1);
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = m(r0 - 1 + i, c0 - 1 + j);
  return out;
}

namespace {

long long as_exact_int(double v, const char* who) {
  const double r = std::nearbyint(v);
  if (!(r == v) || std::fabs(v) > 9.0e18) throw std::invalid_argument(std::string(who) + ": non-integer entry");
  return static_cast<long long>(r);
}

}  // namespace

void save_instance(const IlweInstance& inst, std::ostream& os) {
  if (inst.b.size() != inst.rows()) throw std::invalid_argument("save_instance: row count != length of b");
  os << "ilwe " << inst.rows() << ' ' << inst.cols() << '\n';
  for (std::size_t i = 0; i < inst.rows(); ++i) {
    for (std::size_t j = 0; j < inst.cols(); ++j) {
      if (j) os << ' ';
      os << as_exact_int(inst.A(i, j), "save_instance");
    }
    os << '\n';
  }
  os << "b\n";
  for (double v : inst.b) os << as_exact_int(v, "save_instance") << '\n';
}

void save_instance(const IlweInstance& inst, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_instance: cannot open " + path);
  save_instance(inst, os);
  if (!os) throw std::runtime_error("save_instance: write failed for " + path);
}

IlweInstance load_instance(std::istream& is) {
  std::string magic;
  std::size_t rows = 0, cols = 0;
  if (!(is >> magic >> rows >> cols) || magic != "ilwe" || rows == 0 || cols == 0)
    throw std::runtime_error("load_instance: bad header, expected \"ilwe <rows> <cols>\"");
  IlweInstance inst;
  inst.A = DenseMatrix(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      long long v;
      if (!(is >> v)) throw std::runtime_error("load_instance: truncated matrix data");
      inst.A(i, j) = static_cast<double>(v);
    }
  std::string sep;
  if (!(is >> sep) || sep != "b") throw std::runtime_error("load_instance: missing \"b\" separator");
  inst.b.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    long long v;
    if (!(is >> v)) throw std::runtime_error("load_instance: truncated b data");
    inst.b[i] = static_cast<double>(v);
  }
  return inst;
}

IlweInstance load_instance(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_instance: cannot open " + path);
  return load_instance(is);
}

}  // namespace ilwe
