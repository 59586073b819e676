#include "attacks.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ilwe {

namespace {

constexpr double kDegenerateTol = 1e-10;

}  // namespace

GramAccumulator::GramAccumulator(RingParams ring) : ring_(ring) {
  ring_.validate();
  const std::size_t d = static_cast<std::size_t>(ring_.dim());
  b_ = DenseMatrix(d + 1, d + 1);
}

void GramAccumulator::absorb(const PolyVec& z, const Poly& c) {
  const int n = c.n(), k = z.k();
  if (z.n() != n) throw std::invalid_argument("GramAccumulator::absorb: z and c disagree on n");
  const std::size_t d = dim();
  if (static_cast<std::size_t>(n) * static_cast<std::size_t>(k) != d)
    throw std::invalid_argument("GramAccumulator::absorb: sample dimension != accumulator dimension");
  if (ring_.n == 0) {
    ring_ = RingParams{n, k};  // adopted by a checkpoint-loaded accumulator
  } else if (ring_.n != n || ring_.k != k) {
    throw std::invalid_argument("GramAccumulator::absorb: sample shape mismatch");
  }

  std::vector<int> supp;
  supp.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    if (c[i] != 0) supp.push_back(i);

  // C^T C is symmetric Toeplitz: entry (i, j) equals t_{|i-j|} with
  // t_r = <c, X^r c>, because multiplication by X is a signed permutation.
  std::vector<double> t(static_cast<std::size_t>(n), 0.0);
  for (int r = 0; r < n; ++r) {
    double acc = 0.0;
    for (int a : supp) {
      const int bidx = a + r;
      if (bidx < n)
        acc += static_cast<double>(c[a]) * static_cast<double>(c[bidx]);
      else
        acc -= static_cast<double>(c[a]) * static_cast<double>(c[bidx - n]);
    }
    t[static_cast<std::size_t>(r)] = acc;
  }

  for (int blk = 0; blk < k; ++blk) {
    const std::size_t base = static_cast<std::size_t>(blk * n);
    for (int r = 0; r < n; ++r) {
      const double tr = t[static_cast<std::size_t>(r)];
      if (tr == 0.0) continue;
      for (int i = 0; i + r < n; ++i) {
        b_(base + static_cast<std::size_t>(i), base + static_cast<std::size_t>(i + r)) += tr;
        if (r > 0) b_(base + static_cast<std::size_t>(i + r), base + static_cast<std::size_t>(i)) += tr;
      }
    }
    // (C^T z)_i = <X^i c, z>.
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int a : supp) {
        const int pos = a + i;
        if (pos < n)
          acc += static_cast<double>(c[a]) * static_cast<double>(z[blk][pos]);
        else
          acc -= static_cast<double>(c[a]) * static_cast<double>(z[blk][pos - n]);
      }
      b_(base + static_cast<std::size_t>(i), d) += acc;
      b_(d, base + static_cast<std::size_t>(i)) += acc;
    }
  }
  double zz = 0.0;
  for (int blk = 0; blk < k; ++blk)
    for (int i = 0; i < n; ++i) {
      const double v = static_cast<double>(z[blk][i]);
      zz += v * v;
    }
  b_(d, d) += zz;
  ++count_;
}

void GramAccumulator::merge(const GramAccumulator& other) {
  if (b_.rows() != other.b_.rows())
    throw std::invalid_argument("GramAccumulator::merge: dimension mismatch");
  if (ring_.n != 0 && other.ring_.n != 0 && !(ring_ == other.ring_))
    throw std::invalid_argument("GramAccumulator::merge: ring shape mismatch");
  if (ring_.n == 0) ring_ = other.ring_;
  for (std::size_t i = 0; i < b_.data().size(); ++i) b_.data()[i] += other.b_.data()[i];
  count_ += other.count_;
}

void GramAccumulator::save(std::ostream& os) const {
  os << "gram " << b_.rows() << ' ' << count_ << '\n';
  char buf[64];
  for (std::size_t i = 0; i < b_.rows(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const auto res = std::to_chars(buf, buf + sizeof buf, b_(i, j), std::chars_format::general, 17);
      if (j) os << ' ';
      os.write(buf, res.ptr - buf);
    }
    os << '\n';
  }
}

void GramAccumulator::save(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("GramAccumulator::save: cannot open " + path);
  save(os);
  if (!os) throw std::runtime_error("GramAccumulator::save: write failed for " + path);
}

GramAccumulator GramAccumulator::load(std::istream& is) {
  std::string magic;
  std::size_t rows = 0;
  std::uint64_t count = 0;
  if (!(is >> magic >> rows >> count) || magic != "gram" || rows < 2)
    throw std::runtime_error("GramAccumulator::load: bad header, expected \"gram <d+1> <count>\"");
  GramAccumulator acc;
  acc.b_ = DenseMatrix(rows, rows);
  acc.count_ = count;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double v;
      if (!(is >> v)) throw std::runtime_error("GramAccumulator::load: truncated matrix data");
      acc.b_(i, j) = v;
      acc.b_(j, i) = v;
    }
  return acc;
}

GramAccumulator GramAccumulator::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("GramAccumulator::load: cannot open " + path);
  return load(is);
}

namespace {

RecoveredSecret round_estimator(std::vector<double> s_hat) {
  RecoveredSecret out;
  out.s_tilde = round_vec(s_hat);
  out.s_hat = std::move(s_hat);
  return out;
}

// Shared tail of both SVD routes: take the eigenvector of the smallest
// eigenvalue and round the component ratios v_i / v_{d+1}.
RecoveredSecret ratio_round(const SymmetricEigen& eig) {
  const std::size_t d = eig.values.size() - 1;
  std::vector<double> v(d + 1);
  for (std::size_t i = 0; i <= d; ++i) v[i] = eig.vectors(i, d);
  if (std::fabs(v[d]) < kDegenerateTol)
    throw DegenerateLastComponentError("svd attack: last component of the singular vector vanishes");
  std::vector<double> s_hat(d);
  for (std::size_t i = 0; i < d; ++i) s_hat[i] = v[i] / v[d];
  return round_estimator(std::move(s_hat));
}

// Gram matrix of (A || -b) without materializing the stacked matrix.
DenseMatrix gram_of_negated(const IlweInstance& inst) {
  const std::size_t d = inst.cols();
  DenseMatrix g(d + 1, d + 1);
  for (std::size_t r = 0; r < inst.rows(); ++r) {
    const auto row = inst.A.row(r);
    const double br = inst.b[r];
    for (std::size_t i = 0; i < d; ++i) {
      if (row[i] == 0.0) continue;
      for (std::size_t j = i; j < d; ++j) g(i, j) += row[i] * row[j];
      g(i, d) -= row[i] * br;
    }
    g(d, d) += br * br;
  }
  for (std::size_t i = 0; i <= d; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

}  // namespace

RecoveredSecret lsm_direct(const IlweInstance& inst) {
  if (inst.rows() != inst.b.size()) throw std::invalid_argument("lsm_direct: instance shape mismatch");
  return round_estimator(lstsq_via_gram(inst.A, inst.b));
}

RecoveredSecret svd_direct(const IlweInstance& inst) {
  if (inst.rows() != inst.b.size()) throw std::invalid_argument("svd_direct: instance shape mismatch");
  return ratio_round(sym_eig(gram_of_negated(inst)));
}

RecoveredSecret lsm_streaming(const GramAccumulator& acc) {
  const std::size_t d = acc.dim();
  const DenseMatrix& b = acc.matrix();
  DenseMatrix g(d, d);
  std::vector<double> rhs(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) g(i, j) = b(i, j);
    rhs[i] = b(i, d);
  }
  return round_estimator(solve_spd(g, rhs));
}

RecoveredSecret svd_streaming(const GramAccumulator& acc) {
  if (acc.count() == 0) throw std::invalid_argument("svd_streaming: empty accumulator");
  const std::size_t d = acc.dim();
  // The Gram of (C || -Z) is the stored (C || Z) form with the last row and
  // column negated, corner kept.
  DenseMatrix m = acc.matrix();
  for (std::size_t i = 0; i < d; ++i) {
    m(i, d) = -m(i, d);
    m(d, i) = -m(d, i);
  }
  return ratio_round(sym_eig(m));
}

double sample_complexity_bound(double tau_a, double sigma_a, double tau_e, int k, double eta_conf,
                               double log_base) {
  if (!(sigma_a > 0.0)) throw std::invalid_argument("sample_complexity_bound: need sigma_a > 0");
  if (k < 1) throw std::invalid_argument("sample_complexity_bound: need k >= 1");
  if (tau_a < 0.0 || tau_e < 0.0) throw std::invalid_argument("sample_complexity_bound: need tau >= 0");
  if (!(eta_conf >= 1.0)) throw std::invalid_argument("sample_complexity_bound: need eta_conf >= 1");
  double denom = 1.0;
  if (log_base > 0.0) {
    if (log_base == 1.0) throw std::invalid_argument("sample_complexity_bound: log base 1 is not a base");
    denom = std::log(log_base);
  }
  const double c1 = 256.0 * std::log(9.0) / denom;
  const double c2 = 512.0 * std::log(2.0) / denom;
  const double ra = tau_a / sigma_a;
  const double m1 = 4.0 * ra * ra * ra * ra * (c1 * static_cast<double>(k) + c2 * eta_conf);
  const double re = tau_e / sigma_a;
  const double m2 = 32.0 * re * re * std::log(2.0 * static_cast<double>(k)) / denom;
  return std::max(m1, m2);
}

AttackReport evaluate(std::span<const std::int64_t> s_tilde, std::span<const std::int64_t> s_true,
                      std::size_t m_used) {
  if (s_tilde.size() != s_true.size()) throw std::invalid_argument("evaluate: length mismatch");
  AttackReport report;
  report.m_used = m_used;
  report.s_tilde.assign(s_tilde.begin(), s_tilde.end());
  bool all_zero = true;
  for (std::size_t i = 0; i < s_tilde.size(); ++i) {
    if (s_tilde[i] != 0) all_zero = false;
    const std::int64_t diff = checked_add(s_tilde[i], -s_true[i]);
    const std::int64_t mag = diff < 0 ? -diff : diff;
    report.l1_distance = checked_add(report.l1_distance, mag);
    report.linf_distance = std::max(report.linf_distance, mag);
    if (diff != 0) ++report.weight_diff;
  }
  report.discarded = all_zero;
  return report;
}

}  // namespace ilwe
