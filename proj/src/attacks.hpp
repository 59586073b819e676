#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matform.hpp"
#include "numerics.hpp"
#include "ring.hpp"

// The two key-recovery attacks in both direct and streaming form, the shared
// Gram accumulator they stream through, the sample-complexity calculator for
// the least-squares estimator, and recovery scoring.

namespace ilwe {

// The last component of the smallest singular vector vanished, so the
// ratio-rounding step of the SVD attack has nothing to divide by.
struct DegenerateLastComponentError : std::runtime_error {
  explicit DegenerateLastComponentError(const std::string& what) : std::runtime_error(what) {}
};

struct RecoveredSecret {
  std::vector<double> s_hat;        // pre-rounding estimator
  std::vector<std::int64_t> s_tilde;  // round_half_down(s_hat), entrywise
};

struct AttackReport {
  std::vector<std::int64_t> s_tilde;
  std::int64_t l1_distance = 0;
  std::int64_t linf_distance = 0;
  std::int64_t weight_diff = 0;
  std::size_t m_used = 0;
  bool discarded = false;  // s_tilde == 0
};

// Running B = sum of D^T D over absorbed samples, D = (blockdiag_k(C) || Z),
// the sufficient statistic for both streaming attacks. B stays symmetric PSD
// throughout; absorption order does not matter.
class GramAccumulator {
 public:
  explicit GramAccumulator(RingParams ring);

  void absorb(const PolyVec& z, const Poly& c);
  void merge(const GramAccumulator& other);

  const DenseMatrix& matrix() const { return b_; }  // (d+1) x (d+1)
  std::uint64_t count() const { return count_; }
  std::size_t dim() const { return b_.rows() - 1; }  // d = n*k
  RingParams ring() const { return ring_; }

  // Checkpoint: "gram <d+1> <count>" then the lower triangle row by row,
  // 17 significant digits (binary64 round-trip exact). The header does not
  // carry the (n, k) split; a loaded accumulator adopts it from the first
  // sample absorbed afterwards.
  void save(std::ostream& os) const;
  void save(const std::string& path) const;
  static GramAccumulator load(std::istream& is);
  static GramAccumulator load(const std::string& path);

 private:
  GramAccumulator() = default;

  RingParams ring_{0, 0};  // {0, 0} until known
  DenseMatrix b_;
  std::uint64_t count_ = 0;
};

// Round the least-squares estimator (A^T A)^{-1} A^T b.
RecoveredSecret lsm_direct(const IlweInstance& inst);

// Ratio-round the last right-singular vector of (A || -b), obtained from the
// eigendecomposition of its Gram matrix.
RecoveredSecret svd_direct(const IlweInstance& inst);

// Same contracts on the accumulated form: solve B[1:d,1:d] x = B[1:d,d+1],
// and eigendecompose the sign-adjusted Gram of (C || -Z) which equals B with
// the last row and column negated off the corner.
RecoveredSecret lsm_streaming(const GramAccumulator& acc);
RecoveredSecret svd_streaming(const GramAccumulator& acc);

// Sample count sufficient for exact least-squares recovery: the larger of
//   4 (tau_a^4 / sigma_a^4) (C1 k + C2 eta_conf)   and
//   32 (tau_e^2 / sigma_a^2) log(2k),
// with C1 = 2^8 log 9 and C2 = 2^9 log 2 taken in the given base (natural by
// default).
double sample_complexity_bound(double tau_a, double sigma_a, double tau_e, int k, double eta_conf,
                               double log_base = 0.0 /* 0 = natural */);

AttackReport evaluate(std::span<const std::int64_t> s_tilde, std::span<const std::int64_t> s_true,
                      std::size_t m_used = 0);

}  // namespace ilwe
