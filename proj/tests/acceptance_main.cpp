// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. The heavier table reproductions run in minutes; the
// algebraic criteria in seconds.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "attacks.hpp"
#include "experiments.hpp"
#include "matform.hpp"
#include "numerics.hpp"
#include "ring.hpp"
#include "rng.hpp"
#include "sampling.hpp"

using namespace ilwe;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s  criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

Poly random_poly(int n, Coeff lo, Coeff hi, StreamRng& rng) {
  Poly p(n);
  for (int i = 0; i < n; ++i) p[i] = rng.uniform_int(lo, hi);
  return p;
}

Poly reduce_after_schoolbook(const Poly& f, const Poly& g) {
  const int n = f.n();
  std::vector<Coeff> full(static_cast<std::size_t>(2 * n - 1), 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) full[static_cast<std::size_t>(a + b)] += f[a] * g[b];
  Poly out(n);
  for (int i = 0; i < 2 * n - 1; ++i) {
    if (i < n)
      out[i] += full[static_cast<std::size_t>(i)];
    else
      out[i - n] -= full[static_cast<std::size_t>(i)];
  }
  return out;
}

ExperimentConfig base_config() {
  ExperimentConfig config;
  config.ring = {100, 1};
  config.rho = 39;
  config.eta = 1;
  config.gamma = 256;
  config.beta_mode.autotune = false;
  config.beta_mode.fixed = 0;
  config.secret_mode = SecretMode::FixedWeight;
  config.trials = 3;
  config.seed = 1;
  return config;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// 1. Signed-rotation mask, bound 256, k=1, alpha=29: exact recovery at both
//    sample counts with the realized rejection rate in [0.40, 0.60].
void criterion_1() {
  ExperimentConfig config = base_config();
  config.y_dist = YDist::SubgaussianRotation;
  config.alpha = 29;
  config.m_list = {10000, 100000};
  const auto rows = run_experiment(config);
  const CellResult& c4 = rows[0].cells[0];
  const CellResult& c5 = rows[0].cells[1];
  const bool l1_ok = c4.available && c5.available && c4.l1_best == 0 && c5.l1_best == 0;
  const bool rej_ok = c5.available && c5.rejection_rate >= 0.40 && c5.rejection_rate <= 0.60;
  std::ostringstream detail;
  detail << "l1(1e4)=" << (c4.available ? std::to_string(c4.l1_best) : "n/a")
         << " l1(1e5)=" << (c5.available ? std::to_string(c5.l1_best) : "n/a") << " (want 0, 0); rejection(1e5)="
         << fmt(c5.rejection_rate) << " (want [0.40, 0.60])";
  report(1, "subgaussian mask k=1 exact recovery + rejection window", l1_ok && rej_ok, detail.str());
}

// 2. Same at k=3, alpha=25, m=1e5; rejection window widens to [0.40, 0.65].
void criterion_2() {
  ExperimentConfig config = base_config();
  config.ring = {100, 3};
  config.y_dist = YDist::SubgaussianRotation;
  config.alpha = 25;
  config.m_list = {100000};
  const auto rows = run_experiment(config);
  const CellResult& cell = rows[0].cells[0];
  const bool l1_ok = cell.available && cell.l1_best == 0;
  const bool rej_ok = cell.available && cell.rejection_rate >= 0.40 && cell.rejection_rate <= 0.65;
  std::ostringstream detail;
  detail << "l1(1e5)=" << (cell.available ? std::to_string(cell.l1_best) : "n/a") << " (want 0); rejection="
         << fmt(cell.rejection_rate) << " (want [0.40, 0.65])";
  report(2, "subgaussian mask k=3 exact recovery + rejection window", l1_ok && rej_ok, detail.str());
}

// 3. Uniform mask, tight bound: no trial reaches l1 = 0 and the best lands
//    in the non-recovery band [10, 120].
void criterion_3() {
  ExperimentConfig config = base_config();
  config.y_dist = YDist::UniformGamma;
  config.m_list = {10000};
  const auto rows = run_experiment(config);
  const CellResult& cell = rows[0].cells[0];
  bool every_trial_positive = true;
  for (const TrialResult& trial : rows[0].trial_log)
    if (!trial.failed && trial.l1_distance == 0) every_trial_positive = false;
  const bool band_ok = cell.available && cell.l1_best >= 10 && cell.l1_best <= 120;
  std::ostringstream detail;
  detail << "best l1(1e4)=" << (cell.available ? std::to_string(cell.l1_best) : "n/a")
         << " (want [10, 120]); all trials l1 > 0: " << (every_trial_positive ? "yes" : "no");
  report(3, "uniform mask non-recovery at bound 256", every_trial_positive && band_ok, detail.str());
}

// 4. Uniform mask, wide bound 4096 at k=3: no better than the random-guess
//    baseline region, best l1 >= 300.
void criterion_4() {
  ExperimentConfig config = base_config();
  config.ring = {100, 3};
  config.gamma = 4105;
  config.beta_mode.fixed = 9;  // bound 4096
  config.y_dist = YDist::UniformGamma;
  config.m_list = {10000};
  const auto rows = run_experiment(config);
  const CellResult& cell = rows[0].cells[0];
  const bool ok = cell.available && cell.l1_best >= 300;
  std::ostringstream detail;
  detail << "best l1(1e4)=" << (cell.available ? std::to_string(cell.l1_best) : "n/a")
         << " (want >= 300); baseline random guess ~" << fmt(rows[0].baseline_guess_l1);
  report(4, "uniform mask bound 4096 stays in the guessing regime", ok, detail.str());
}

// 5. Streaming and direct attacks agree on 50 seeded sample sets.
void criterion_5() {
  int sets = 0, lsm_ok = 0, svd_ok = 0, svd_pairs = 0;
  double worst_lsm = 0.0;
  for (std::uint64_t seed = 0; sets < 50 && seed < 200; ++seed) {
    StreamRng rng(9000 + seed, 0);
    const int n = 1 + static_cast<int>(rng.below(8));
    const int k = 1 + static_cast<int>(rng.below(2));
    const std::size_t d = static_cast<std::size_t>(n * k);
    const std::size_t m = std::min<std::size_t>(100, d + 10 + rng.below(50));
    std::vector<PolyVec> zs;
    std::vector<Poly> cs;
    GramAccumulator acc(RingParams{n, k});
    for (std::size_t i = 0; i < m; ++i) {
      PolyVec z(n, k);
      for (int j = 0; j < k; ++j) z[j] = random_poly(n, -9, 9, rng);
      const Poly c = random_poly(n, -1, 1, rng);
      acc.absorb(z, c);
      zs.push_back(std::move(z));
      cs.push_back(c);
    }
    const IlweInstance inst = assemble_instance(zs, cs);

    RecoveredSecret stream_lsm, direct_lsm;
    try {
      stream_lsm = lsm_streaming(acc);
      direct_lsm = lsm_direct(inst);
    } catch (const SingularOrIndefiniteError&) {
      continue;  // degenerate draw, not part of the 50
    }
    ++sets;
    double gap = 0.0;
    for (std::size_t i = 0; i < d; ++i) gap = std::max(gap, std::fabs(stream_lsm.s_hat[i] - direct_lsm.s_hat[i]));
    worst_lsm = std::max(worst_lsm, gap);
    if (gap <= 1e-8) ++lsm_ok;

    try {
      const RecoveredSecret stream_svd = svd_streaming(acc);
      const RecoveredSecret direct_svd = svd_direct(inst);
      ++svd_pairs;
      if (stream_svd.s_tilde == direct_svd.s_tilde) ++svd_ok;
    } catch (const DegenerateLastComponentError&) {
    }
  }
  const bool ok = sets == 50 && lsm_ok == 50 && svd_ok == svd_pairs && svd_pairs >= 45;
  std::ostringstream detail;
  detail << sets << " sets; lsm within 1e-8: " << lsm_ok << "/50 (worst gap " << fmt(worst_lsm)
         << "); svd identical: " << svd_ok << "/" << svd_pairs;
  report(5, "streaming equals direct", ok, detail.str());
}

// 6. Matrix representation against the ring oracle, 1e4 random pairs.
void criterion_6() {
  StreamRng rng(9601, 0);
  int checked = 0, matrix_ok = 0, oracle_ok = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(8));
    const Poly f = random_poly(n, -5, 5, rng);
    const Poly g = random_poly(n, -5, 5, rng);
    const Poly fg = neg_mul(f, g);
    ++checked;
    if (fg == reduce_after_schoolbook(f, g)) ++oracle_ok;
    const auto prod = matvec(negacyclic_matrix(f), std::vector<double>(g.coeffs.begin(), g.coeffs.end()));
    bool exact = true;
    for (int i = 0; i < n; ++i)
      if (prod[static_cast<std::size_t>(i)] != static_cast<double>(fg[i])) exact = false;
    if (exact) ++matrix_ok;
  }
  const bool ok = matrix_ok == checked && oracle_ok == checked;
  std::ostringstream detail;
  detail << "matrix identity " << matrix_ok << "/" << checked << ", schoolbook oracle " << oracle_ok << "/"
         << checked;
  report(6, "negacyclic matrix oracle", ok, detail.str());
}

// 7. Noiseless instances recover exactly under both attacks, 100 times.
void criterion_7() {
  int done = 0, lsm_exact = 0, svd_exact = 0;
  for (std::uint64_t seed = 0; done < 100 && seed < 400; ++seed) {
    StreamRng rng(9700 + seed, 0);
    const std::size_t k = 1 + rng.below(8);
    const std::size_t m = k + 10 + rng.below(30);
    std::vector<std::int64_t> s(k);
    for (auto& v : s) v = rng.uniform_int(-10, 10);
    const IlweInstance inst = gen_ilwe_synthetic(s, DistSpec::uniform_box(10), DistSpec::point_mass(0), m, rng);
    RecoveredSecret lsm;
    try {
      lsm = lsm_direct(inst);
    } catch (const SingularOrIndefiniteError&) {
      continue;  // rank-deficient A is outside the criterion's precondition
    }
    ++done;
    if (lsm.s_tilde == s) ++lsm_exact;
    if (svd_direct(inst).s_tilde == s) ++svd_exact;
  }
  const bool ok = done == 100 && lsm_exact == 100 && svd_exact == 100;
  std::ostringstream detail;
  detail << "lsm " << lsm_exact << "/" << done << ", svd " << svd_exact << "/" << done;
  report(7, "noiseless exact recovery", ok, detail.str());
}

// 8. Sufficient-sample bound: at m = ceil(bound), exact recovery in at least
//    95 of 100 seeded synthetic instances.
void criterion_8() {
  const double tau_a = subgaussian_tau(DistSpec::uniform_box(50));
  const double tau_e = subgaussian_tau(DistSpec::uniform_box(5));
  const double sigma_a = std::sqrt(50.0 * 51.0 / 3.0);
  const double bound = sample_complexity_bound(tau_a, sigma_a, tau_e, 10, 1.0);
  const auto m = static_cast<std::size_t>(std::ceil(bound));
  int exact = 0;
  for (int trial = 0; trial < 100; ++trial) {
    StreamRng rng(9800 + static_cast<std::uint64_t>(trial), 0);
    std::vector<std::int64_t> s(10);
    for (auto& v : s) v = rng.uniform_int(-100, 100);
    const IlweInstance inst = gen_ilwe_synthetic(s, DistSpec::uniform_box(50), DistSpec::uniform_box(5), m, rng);
    if (lsm_direct(inst).s_tilde == s) ++exact;
  }
  std::ostringstream detail;
  detail << "m = " << m << " (bound " << fmt(bound) << "); exact " << exact << "/100 (want >= 95)";
  report(8, "least-squares sufficiency bound", exact >= 95, detail.str());
}

// 9. The n=1 toy case: the empirical rejection rate matches the value
//    obtained by enumerating all (y, c) candidates exactly.
void criterion_9() {
  SamplerParams p;
  p.n = 1;
  p.k = 1;
  p.rho = 1;
  p.gamma = 2;
  p.beta = 0;
  p.eta = 1;
  int rejected_pairs = 0, pairs = 0;
  for (Coeff y = -2; y <= 2; ++y)
    for (Coeff c : {-1, 1}) {
      ++pairs;
      if (std::abs(y + c) >= p.bound()) ++rejected_pairs;
    }
  const double exact = static_cast<double>(rejected_pairs) / static_cast<double>(pairs);

  const PolyVec s({Poly({1})});
  std::uint64_t total = 0;
  const std::uint64_t m = 100000;
  for (std::uint64_t i = 0; i < m; ++i) {
    StreamRng rng(9901, i);
    total += gen_signature_sample(s, p, rng).attempts;
  }
  const double rejection = 1.0 - static_cast<double>(m) / static_cast<double>(total);
  const bool ok = std::fabs(rejection - exact) <= 0.015;
  std::ostringstream detail;
  detail << "empirical " << fmt(rejection) << " vs enumerated " << fmt(exact) << " (tolerance 0.015)";
  report(9, "enumerated rejection-rate oracle", ok, detail.str());
}

// 10. Rounding convention: ties go down, everything else to nearest.
void criterion_10() {
  bool ok = round_half_down(2.5) == 2 && round_half_down(-2.5) == -3 && round_half_down(0.5) == 0;
  for (std::int64_t i = -100; i <= 100 && ok; ++i) {
    if (round_half_down(static_cast<double>(i) + 0.5) != i) ok = false;
    if (round_half_down(static_cast<double>(i) - 0.5) != i - 1) ok = false;
    if (round_half_down(static_cast<double>(i) + 0.25) != i) ok = false;
    if (round_half_down(static_cast<double>(i) - 0.25) != i) ok = false;
  }
  report(10, "half-down rounding convention", ok,
         ok ? "2.5 -> 2, -2.5 -> -3, 0.5 -> 0, half-integer grid consistent" : "tie rule violated");
}

// 11. Determinism: a repeated experiment with the same seed emits an
//     identical report.
void criterion_11() {
  ExperimentConfig config = base_config();
  config.ring = {8, 2};
  config.rho = 3;
  config.gamma = 25;
  config.beta_mode.fixed = 5;
  config.y_dist = YDist::UniformGamma;
  config.m_list = {200, 400};
  config.run_svd = true;
  const std::string csv1 = emit_report(run_experiment(config), ReportFormat::Csv);
  const std::string csv2 = emit_report(run_experiment(config), ReportFormat::Csv);
  config.seed = 2;
  const std::string other = emit_report(run_experiment(config), ReportFormat::Csv);
  const bool ok = csv1 == csv2 && csv1 != other;
  report(11, "seeded reruns are byte-identical", ok,
         ok ? "identical CSV across reruns; different seed differs" : "reruns diverged");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
