#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "matform.hpp"
#include "ring.hpp"
#include "rng.hpp"

// All randomness: the fixed-weight ball sampler, secret generation, the two
// mask distributions, the rejection-sampling loop, and synthetic integer-LWE
// instances drawn directly from their defining distributions.

namespace ilwe {

enum class YDist { UniformGamma, UniformGammaShifted, SubgaussianRotation };
enum class SecretMode { UniformBox, FixedWeight };
enum class ResamplePolicy { ResampleBoth, ResampleCOnly };

// The rejection loop gave up: gamma - beta is so tight that no candidate
// passed within the attempt budget.
struct AttemptBudgetExceededError : std::runtime_error {
  explicit AttemptBudgetExceededError(const std::string& what) : std::runtime_error(what) {}
};

constexpr std::uint64_t kAttemptBudget = 1000000;

// Purpose tags for deriving independent substreams from one master seed.
enum StreamPurpose : std::uint64_t {
  kStreamPilot = 1,
  kStreamTrial = 2,
  kStreamSecret = 3,
  kStreamSamples = 4,
  kStreamBaseline = 5,
};

struct SamplerParams {
  int n = 1;
  int k = 1;
  int rho = 0;             // Hamming weight of c
  std::int64_t gamma = 1;  // mask bound
  std::int64_t beta = 0;   // rejection offset, may be negative
  std::int64_t eta = 1;    // secret coefficient bound
  YDist y_dist = YDist::UniformGamma;
  std::int64_t alpha = 1;  // SubgaussianRotation coefficient bound
  ResamplePolicy resample = ResamplePolicy::ResampleBoth;

  std::int64_t bound() const { return gamma - beta; }  // accept iff ||z||_inf < bound
  void validate() const;
};

// Accepted (z, c) plus how many candidates the loop drew, accepted one
// included. The mask y is never part of the sample.
struct SignatureSample {
  PolyVec z;
  Poly c;
  std::uint64_t attempts = 1;
};

// Structure-of-arrays batch, the unit of replay and of Gram absorption.
struct SampleBatch {
  int n = 0;
  int k = 0;
  std::vector<PolyVec> zs;
  std::vector<Poly> cs;
  std::vector<std::uint64_t> attempts;

  std::size_t size() const { return cs.size(); }
  void push(SignatureSample&& s);
  std::uint64_t total_attempts() const;
  // rejected candidates / total candidates
  double rejection_rate() const;
};

// One sample per line: "c: <n ints>; z: <nk ints>; attempts: <int>".
void save_samples(const SampleBatch& batch, std::ostream& os);
void save_samples(const SampleBatch& batch, const std::string& path);
SampleBatch load_samples(std::istream& is, int n, int k);
SampleBatch load_samples(const std::string& path, int n, int k);

// Weight-rho vector with entries in {0,+-1}, filled by the swap-and-set loop
// of the reference ball sampler.
Poly sample_in_ball(int n, int rho, StreamRng& rng);

// Weight exactly rho, nonzero coefficients uniform over +-{1..max_mag}.
Poly fixed_weight_poly(int n, int rho, std::int64_t max_mag, StreamRng& rng);

PolyVec sample_secret(const SamplerParams& p, SecretMode mode, StreamRng& rng);

PolyVec sample_y(const SamplerParams& p, StreamRng& rng);

// Draw (y, c) per the resample policy, accept the first z = y + c s with
// ||z||_inf < gamma - beta.
SignatureSample gen_signature_sample(const PolyVec& s, const SamplerParams& p, StreamRng& rng);

// m accepted samples; sample i depends only on (key, i), so batches may be
// produced in any order or in parallel without changing the result.
SampleBatch generate_batch(const PolyVec& s, const SamplerParams& p, std::uint64_t key, std::uint64_t m);

struct DistSpec {
  enum class Kind { UniformBox, DiscreteGaussian, RotationSum, PointMass };
  Kind kind = Kind::PointMass;
  double a = 0.0;  // UniformBox: alpha; DiscreteGaussian: sigma; RotationSum: alpha; PointMass: value
  double b = 0.0;  // RotationSum: rho

  static DistSpec uniform_box(double alpha) { return {Kind::UniformBox, alpha, 0.0}; }
  static DistSpec discrete_gaussian(double sigma) { return {Kind::DiscreteGaussian, sigma, 0.0}; }
  static DistSpec rotation_sum(double alpha, double rho) { return {Kind::RotationSum, alpha, rho}; }
  static DistSpec point_mass(double value) { return {Kind::PointMass, value, 0.0}; }
};

// The subgaussian parameter tau of the family: alpha/sqrt(2) for the uniform
// box, sigma/sqrt(2*pi) for the discrete Gaussian, alpha*sqrt(rho) for the
// signed-rotation sum.
double subgaussian_tau(const DistSpec& dist);

// b = A s + e exactly, A ~ chi_a^(m x k), e ~ chi_e^m; no modular reduction.
// Only samplable families (UniformBox, PointMass) are accepted.
IlweInstance gen_ilwe_synthetic(std::span<const std::int64_t> s, const DistSpec& chi_a, const DistSpec& chi_e,
                                std::size_t m, StreamRng& rng);

}  // namespace ilwe
