#include "sampling.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

namespace ilwe {

void SamplerParams::validate() const {
  RingParams{n, k}.validate();
  if (rho < 0 || rho > n) throw std::invalid_argument("SamplerParams: need 0 <= rho <= n");
  if (gamma < 0) throw std::invalid_argument("SamplerParams: need gamma >= 0");
  if (eta < 0) throw std::invalid_argument("SamplerParams: need eta >= 0");
  if (bound() < 1) throw std::invalid_argument("SamplerParams: need gamma - beta >= 1, everything is rejected otherwise");
  if (y_dist == YDist::SubgaussianRotation && alpha < 1)
    throw std::invalid_argument("SamplerParams: SubgaussianRotation needs alpha >= 1");
}

void SampleBatch::push(SignatureSample&& s) {
  if (cs.empty()) {
    n = s.c.n();
    k = s.z.k();
  } else if (s.c.n() != n || s.z.n() != n || s.z.k() != k) {
    throw std::invalid_argument("SampleBatch: sample shape mismatch");
  }
  zs.push_back(std::move(s.z));
  cs.push_back(std::move(s.c));
  attempts.push_back(s.attempts);
}

std::uint64_t SampleBatch::total_attempts() const {
  std::uint64_t total = 0;
  for (std::uint64_t a : attempts) total += a;
  return total;
}

double SampleBatch::rejection_rate() const {
  const std::uint64_t total = total_attempts();
  if (total == 0) return 0.0;
  return 1.0 - static_cast<double>(size()) / static_cast<double>(total);
}

void save_samples(const SampleBatch& batch, std::ostream& os) {
  for (std::size_t i = 0; i < batch.size(); ++i) {
    os << "c:";
    for (Coeff v : batch.cs[i].coeffs) os << ' ' << v;
    os << "; z:";
    for (const Poly& p : batch.zs[i].polys)
      for (Coeff v : p.coeffs) os << ' ' << v;
    os << "; attempts: " << batch.attempts[i] << '\n';
  }
}

void save_samples(const SampleBatch& batch, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_samples: cannot open " + path);
  save_samples(batch, os);
  if (!os) throw std::runtime_error("save_samples: write failed for " + path);
}

namespace {

std::vector<std::int64_t> parse_labeled_ints(const std::string& segment, const std::string& label,
                                             std::size_t line_no) {
  const auto colon = segment.find(':');
  if (colon == std::string::npos)
    throw std::runtime_error("load_samples: line " + std::to_string(line_no) + ": missing \"" + label + ":\"");
  std::string got = segment.substr(0, colon);
  got.erase(0, got.find_first_not_of(" \t"));
  got.erase(got.find_last_not_of(" \t") + 1);
  if (got != label)
    throw std::runtime_error("load_samples: line " + std::to_string(line_no) + ": expected \"" + label +
                             ":\", got \"" + got + ":\"");
  std::istringstream ss(segment.substr(colon + 1));
  std::vector<std::int64_t> out;
  std::int64_t v;
  while (ss >> v) out.push_back(v);
  return out;
}

}  // namespace

SampleBatch load_samples(std::istream& is, int n, int k) {
  RingParams{n, k}.validate();
  SampleBatch batch;
  batch.n = n;
  batch.k = k;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> segments;
    std::size_t start = 0;
    for (std::size_t pos = line.find(';'); pos != std::string::npos; pos = line.find(';', start)) {
      segments.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    segments.push_back(line.substr(start));
    if (segments.size() != 3)
      throw std::runtime_error("load_samples: line " + std::to_string(line_no) + ": expected 3 \";\"-separated fields");

    const auto cvals = parse_labeled_ints(segments[0], "c", line_no);
    const auto zvals = parse_labeled_ints(segments[1], "z", line_no);
    const auto avals = parse_labeled_ints(segments[2], "attempts", line_no);
    if (cvals.size() != static_cast<std::size_t>(n))
      throw std::runtime_error("load_samples: line " + std::to_string(line_no) + ": c has wrong length");
    if (zvals.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(k))
      throw std::runtime_error("load_samples: line " + std::to_string(line_no) + ": z has wrong length");
    if (avals.size() != 1 || avals[0] < 1)
      throw std::runtime_error("load_samples: line " + std::to_string(line_no) + ": bad attempts field");

    SignatureSample s;
    s.c = Poly(std::vector<Coeff>(cvals.begin(), cvals.end()));
    s.z = coeff_unflatten(zvals, n, k);
    s.attempts = static_cast<std::uint64_t>(avals[0]);
    batch.push(std::move(s));
  }
  return batch;
}

SampleBatch load_samples(const std::string& path, int n, int k) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_samples: cannot open " + path);
  return load_samples(is, n, k);
}

Poly sample_in_ball(int n, int rho, StreamRng& rng) {
  if (n < 1) throw std::invalid_argument("sample_in_ball: need n >= 1");
  if (rho < 0 || rho > n) throw std::invalid_argument("sample_in_ball: need 0 <= rho <= n");
  Poly c(n);
  // Swap-and-set: slots are 1-indexed i = n+1-rho .. n in the reference
  // description, 0-indexed here.
  for (int i = n - rho; i < n; ++i) {
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    c[i] = c[j];
    c[j] = rng.coin() ? -1 : 1;
  }
  return c;
}

Poly fixed_weight_poly(int n, int rho, std::int64_t max_mag, StreamRng& rng) {
  if (rho < 0 || rho > n) throw std::invalid_argument("fixed_weight_poly: need 0 <= rho <= n");
  if (rho > 0 && max_mag < 1) throw std::invalid_argument("fixed_weight_poly: need max_mag >= 1");
  Poly p(n);
  // Partial index shuffle picks the support uniformly.
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int t = 0; t < rho; ++t) {
    const int j = t + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - t)));
    std::swap(idx[static_cast<std::size_t>(t)], idx[static_cast<std::size_t>(j)]);
    const std::int64_t mag = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(max_mag)));
    p[idx[static_cast<std::size_t>(t)]] = rng.coin() ? -mag : mag;
  }
  return p;
}

PolyVec sample_secret(const SamplerParams& p, SecretMode mode, StreamRng& rng) {
  p.validate();
  PolyVec s(p.n, p.k);
  switch (mode) {
    case SecretMode::UniformBox:
      for (int j = 0; j < p.k; ++j)
        for (int i = 0; i < p.n; ++i) s[j][i] = rng.uniform_int(-p.eta, p.eta);
      break;
    case SecretMode::FixedWeight:
      if (p.rho > 0 && p.eta < 1)
        throw std::invalid_argument("sample_secret: FixedWeight needs eta >= 1");
      for (int j = 0; j < p.k; ++j) s[j] = fixed_weight_poly(p.n, p.rho, p.eta, rng);
      break;
  }
  return s;
}

PolyVec sample_y(const SamplerParams& p, StreamRng& rng) {
  p.validate();
  PolyVec y(p.n, p.k);
  switch (p.y_dist) {
    case YDist::UniformGamma:
      for (int j = 0; j < p.k; ++j)
        for (int i = 0; i < p.n; ++i) y[j][i] = rng.uniform_int(-p.gamma, p.gamma);
      break;
    case YDist::UniformGammaShifted:
      for (int j = 0; j < p.k; ++j)
        for (int i = 0; i < p.n; ++i) y[j][i] = rng.uniform_int(-p.gamma + 1, p.gamma);
      break;
    case YDist::SubgaussianRotation: {
      // Fresh v each call: per component weight rho, nonzeros in +-{1..alpha}.
      // y = sum of rho signed rotations of v, so ||y||_inf <= alpha * rho.
      PolyVec v(p.n, p.k);
      for (int j = 0; j < p.k; ++j) v[j] = fixed_weight_poly(p.n, p.rho, p.alpha, rng);
      for (int t = 0; t < p.rho; ++t) {
        const Coeff b = rng.coin() ? -1 : 1;
        const int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(p.n)));
        for (int j = 0; j < p.k; ++j)
          for (int i = 0; i < p.n; ++i) {
            const int dst = i + r < p.n ? i + r : i + r - p.n;
            const Coeff sgn = i + r < p.n ? b : -b;
            y[j][dst] = checked_add(y[j][dst], checked_mul(sgn, v[j][i]));
          }
      }
      break;
    }
  }
  return y;
}

SignatureSample gen_signature_sample(const PolyVec& s, const SamplerParams& p, StreamRng& rng) {
  p.validate();
  if (s.n() != p.n || s.k() != p.k) throw std::invalid_argument("gen_signature_sample: secret shape mismatch");
  if (norm_inf(s) > p.eta) throw std::invalid_argument("gen_signature_sample: ||s||_inf exceeds eta");

  const std::int64_t bound = p.bound();
  PolyVec y;
  std::uint64_t attempts = 0;
  for (;;) {
    ++attempts;
    if (attempts > kAttemptBudget)
      throw AttemptBudgetExceededError("gen_signature_sample: no acceptance within " +
                                       std::to_string(kAttemptBudget) + " candidates");
    if (attempts == 1 || p.resample == ResamplePolicy::ResampleBoth) y = sample_y(p, rng);
    Poly c = sample_in_ball(p.n, p.rho, rng);
    PolyVec z = add_vec(y, scalar_mul_vec(c, s));
    if (norm_inf(z) < bound) return {std::move(z), std::move(c), attempts};
  }
}

SampleBatch generate_batch(const PolyVec& s, const SamplerParams& p, std::uint64_t key, std::uint64_t m) {
  SampleBatch batch;
  batch.n = p.n;
  batch.k = p.k;
  for (std::uint64_t i = 0; i < m; ++i) {
    StreamRng rng(key, i);
    batch.push(gen_signature_sample(s, p, rng));
  }
  return batch;
}

namespace {

std::int64_t integral_param(double v, const char* who) {
  if (!(std::nearbyint(v) == v) || std::fabs(v) > 9.0e18)
    throw std::invalid_argument(std::string(who) + ": parameter must be an integer");
  return static_cast<std::int64_t>(v);
}

std::int64_t draw_int(const DistSpec& dist, StreamRng& rng) {
  switch (dist.kind) {
    case DistSpec::Kind::UniformBox: {
      const std::int64_t alpha = integral_param(dist.a, "gen_ilwe_synthetic");
      if (alpha < 0) throw std::invalid_argument("gen_ilwe_synthetic: UniformBox needs alpha >= 0");
      return rng.uniform_int(-alpha, alpha);
    }
    case DistSpec::Kind::PointMass:
      return integral_param(dist.a, "gen_ilwe_synthetic");
    default:
      throw std::invalid_argument("gen_ilwe_synthetic: unsupported distribution spec");
  }
}

}  // namespace

double subgaussian_tau(const DistSpec& dist) {
  switch (dist.kind) {
    case DistSpec::Kind::UniformBox:
      if (dist.a < 0) throw std::invalid_argument("subgaussian_tau: UniformBox needs alpha >= 0");
      return dist.a / std::numbers::sqrt2;
    case DistSpec::Kind::DiscreteGaussian:
      if (dist.a < 0) throw std::invalid_argument("subgaussian_tau: DiscreteGaussian needs sigma >= 0");
      return dist.a / std::sqrt(2.0 * std::numbers::pi);
    case DistSpec::Kind::RotationSum:
      if (dist.a < 0 || dist.b < 0) throw std::invalid_argument("subgaussian_tau: RotationSum needs alpha, rho >= 0");
      return dist.a * std::sqrt(dist.b);
    default:
      throw std::invalid_argument("subgaussian_tau: unknown distribution family");
  }
}

IlweInstance gen_ilwe_synthetic(std::span<const std::int64_t> s, const DistSpec& chi_a, const DistSpec& chi_e,
                                std::size_t m, StreamRng& rng) {
  if (m == 0) throw std::invalid_argument("gen_ilwe_synthetic: need m >= 1");
  if (s.empty()) throw std::invalid_argument("gen_ilwe_synthetic: need a nonempty secret");
  const std::size_t k = s.size();

  IlweInstance inst;
  inst.A = DenseMatrix(m, k);
  inst.b.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::int64_t acc = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const std::int64_t a = draw_int(chi_a, rng);
      inst.A(i, j) = static_cast<double>(a);
      acc = checked_add(acc, checked_mul(a, s[j]));
    }
    acc = checked_add(acc, draw_int(chi_e, rng));
    inst.b[i] = static_cast<double>(acc);
  }
  return inst;
}

}  // namespace ilwe
