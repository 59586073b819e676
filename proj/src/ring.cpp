#include "ring.hpp"

#include <cmath>

namespace ilwe {

namespace {

void check_same_n(const Poly& f, const Poly& g, const char* who) {
  if (f.n() != g.n()) throw std::invalid_argument(std::string(who) + ": mismatched n");
}

void check_same_shape(const PolyVec& u, const PolyVec& v, const char* who) {
  if (u.n() != v.n() || u.k() != v.k()) throw std::invalid_argument(std::string(who) + ": shape mismatch");
}

}  // namespace

Coeff checked_add(Coeff a, Coeff b) {
  Coeff out;
  if (__builtin_add_overflow(a, b, &out)) throw OverflowError("64-bit overflow in addition");
  return out;
}

Coeff checked_mul(Coeff a, Coeff b) {
  Coeff out;
  if (__builtin_mul_overflow(a, b, &out)) throw OverflowError("64-bit overflow in multiplication");
  return out;
}

Poly neg_mul(const Poly& f, const Poly& g) {
  check_same_n(f, g, "neg_mul");
  const int n = f.n();
  Poly out(n);
  for (int a = 0; a < n; ++a) {
    const Coeff fa = f[a];
    if (fa == 0) continue;
    for (int b = 0; b < n; ++b) {
      const Coeff term = checked_mul(fa, g[b]);
      const int i = a + b;
      if (i < n)
        out[i] = checked_add(out[i], term);
      else
        out[i - n] = checked_add(out[i - n], -term);
    }
  }
  return out;
}

PolyVec scalar_mul_vec(const Poly& c, const PolyVec& v) {
  if (c.n() != v.n()) throw std::invalid_argument("scalar_mul_vec: mismatched n");
  PolyVec out(v.n(), v.k());
  for (int j = 0; j < v.k(); ++j) out[j] = neg_mul(c, v[j]);
  return out;
}

PolyVec add_vec(const PolyVec& u, const PolyVec& v) {
  check_same_shape(u, v, "add_vec");
  PolyVec out(u.n(), u.k());
  for (int j = 0; j < u.k(); ++j)
    for (int i = 0; i < u.n(); ++i) out[j][i] = checked_add(u[j][i], v[j][i]);
  return out;
}

Coeff norm_1(const Poly& p) {
  Coeff sum = 0;
  for (Coeff c : p.coeffs) sum = checked_add(sum, c < 0 ? -c : c);
  return sum;
}

double norm_2(const Poly& p) {
  double sum = 0.0;
  for (Coeff c : p.coeffs) sum += static_cast<double>(c) * static_cast<double>(c);
  return std::sqrt(sum);
}

Coeff norm_inf(const Poly& p) {
  Coeff best = 0;
  for (Coeff c : p.coeffs) {
    const Coeff a = c < 0 ? -c : c;
    if (a > best) best = a;
  }
  return best;
}

Coeff norm_1(const PolyVec& v) {
  Coeff sum = 0;
  for (const Poly& p : v.polys) sum = checked_add(sum, norm_1(p));
  return sum;
}

double norm_2(const PolyVec& v) {
  double sum = 0.0;
  for (const Poly& p : v.polys) {
    const double c = norm_2(p);
    sum += c * c;
  }
  return std::sqrt(sum);
}

Coeff norm_inf(const PolyVec& v) {
  Coeff best = 0;
  for (const Poly& p : v.polys) best = std::max(best, norm_inf(p));
  return best;
}

int weight(const Poly& p) {
  int w = 0;
  for (Coeff c : p.coeffs)
    if (c != 0) ++w;
  return w;
}

int weight(const PolyVec& v) {
  int w = 0;
  for (const Poly& p : v.polys) w += weight(p);
  return w;
}

std::vector<Coeff> coeff_flatten(const PolyVec& v) {
  std::vector<Coeff> out;
  out.reserve(static_cast<std::size_t>(v.n()) * static_cast<std::size_t>(v.k()));
  for (const Poly& p : v.polys) out.insert(out.end(), p.coeffs.begin(), p.coeffs.end());
  return out;
}

PolyVec coeff_unflatten(std::span<const Coeff> flat, int n, int k) {
  RingParams{n, k}.validate();
  if (flat.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(k))
    throw std::invalid_argument("coeff_unflatten: length != n*k");
  PolyVec out(n, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) out[j][i] = flat[static_cast<std::size_t>(j * n + i)];
  return out;
}

Poly rotate(const Poly& f, int r) {
  const int n = f.n();
  if (r < 0 || r >= n) throw std::invalid_argument("rotate: need 0 <= r < n");
  Poly out(n);
  for (int i = 0; i < n; ++i) {
    const int j = i + r;
    if (j < n)
      out[j] = f[i];
    else
      out[j - n] = -f[i];
  }
  return out;
}

std::int64_t round_half_down(double a) {
  if (!std::isfinite(a)) throw std::invalid_argument("round_half_down: non-finite input");
  const double r = std::ceil(a - 0.5);
  if (r < -9.2e18 || r > 9.2e18) throw OverflowError("round_half_down: out of 64-bit range");
  return static_cast<std::int64_t>(r);
}

std::vector<std::int64_t> round_vec(std::span<const double> a) {
  std::vector<std::int64_t> out;
  out.reserve(a.size());
  for (double x : a) out.push_back(round_half_down(x));
  return out;
}

}  // namespace ilwe
