#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Exact integer arithmetic in R = Z[X]/(X^n+1) and R^k, together with the
// norms, Hamming weight, coefficient flattening and rounding conventions the
// rest of the workbench builds on. All operations are pure functions on
// immutable values; there is no shared mutable state.

namespace ilwe {

using Coeff = std::int64_t;

// Exact integer arithmetic that would leave the 64-bit range is an error,
// never a silent wrap.
struct OverflowError : std::runtime_error {
  explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

struct RingParams {
  int n = 1;  // degree bound of X^n + 1
  int k = 1;  // module rank

  void validate() const {
    if (n < 1 || k < 1) throw std::invalid_argument("RingParams: need n >= 1 and k >= 1");
  }
  int dim() const { return n * k; }
  bool operator==(const RingParams&) const = default;
};

// Element of Z[X]/(X^n+1); coeffs[i] is the coefficient of X^i.
struct Poly {
  std::vector<Coeff> coeffs;

  Poly() = default;
  explicit Poly(int n) : coeffs(check_len(n)) {}
  Poly(std::initializer_list<Coeff> c) : coeffs(c) {
    if (coeffs.empty()) throw std::invalid_argument("Poly: need n >= 1");
  }
  explicit Poly(std::vector<Coeff> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) throw std::invalid_argument("Poly: need n >= 1");
  }

  static Poly monomial(int n, int degree, Coeff value = 1) {
    Poly p(n);
    if (degree < 0 || degree >= n) throw std::invalid_argument("Poly::monomial: degree out of range");
    p.coeffs[static_cast<std::size_t>(degree)] = value;
    return p;
  }

  int n() const { return static_cast<int>(coeffs.size()); }
  Coeff operator[](int i) const { return coeffs[static_cast<std::size_t>(i)]; }
  Coeff& operator[](int i) { return coeffs[static_cast<std::size_t>(i)]; }
  bool is_zero() const {
    for (Coeff c : coeffs)
      if (c != 0) return false;
    return true;
  }
  bool operator==(const Poly&) const = default;

 private:
  static std::size_t check_len(int n) {
    if (n < 1) throw std::invalid_argument("Poly: need n >= 1");
    return static_cast<std::size_t>(n);
  }
};

// Element of R^k: k polynomials sharing the same n.
struct PolyVec {
  std::vector<Poly> polys;

  PolyVec() = default;
  PolyVec(int n, int k) : polys(check_k(k), Poly(n)) {}
  explicit PolyVec(std::vector<Poly> ps) : polys(std::move(ps)) {
    if (polys.empty()) throw std::invalid_argument("PolyVec: need k >= 1");
    for (const Poly& p : polys)
      if (p.n() != polys.front().n()) throw std::invalid_argument("PolyVec: mixed polynomial lengths");
  }

  int n() const { return polys.front().n(); }
  int k() const { return static_cast<int>(polys.size()); }
  const Poly& operator[](int j) const { return polys[static_cast<std::size_t>(j)]; }
  Poly& operator[](int j) { return polys[static_cast<std::size_t>(j)]; }
  bool operator==(const PolyVec&) const = default;

 private:
  static std::size_t check_k(int k) {
    if (k < 1) throw std::invalid_argument("PolyVec: need k >= 1");
    return static_cast<std::size_t>(k);
  }
};

// Overflow-checked building blocks, shared with the sampling and matrix code.
Coeff checked_add(Coeff a, Coeff b);
Coeff checked_mul(Coeff a, Coeff b);

// fg mod X^n+1 by schoolbook convolution; wraparound terms pick up a sign
// flip from X^n = -1. Exact, overflow-checked.
Poly neg_mul(const Poly& f, const Poly& g);

// Componentwise c * v[j] in R.
PolyVec scalar_mul_vec(const Poly& c, const PolyVec& v);

PolyVec add_vec(const PolyVec& u, const PolyVec& v);

Coeff norm_1(const Poly& p);
double norm_2(const Poly& p);
Coeff norm_inf(const Poly& p);
Coeff norm_1(const PolyVec& v);
double norm_2(const PolyVec& v);
Coeff norm_inf(const PolyVec& v);

// Number of nonzero coefficients.
int weight(const Poly& p);
int weight(const PolyVec& v);

// coeff(v) = coeff(v[0]) || ... || coeff(v[k-1]), each component in ascending
// monomial order.
std::vector<Coeff> coeff_flatten(const PolyVec& v);
PolyVec coeff_unflatten(std::span<const Coeff> flat, int n, int k);

// X^r * f mod X^n+1 for 0 <= r < n: coefficient i moves to i+r, negating on
// wraparound.
Poly rotate(const Poly& f, int r);

// Nearest integer, ties toward -infinity: 2.5 -> 2, -2.5 -> -3, 0.5 -> 0.
std::int64_t round_half_down(double a);
std::vector<std::int64_t> round_vec(std::span<const double> a);

}  // namespace ilwe
