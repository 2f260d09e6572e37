#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace normcurve {

// Element of Z/p with the modulus carried alongside the residue.
//
// A value with modulus() == 0 is a plain integer that has not yet met a
// modulus; it is reduced on first contact with a mod-p value. This is how
// small integer constants (derivative factors, literals such as K(1) in
// generic code) enter prime-field arithmetic. Raw-raw arithmetic is plain
// 64-bit arithmetic; raw values stay tiny in practice, and the project-wide
// admissibility bound p > 40*d keeps every such constant a unit mod p.
class Fp {
 public:
  Fp() : v_(0), p_(0) {}
  Fp(long long v) : v_(v), p_(0) {}  // NOLINT: implicit by design
  Fp(long long v, uint64_t p) : p_(p) {
    check_modulus(p);
    v_ = reduce(v, p);
  }

  uint64_t modulus() const { return p_; }
  // Canonical residue in [0,p); for raw values the untouched integer.
  long long residue() const { return v_; }

  bool is_raw() const { return p_ == 0; }

  friend Fp operator+(const Fp& a, const Fp& b) {
    auto [x, y, p] = align(a, b);
    if (p == 0) return Fp(x + y);
    return from_residue(addmod(static_cast<uint64_t>(x), static_cast<uint64_t>(y), p), p);
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    auto [x, y, p] = align(a, b);
    if (p == 0) return Fp(x - y);
    uint64_t yn = (y == 0) ? 0 : p - static_cast<uint64_t>(y);
    return from_residue(addmod(static_cast<uint64_t>(x), yn, p), p);
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    auto [x, y, p] = align(a, b);
    if (p == 0) return Fp(x * y);
    return from_residue(mulmod(static_cast<uint64_t>(x), static_cast<uint64_t>(y), p), p);
  }
  friend Fp operator/(const Fp& a, const Fp& b) {
    auto [x, y, p] = align(a, b);
    if (p == 0) {
      if (y == 0) throw std::domain_error("Fp: division by zero");
      if (x % y != 0)
        throw std::domain_error("Fp: inexact raw integer division");
      return Fp(x / y);
    }
    if (y == 0) throw std::domain_error("Fp: division by zero");
    return from_residue(
        mulmod(static_cast<uint64_t>(x), invmod(static_cast<uint64_t>(y), p), p), p);
  }
  Fp operator-() const {
    if (p_ == 0) return Fp(-v_);
    return from_residue(v_ == 0 ? 0 : p_ - static_cast<uint64_t>(v_), p_);
  }

  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }
  Fp& operator/=(const Fp& o) { return *this = *this / o; }

  friend bool operator==(const Fp& a, const Fp& b) {
    auto [x, y, p] = align(a, b);
    return x == y;
  }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

  static Fp from_residue(uint64_t r, uint64_t p) {
    Fp e;
    e.v_ = static_cast<long long>(r);
    e.p_ = p;
    return e;
  }

  static uint64_t addmod(uint64_t a, uint64_t b, uint64_t p) {
    uint64_t s = a + b;  // p < 2^62, no overflow
    return s >= p ? s - p : s;
  }
  static uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
  }
  static uint64_t powmod(uint64_t a, uint64_t e, uint64_t p) {
    uint64_t r = 1 % p;
    a %= p;
    while (e) {
      if (e & 1) r = mulmod(r, a, p);
      a = mulmod(a, a, p);
      e >>= 1;
    }
    return r;
  }
  // Extended-Euclid inverse; requires gcd(a,p) = 1.
  static uint64_t invmod(uint64_t a, uint64_t p) {
    long long t = 0, nt = 1;
    long long r = static_cast<long long>(p), nr = static_cast<long long>(a % p);
    while (nr != 0) {
      long long q = r / nr;
      long long tmp = t - q * nt;
      t = nt;
      nt = tmp;
      tmp = r - q * nr;
      r = nr;
      nr = tmp;
    }
    if (r != 1) throw std::domain_error("Fp: not invertible mod p");
    if (t < 0) t += static_cast<long long>(p);
    return static_cast<uint64_t>(t);
  }

 private:
  static void check_modulus(uint64_t p) {
    if (p != 0 && (p < 3 || p >= (1ULL << 62)))
      throw std::invalid_argument("Fp: modulus out of range");
  }
  static long long reduce(long long v, uint64_t p) {
    if (p == 0) return v;
    long long m = v % static_cast<long long>(p);
    if (m < 0) m += static_cast<long long>(p);
    return m;
  }
  // Brings two operands to a common modulus; mixing distinct moduli is a bug.
  struct Aligned {
    long long x, y;
    uint64_t p;
  };
  static Aligned align(const Fp& a, const Fp& b) {
    if (a.p_ == b.p_) return {a.v_, b.v_, a.p_};
    if (a.p_ == 0) return {reduce(a.v_, b.p_), b.v_, b.p_};
    if (b.p_ == 0) return {a.v_, reduce(b.v_, a.p_), a.p_};
    throw std::logic_error("Fp: mixed moduli " + std::to_string(a.p_) + " and " +
                           std::to_string(b.p_));
  }

  long long v_;
  uint64_t p_;
};

inline bool is_zero(const Fp& x) { return x.residue() == 0; }

}  // namespace normcurve
