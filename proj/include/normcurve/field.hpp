#pragma once

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "normcurve/prime_field.hpp"
#include "normcurve/rational.hpp"
#include "normcurve/rng.hpp"

namespace normcurve {

// Exact field scalar usable by the generic layers. Both Rat and Fp model it.
template <class K>
concept Scalar = std::regular<K> && requires(K a, K b) {
  { a + b } -> std::convertible_to<K>;
  { a - b } -> std::convertible_to<K>;
  { a * b } -> std::convertible_to<K>;
  { a / b } -> std::convertible_to<K>;
  { -a } -> std::convertible_to<K>;
  K(1);
  { is_zero(a) } -> std::convertible_to<bool>;
};

enum class FieldKind { rationals, prime };

struct FieldSpec {
  FieldKind kind = FieldKind::rationals;
  uint64_t p = 0;  // modulus, prime kind only

  static FieldSpec rationals() { return {FieldKind::rationals, 0}; }
  static FieldSpec prime(uint64_t p) { return {FieldKind::prime, p}; }

  std::string describe() const {
    return kind == FieldKind::rationals ? "rational" : "prime:" + std::to_string(p);
  }
};

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                     29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                     29ULL, 31ULL, 37ULL}) {
    uint64_t x = Fp::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = Fp::mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// p must be prime and large enough that the small integers showing up in
// derivative and Euler-relation arithmetic stay units mod p.
inline void check_admissible(const FieldSpec& fs, int degree) {
  if (fs.kind != FieldKind::prime) return;
  if (!is_prime_u64(fs.p))
    throw std::invalid_argument("field modulus " + std::to_string(fs.p) +
                                " is not prime");
  if (fs.p <= 40ULL * static_cast<uint64_t>(degree))
    throw std::invalid_argument("field modulus " + std::to_string(fs.p) +
                                " too small for degree " + std::to_string(degree) +
                                " (need p > 40*d)");
}

// Per-scalar glue the generic layers use to draw random elements and
// serialize. Random rationals are integers in [-20, 20]; random prime-field
// elements are uniform residues.
template <Scalar K>
struct FieldTraits;

template <>
struct FieldTraits<Rat> {
  static Rat random(SplitMix64& rng, const FieldSpec&) {
    return Rat(rng.range(-20, 20));
  }
  static Rat random_nonzero(SplitMix64& rng, const FieldSpec& fs) {
    Rat x;
    do {
      x = random(rng, fs);
    } while (is_zero(x));
    return x;
  }
  static std::string to_string(const Rat& x) { return format_rational(x); }
};

template <>
struct FieldTraits<Fp> {
  static Fp random(SplitMix64& rng, const FieldSpec& fs) {
    if (fs.kind != FieldKind::prime || fs.p == 0)
      throw std::logic_error("Fp sampling requires a prime FieldSpec");
    return Fp::from_residue(rng.below(fs.p), fs.p);
  }
  static Fp random_nonzero(SplitMix64& rng, const FieldSpec& fs) {
    if (fs.kind != FieldKind::prime || fs.p < 2)
      throw std::logic_error("Fp sampling requires a prime FieldSpec");
    return Fp::from_residue(1 + rng.below(fs.p - 1), fs.p);
  }
  static std::string to_string(const Fp& x) { return std::to_string(x.residue()); }
};

}  // namespace normcurve
