#pragma once

#include <cstdint>
#include <vector>

#include "pijet/valq.hpp"

namespace pijet {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Scalar helpers for Z/p^k arithmetic stored in u64. All moduli must satisfy
// p^k < 2^62 so sums of two residues never wrap.
namespace zmod {

inline u64 addm(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return s >= m ? s - m : s;
}

inline u64 subm(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + m - b; }

inline u64 mulm(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

inline u64 powm(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  while (e) {
    if (e & 1) r = mulm(r, a, m);
    a = mulm(a, a, m);
    e >>= 1;
  }
  return r;
}

// Inverse of a unit mod p^k by lifting the inverse mod p (Newton doubling).
inline u64 invm(u64 a, u64 p, u64 pk) {
  u64 a0 = a % p;
  if (a0 == 0) throw divisibility_error("zmod: inverse of non-unit");
  u64 x = powm(a0, p - 2, p);  // Fermat
  // x <- x(2 - a x), doubling precision each round
  for (int i = 0; i < 7; ++i) {  // 2^7 = 128 digits, far beyond any k we use
    u64 t = mulm(a, x, pk);
    t = subm(2 % pk, t, pk);
    x = mulm(x, t, pk);
  }
  return x;
}

inline u64 powu64(u64 b, unsigned e) {
  u64 r = 1;
  while (e--) r *= b;
  return r;
}

// signed value -> residue mod m
inline u64 from_ll(long long v, u64 m) {
  long long r = v % (long long)m;
  if (r < 0) r += (long long)m;
  return (u64)r;
}

}  // namespace zmod
}  // namespace pijet
