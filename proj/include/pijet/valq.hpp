#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pijet {

// Exact p-adic valuation value: a rational number num/den (den > 0) or +infinity
// for elements that vanish at working precision. Denominators stay small (the
// ramification index), so int64 arithmetic never overflows in practice.
struct Val {
  long long num = 0;
  long long den = 1;
  bool infinite = false;

  Val() = default;
  Val(long long n) : num(n), den(1) {}
  Val(long long n, long long d) : num(n), den(d) { normalize(); }

  static Val infinity() {
    Val v;
    v.infinite = true;
    return v;
  }

  void normalize() {
    if (den == 0) throw std::invalid_argument("Val: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  friend Val operator+(const Val& a, const Val& b) {
    if (a.infinite || b.infinite) return infinity();
    return Val(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Val operator-(const Val& a, const Val& b) {
    if (a.infinite) return infinity();
    if (b.infinite) throw std::invalid_argument("Val: subtracting infinity");
    return Val(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend Val operator*(long long k, const Val& a) {
    if (a.infinite) return infinity();
    return Val(k * a.num, a.den);
  }
  friend bool operator<(const Val& a, const Val& b) {
    if (a.infinite) return false;
    if (b.infinite) return true;
    return a.num * b.den < b.num * a.den;
  }
  friend bool operator>(const Val& a, const Val& b) { return b < a; }
  friend bool operator<=(const Val& a, const Val& b) { return !(b < a); }
  friend bool operator>=(const Val& a, const Val& b) { return !(a < b); }
  friend bool operator==(const Val& a, const Val& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Val& a, const Val& b) { return !(a == b); }

  static Val min(const Val& a, const Val& b) { return a < b ? a : b; }

  // Smallest integer >= the value. Only defined for finite values.
  long long ceil() const {
    if (infinite) throw std::invalid_argument("Val: ceil of infinity");
    long long q = num / den;
    if (num > q * den) ++q;
    return q;
  }

  std::string str() const {
    if (infinite) return "inf";
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

struct precision_exhausted : std::runtime_error {
  explicit precision_exhausted(const std::string& m) : std::runtime_error(m) {}
};
struct divisibility_error : std::runtime_error {
  explicit divisibility_error(const std::string& m) : std::runtime_error(m) {}
};
struct integrality_error : std::runtime_error {
  explicit integrality_error(const std::string& m) : std::runtime_error(m) {}
};
struct hypothesis_error : std::runtime_error {
  explicit hypothesis_error(const std::string& m) : std::runtime_error(m) {}
};
struct config_error : std::runtime_error {
  explicit config_error(const std::string& m) : std::runtime_error(m) {}
};
struct truncation_mismatch : std::runtime_error {
  explicit truncation_mismatch(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace pijet
