#pragma once

#include <cassert>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "pijet/zmod.hpp"

namespace pijet {

struct PadicConfig {
  long long p = 5;  // prime >= 5
  int K = 8;        // absolute p-adic precision: work modulo p^K
  int f = 1;        // inertia degree of the unramified part (1 = plain Z_p)
};

class BaseElem;

// Unramified coefficient ring at fixed precision: (Z/p^K)[t]/(g(t)) with g a
// fixed monic lift of an irreducible polynomial over F_p. Frobenius is the
// Hensel-lifted root of g congruent to t^p mod p.
class UnramCtx : public std::enable_shared_from_this<UnramCtx> {
 public:
  long long p;
  int K;
  int f;
  std::vector<u64> pk;       // pk[j] = p^j for j = 0..K
  std::vector<u64> modulus;  // g coefficients, degree f, monic; size f+1
  std::vector<std::vector<u64>> frob_pow;  // frob_pow[i] = phi(t)^i mod g, i < f

  static std::shared_ptr<UnramCtx> make(const PadicConfig& cfg,
                                        std::vector<long long> g = {});

  u64 top() const { return pk[K]; }

  // polynomial arithmetic on coefficient vectors of length f, modulo (g, p^m)
  std::vector<u64> poly_mul(const std::vector<u64>& a, const std::vector<u64>& b,
                            u64 m) const {
    std::vector<u64> prod(2 * f - 1, 0);
    for (int i = 0; i < f; ++i) {
      if (!a[i]) continue;
      for (int j = 0; j < f; ++j)
        if (b[j]) prod[i + j] = zmod::addm(prod[i + j], zmod::mulm(a[i], b[j], m), m);
    }
    // reduce degrees >= f using t^f = -(g_0 + ... + g_{f-1} t^{f-1})
    for (int d = 2 * f - 2; d >= f; --d) {
      u64 c = prod[d];
      if (!c) continue;
      prod[d] = 0;
      for (int j = 0; j < f; ++j) {
        u64 gj = modulus[j] % m;
        if (gj) prod[d - f + j] = zmod::subm(prod[d - f + j], zmod::mulm(c, gj, m), m);
      }
    }
    prod.resize(f);
    return prod;
  }

  std::vector<u64> poly_pow(std::vector<u64> a, u64 e, u64 m) const {
    std::vector<u64> r(f, 0);
    r[0] = 1 % m;
    while (e) {
      if (e & 1) r = poly_mul(r, a, m);
      a = poly_mul(a, a, m);
      e >>= 1;
    }
    return r;
  }

  // inverse of a unit in (Z/p^m)[t]/(g): invert in the residue field by
  // powering, then Newton-lift.
  std::vector<u64> poly_inv(const std::vector<u64>& a, u64 m) const {
    std::vector<u64> red(f);
    for (int i = 0; i < f; ++i) red[i] = a[i] % (u64)p;
    bool unit = false;
    for (int i = 0; i < f; ++i) unit = unit || red[i] != 0;
    if (!unit) throw divisibility_error("UnramCtx: inverse of non-unit");
    u64 field_order = 1;
    for (int i = 0; i < f; ++i) field_order *= (u64)p;
    std::vector<u64> x = poly_pow(red, field_order - 2, (u64)p);
    for (int round = 0; round < 7; ++round) {
      std::vector<u64> t = poly_mul(a, x, m);
      for (int i = 0; i < f; ++i) t[i] = zmod::subm(i == 0 ? 2 % m : 0, t[i], m);
      x = poly_mul(x, t, m);
    }
    return x;
  }

  BaseElem from_ll(long long v, int prec = -1) const;
  BaseElem from_digits(const std::vector<long long>& d, int prec = -1) const;
  BaseElem zero(int prec = -1) const;
  BaseElem one(int prec = -1) const;
  BaseElem gen(int prec = -1) const;  // the class of t
  BaseElem random(std::mt19937_64& rng, int prec = -1) const;

 private:
  void init_frobenius();
};

// Element of the unramified ring, carrying its own absolute precision.
// Coefficients are kept reduced modulo p^prec.
class BaseElem {
 public:
  std::shared_ptr<const UnramCtx> ctx;
  std::vector<u64> c;  // length f
  int prec = 0;        // known modulo p^prec; prec >= 1 for usable elements

  BaseElem() = default;
  BaseElem(std::shared_ptr<const UnramCtx> cx, std::vector<u64> cc, int pr)
      : ctx(std::move(cx)), c(std::move(cc)), prec(pr) {
    reduce_mod();
  }

  u64 modu() const { return ctx->pk[prec]; }

  void reduce_mod() {
    u64 m = modu();
    for (auto& x : c) x %= m;
  }

  BaseElem at_prec(int np) const {
    if (np > prec)
      throw precision_exhausted("BaseElem: cannot raise precision " +
                                std::to_string(prec) + " -> " + std::to_string(np));
    BaseElem r = *this;
    r.prec = np;
    r.reduce_mod();
    return r;
  }

  bool is_zero() const {
    for (u64 x : c)
      if (x) return false;
    return true;
  }

  friend BaseElem operator+(const BaseElem& a, const BaseElem& b) {
    int pr = std::min(a.prec, b.prec);
    u64 m = a.ctx->pk[pr];
    std::vector<u64> r(a.ctx->f);
    for (int i = 0; i < a.ctx->f; ++i) r[i] = zmod::addm(a.c[i] % m, b.c[i] % m, m);
    return BaseElem(a.ctx, std::move(r), pr);
  }
  friend BaseElem operator-(const BaseElem& a, const BaseElem& b) {
    int pr = std::min(a.prec, b.prec);
    u64 m = a.ctx->pk[pr];
    std::vector<u64> r(a.ctx->f);
    for (int i = 0; i < a.ctx->f; ++i) r[i] = zmod::subm(a.c[i] % m, b.c[i] % m, m);
    return BaseElem(a.ctx, std::move(r), pr);
  }
  BaseElem operator-() const {
    u64 m = modu();
    std::vector<u64> r(ctx->f);
    for (int i = 0; i < ctx->f; ++i) r[i] = zmod::subm(0, c[i], m);
    return BaseElem(ctx, std::move(r), prec);
  }
  friend BaseElem operator*(const BaseElem& a, const BaseElem& b) {
    // pprec(xy) = min(prec(x) + v(y), prec(y) + v(x)); representatives reduced
    // below that modulus still produce the right residues
    Val va = a.valuation(), vb = b.valuation();
    long long vai = va.infinite ? a.prec : std::min<long long>(va.num, a.prec);
    long long vbi = vb.infinite ? b.prec : std::min<long long>(vb.num, b.prec);
    int pr = (int)std::min<long long>(
        std::min<long long>(a.prec + vbi, b.prec + vai), a.ctx->K);
    u64 m = a.ctx->pk[pr];
    return BaseElem(a.ctx, a.ctx->poly_mul(a.c, b.c, m), pr);
  }

  BaseElem pow(u64 e) const {
    return BaseElem(ctx, ctx->poly_pow(c, e, modu()), prec);
  }

  BaseElem inverse() const {
    return BaseElem(ctx, ctx->poly_inv(c, modu()), prec);
  }

  // Frobenius lift: identity on Z_p digits, t -> Hensel root of g.
  BaseElem frobenius() const {
    if (ctx->f == 1) return *this;
    u64 m = modu();
    std::vector<u64> acc(ctx->f, 0);
    for (int i = 0; i < ctx->f; ++i) {
      if (!c[i]) continue;
      for (int j = 0; j < ctx->f; ++j)
        acc[j] = zmod::addm(acc[j], zmod::mulm(c[i], ctx->frob_pow[i][j] % m, m), m);
    }
    return BaseElem(ctx, std::move(acc), prec);
  }

  // v_p as a nonnegative integer, or infinity when 0 at current precision.
  Val valuation() const {
    int best = prec;
    for (u64 x : c) {
      if (!x) continue;
      int v = 0;
      while (x % (u64)ctx->p == 0) {
        x /= (u64)ctx->p;
        ++v;
      }
      best = std::min(best, v);
    }
    if (best >= prec) return Val::infinity();
    return Val(best);
  }

  bool divisible_by_p() const {
    for (u64 x : c)
      if (x % (u64)ctx->p) return false;
    return true;
  }

  // exact division by p; costs one digit of precision
  BaseElem div_p() const {
    if (prec <= 1)
      throw precision_exhausted("BaseElem: division by p with no budget left");
    if (!divisible_by_p()) throw divisibility_error("BaseElem: not divisible by p");
    std::vector<u64> r(ctx->f);
    for (int i = 0; i < ctx->f; ++i) r[i] = c[i] / (u64)ctx->p;
    return BaseElem(ctx, std::move(r), prec - 1);
  }

  // delta_p x = (phi(x) - x^p)/p
  BaseElem delta_p() const {
    BaseElem num = frobenius() - pow((u64)ctx->p);
    return num.div_p();
  }

  friend bool eq(const BaseElem& a, const BaseElem& b) {
    int pr = std::min(a.prec, b.prec);
    u64 m = a.ctx->pk[pr];
    for (int i = 0; i < a.ctx->f; ++i)
      if (a.c[i] % m != b.c[i] % m) return false;
    return true;
  }

  // little-endian p-adic digit string; digits of each t-power joined by ','
  // and t-powers joined by ';'
  std::string digits() const {
    std::string s;
    for (int i = 0; i < ctx->f; ++i) {
      if (i) s += ";";
      u64 x = c[i];
      for (int j = 0; j < prec; ++j) {
        if (j) s += ",";
        s += std::to_string(x % (u64)ctx->p);
        x /= (u64)ctx->p;
      }
    }
    return s;
  }
};

inline BaseElem UnramCtx::from_ll(long long v, int prec) const {
  if (prec < 0) prec = K;
  std::vector<u64> r(f, 0);
  r[0] = zmod::from_ll(v, pk[prec]);
  return BaseElem(shared_from_this(), std::move(r), prec);
}

inline BaseElem UnramCtx::from_digits(const std::vector<long long>& d, int prec) const {
  if (prec < 0) prec = K;
  std::vector<u64> r(f, 0);
  for (size_t i = 0; i < d.size() && i < (size_t)f; ++i)
    r[i] = zmod::from_ll(d[i], pk[prec]);
  return BaseElem(shared_from_this(), std::move(r), prec);
}

inline BaseElem UnramCtx::zero(int prec) const { return from_ll(0, prec); }
inline BaseElem UnramCtx::one(int prec) const { return from_ll(1, prec); }

inline BaseElem UnramCtx::gen(int prec) const {
  if (prec < 0) prec = K;
  std::vector<u64> r(f, 0);
  if (f > 1) r[1] = 1;
  else r[0] = 0;
  return BaseElem(shared_from_this(), std::move(r), prec);
}

inline BaseElem UnramCtx::random(std::mt19937_64& rng, int prec) const {
  if (prec < 0) prec = K;
  std::vector<u64> r(f);
  for (int i = 0; i < f; ++i) r[i] = rng() % pk[prec];
  return BaseElem(shared_from_this(), std::move(r), prec);
}

inline std::shared_ptr<UnramCtx> UnramCtx::make(const PadicConfig& cfg,
                                                std::vector<long long> g) {
  if (cfg.p < 5) throw config_error("p must be a prime >= 5");
  for (long long d = 2; d * d <= cfg.p; ++d)
    if (cfg.p % d == 0) throw config_error("p must be prime");
  if (cfg.K < 1) throw config_error("precision K must be >= 1");
  if (cfg.f < 1) throw config_error("inertia degree f must be >= 1");

  auto cx = std::make_shared<UnramCtx>();
  cx->p = cfg.p;
  cx->K = cfg.K;
  cx->f = cfg.f;
  cx->pk.resize(cfg.K + 1);
  cx->pk[0] = 1;
  for (int j = 1; j <= cfg.K; ++j) {
    if (cx->pk[j - 1] > (u64(1) << 62) / (u64)cfg.p)
      throw config_error("p^K exceeds the 62-bit working range");
    cx->pk[j] = cx->pk[j - 1] * (u64)cfg.p;
  }

  u64 m = cx->pk[cfg.K];
  if (g.empty()) {
    if (cfg.f == 1) {
      g = {0, 1};  // unused when f = 1
    } else if (cfg.f == 2 || cfg.f == 3) {
      // search a monic irreducible x^f + c x + a over F_p (no roots suffices
      // in degree 2 and 3)
      bool found = false;
      for (long long a = 1; a < cfg.p && !found; ++a)
        for (long long cc = 0; cc < cfg.p && !found; ++cc) {
          bool has_root = false;
          for (long long x = 0; x < cfg.p && !has_root; ++x) {
            long long v = (zmod::powm((u64)x, cfg.f, (u64)cfg.p) +
                           (u64)((cc * x + a) % cfg.p)) %
                          (u64)cfg.p;
            has_root = v == 0;
          }
          if (!has_root) {
            g.assign(cfg.f + 1, 0);
            g[0] = a;
            g[1] = cc;
            g[cfg.f] = 1;
            found = true;
          }
        }
      if (!found) throw config_error("no degree-f irreducible found");
    } else {
      throw config_error("provide an explicit modulus for f > 3");
    }
  }
  if ((int)g.size() != cfg.f + 1 || g[cfg.f] != 1)
    throw config_error("modulus must be monic of degree f");
  cx->modulus.resize(cfg.f + 1);
  for (int i = 0; i <= cfg.f; ++i) cx->modulus[i] = zmod::from_ll(g[i], m);
  cx->init_frobenius();
  return cx;
}

inline void UnramCtx::init_frobenius() {
  frob_pow.assign(f, std::vector<u64>(f, 0));
  frob_pow[0][0] = 1;
  if (f == 1) return;

  u64 m = pk[K];
  // start from t^p mod (g, p), then Newton-lift the root of g
  std::vector<u64> tpoly(f, 0);
  tpoly[1] = 1;
  std::vector<u64> root = poly_pow(tpoly, (u64)p, (u64)p);

  auto eval_poly = [&](const std::vector<u64>& coeffs, const std::vector<u64>& x,
                       u64 mod) {
    std::vector<u64> acc(f, 0);
    for (int d = (int)coeffs.size() - 1; d >= 0; --d) {
      acc = poly_mul(acc, x, mod);
      acc[0] = zmod::addm(acc[0], coeffs[d] % mod, mod);
    }
    return acc;
  };

  std::vector<u64> gprime(f, 0);
  for (int d = 1; d <= f; ++d) {
    u64 cd = zmod::mulm((u64)(d % (long long)m), modulus[d], m);
    gprime[d - 1] = cd;
  }

  for (int round = 0; round < 7; ++round) {
    std::vector<u64> gv = eval_poly(modulus, root, m);
    std::vector<u64> gp = eval_poly(gprime, root, m);
    std::vector<u64> corr = poly_mul(gv, poly_inv(gp, m), m);
    for (int i = 0; i < f; ++i) root[i] = zmod::subm(root[i], corr[i], m);
  }
  // sanity: g(root) = 0 mod p^K
  std::vector<u64> check = eval_poly(modulus, root, m);
  for (u64 x : check)
    if (x) throw config_error("Frobenius lift failed to converge");

  frob_pow[1] = root;
  for (int i = 2; i < f; ++i) frob_pow[i] = poly_mul(frob_pow[i - 1], root, m);
}

}  // namespace pijet
