#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pijet/base_ring.hpp"

namespace pijet {

struct EisensteinConfig {
  int e = 2;
  // non-leading coefficients b_0..b_{e-1} of the monic Eisenstein polynomial
  // E(x) = x^e + b_{e-1} x^{e-1} + ... + b_0; every b_i divisible by p and
  // v_p(b_0) = 1 exactly.
  std::vector<long long> b;
  bool galois_flag = true;  // recorded, never branched on
  bool cyclotomic = false;
};

// Ramified layer data: R_pi = R_p[x]/(E(x)) with pi the class of x. The
// trivial layer e = 1 uses E(x) = x - p so that pi = p and all code paths
// stay uniform.
class EisCtx {
 public:
  int e = 1;
  bool galois_flag = true;
  bool cyclotomic = false;
  std::vector<BaseElem> b;                    // b_0..b_{e-1}
  std::vector<BaseElem> u;                    // u_i = b_i / p: pi^e = -p u(pi)
  std::vector<std::vector<BaseElem>> redpow;  // pi^{e+j} reduced, j = 0..e-2
  std::vector<BaseElem> u_inv;                // digits of u(pi)^{-1}
  std::vector<BaseElem> trace_pi;             // Tr(pi^j), j = 0..2e-2
  std::shared_ptr<const EisCtx> trivial_layer;  // the e = 1 layer over the same base
};

class RElem;

// Handle for a full coefficient ring: unramified base plus (possibly trivial)
// Eisenstein layer.
struct Tower {
  std::shared_ptr<const UnramCtx> base;
  std::shared_ptr<const EisCtx> eis;

  int e() const { return eis->e; }
  long long p() const { return base->p; }
  int K() const { return base->K; }
  bool trivial() const { return eis->e == 1; }
  Val pi_val() const { return Val(1, eis->e); }

  bool same(const Tower& o) const { return base == o.base && eis == o.eis; }

  static Tower make(const PadicConfig& cfg,
                    const std::optional<EisensteinConfig>& ecfg = std::nullopt,
                    std::vector<long long> unram_modulus = {});
  static Tower make_cyclotomic(const PadicConfig& cfg);

  Tower trivial_tower() const {
    if (trivial()) return *this;
    return Tower{base, eis->trivial_layer};
  }

  RElem zero(int pprec = -1) const;
  RElem one(int pprec = -1) const;
  RElem from_ll(long long v, int pprec = -1) const;
  RElem from_base(const BaseElem& x) const;
  RElem pi(int pprec = -1) const;
  RElem p_over_pi() const;  // exact, full precision
  RElem pi_over_p() const;  // exact fraction, full precision
  RElem random_int(std::mt19937_64& rng) const;
  RElem random_base(std::mt19937_64& rng) const;
  // exact embedding of num/den (den != 0), p-part of den tracked as a fraction
  RElem rational(long long num, long long den) const;
};

// Element of the ramified ring at finite precision, represented as
// (d_0 + d_1 pi + ... + d_{e-1} pi^{e-1}) / pi^denom with BaseElem digits.
// pprec is the absolute pi-adic precision of the numerator (the value is
// known modulo pi^{pprec-denom}); digit i is meaningful modulo
// p^ceil((pprec-i)/e).
class RElem {
 public:
  Tower tw;
  std::vector<BaseElem> d;
  int pprec = 0;
  int denom = 0;

  RElem() = default;
  RElem(Tower t, std::vector<BaseElem> dd, int pp, int den = 0)
      : tw(std::move(t)), d(std::move(dd)), pprec(pp), denom(den) {
    clamp();
  }

  int e() const { return tw.e(); }
  int max_pprec() const { return tw.e() * tw.K(); }

  int digit_prec(int i) const {
    int raw = pprec - i;
    int pr = raw <= 0 ? 1 : (raw + e() - 1) / e();
    return std::max(1, std::min(pr, tw.K()));
  }

  void clamp() {
    if (pprec > max_pprec()) pprec = max_pprec();
    if (pprec < 1)
      throw precision_exhausted("RElem: precision budget exhausted");
    for (int i = 0; i < e(); ++i) {
      int pr = digit_prec(i);
      if (d[i].prec > pr) d[i] = d[i].at_prec(pr);
    }
  }

  bool is_zero() const {
    for (const auto& x : d)
      if (!x.is_zero()) return false;
    return true;
  }

  int eff_prec() const { return pprec - denom; }

  // ---- ring structure ------------------------------------------------------

  friend RElem operator+(const RElem& a, const RElem& b) {
    RElem x = a, y = b;
    align(x, y);
    int pp = std::min(x.pprec, y.pprec);
    std::vector<BaseElem> r(x.e());
    for (int i = 0; i < x.e(); ++i) r[i] = x.d[i] + y.d[i];
    return RElem(x.tw, std::move(r), pp, x.denom).normalized();
  }
  friend RElem operator-(const RElem& a, const RElem& b) {
    RElem x = a, y = b;
    align(x, y);
    int pp = std::min(x.pprec, y.pprec);
    std::vector<BaseElem> r(x.e());
    for (int i = 0; i < x.e(); ++i) r[i] = x.d[i] - y.d[i];
    return RElem(x.tw, std::move(r), pp, x.denom);
  }
  RElem operator-() const {
    std::vector<BaseElem> r(e());
    for (int i = 0; i < e(); ++i) r[i] = -d[i];
    return RElem(tw, std::move(r), pprec, denom);
  }

  friend RElem operator*(const RElem& a, const RElem& b) {
    int ee = a.e();
    // known-mod rule: pprec(xy) = min(pprec(x) + v(y_num), pprec(y) + v(x_num))
    long long va = std::min<long long>(a.num_val_pi(), a.pprec);
    long long vb = std::min<long long>(b.num_val_pi(), b.pprec);
    int pp = (int)std::min<long long>(a.pprec + vb, b.pprec + va);
    pp = std::min(pp, a.max_pprec());
    std::vector<BaseElem> prod(2 * ee - 1, a.tw.base->zero());
    for (int i = 0; i < ee; ++i) {
      if (a.d[i].is_zero()) continue;
      for (int j = 0; j < ee; ++j)
        if (!b.d[j].is_zero()) prod[i + j] = prod[i + j] + a.d[i] * b.d[j];
    }
    std::vector<BaseElem> r(prod.begin(), prod.begin() + ee);
    for (int k = ee; k <= 2 * ee - 2; ++k) {
      if (prod[k].is_zero()) continue;
      const auto& rp = a.tw.eis->redpow[k - ee];
      for (int i = 0; i < ee; ++i) r[i] = r[i] + prod[k] * rp[i];
    }
    return RElem(a.tw, std::move(r), pp, a.denom + b.denom).normalized();
  }

  RElem pow(u64 n) const {
    RElem r = tw.one(pprec);
    RElem a = *this;
    while (n) {
      if (n & 1) r = r * a;
      a = a * a;
      n >>= 1;
    }
    return r;
  }

  // multiply by pi (exact, gains one digit of pi-precision)
  RElem mul_pi() const {
    int ee = e();
    std::vector<BaseElem> r(ee, tw.base->zero());
    for (int i = 0; i + 1 < ee; ++i) r[i + 1] = d[i];
    if (!d[ee - 1].is_zero()) {
      const auto& rp = tw.eis->redpow[0];
      for (int i = 0; i < ee; ++i) r[i] = r[i] + d[ee - 1] * rp[i];
    }
    return RElem(tw, std::move(r), std::min(pprec + 1, max_pprec()), denom);
  }

  RElem mul_pi_pow(int j) const {
    RElem r = *this;
    for (int i = 0; i < j; ++i) r = r.mul_pi();
    return r;
  }

  // ---- divisions -----------------------------------------------------------

  bool divisible_by_pi() const { return d[0].divisible_by_p(); }

  // exact division of the numerator by pi; one digit of pi-precision is spent
  RElem div_pi_exact() const {
    if (pprec <= 1)
      throw precision_exhausted("RElem: division by pi with no budget left");
    if (!divisible_by_pi())
      throw divisibility_error("RElem: not divisible by pi at working precision");
    int ee = e();
    std::vector<BaseElem> rest_d(ee, tw.base->zero());
    for (int i = 0; i + 1 < ee; ++i) rest_d[i] = d[i + 1];
    RElem out(tw, std::move(rest_d), pprec - 1, 0);
    if (pprec > ee || ee == 1) {
      // d_0/pi = -(d_0/p) u^{-1} pi^{e-1}; below pi^{e-1} of the output
      // precision this correction carries no information and is dropped
      RElem shift = (-tw.from_base(d[0].div_p())) * uinv_elem();
      out = out + shift.mul_pi_pow(ee - 1);
    }
    out.pprec = std::min(out.pprec, pprec - 1);
    out.denom = denom;
    out.clamp();
    return out;
  }

  RElem div_p_exact() const {
    std::vector<BaseElem> r(e());
    for (int i = 0; i < e(); ++i) r[i] = d[i].div_p();
    return RElem(tw, std::move(r), pprec - e(), denom);
  }

  // fraction-field divisions: exact on the representation; the result is kept
  // in canonical form (numerator not divisible by pi when denom > 0)
  RElem div_pi_frac() const { return RElem(tw, d, pprec, denom + 1).normalized(); }
  RElem div_p_frac() const {
    RElem r = *this * (-u_elem());  // 1/p = -u / pi^e
    r.denom += e();
    return r.normalized();
  }
  RElem div_pi_frac_pow(int j) const {
    RElem r = *this;
    r.denom += j;
    return r.normalized();
  }

  // cancel pi-powers shared between numerator and denominator
  RElem normalized() const {
    RElem r = *this;
    while (r.denom > 0 && r.divisible_by_pi() && r.pprec > 1) {
      r = r.div_pi_exact();
      r.denom -= 1;
    }
    return r;
  }

  bool is_integral() const {
    Val v = valuation();
    return v.infinite || v >= Val(0);
  }

  // ---- structure maps ------------------------------------------------------

  RElem frobenius() const {
    std::vector<BaseElem> r(e());
    for (int i = 0; i < e(); ++i) r[i] = d[i].frobenius();
    return RElem(tw, std::move(r), pprec, denom);
  }

  // delta_pi x = (phi(x) - x^p) / pi on integral elements
  RElem delta_pi() const {
    if (denom != 0)
      throw divisibility_error("RElem: delta_pi needs an integral element");
    RElem num = frobenius() - pow((u64)tw.p());
    return num.div_pi_exact();
  }

  // delta_p x = (phi(x) - x^p) / p; defined on the unramified part
  RElem delta_p() const {
    if (denom != 0)
      throw divisibility_error("RElem: delta_p needs an integral element");
    RElem num = frobenius() - pow((u64)tw.p());
    for (const auto& x : num.d)
      if (!x.divisible_by_p())
        throw divisibility_error("RElem: Fermat quotient not divisible by p");
    return num.div_p_exact();
  }

  RElem inverse() const {
    RElem a = normalized();
    int shifts = 0;
    while (a.divisible_by_pi() && !a.is_zero() && a.pprec > 1) {
      a = a.div_pi_exact();
      ++shifts;
    }
    if (a.divisible_by_pi())
      throw divisibility_error("RElem: inverse of non-unit");
    RElem anum(a.tw, a.d, a.max_pprec(), 0);
    RElem x = a.tw.from_base(a.d[0].inverse());
    RElem two = a.tw.from_ll(2);
    int rounds = 2;
    while ((1 << rounds) < a.max_pprec() + 2) ++rounds;
    for (int i = 0; i <= rounds; ++i) x = x * (two - anum * x);
    x.pprec = a.pprec;
    x.denom += shifts;
    x.clamp();
    return x.mul_pi_pow(a.denom);
  }

  // ---- valuation & comparison ----------------------------------------------

  // pi-adic valuation of the numerator in integer pi-units; huge when zero
  long long num_val_pi() const {
    long long best = -1;
    for (int i = 0; i < e(); ++i) {
      Val dv = d[i].valuation();
      if (dv.infinite) continue;
      long long cand = dv.num * e() + i;
      if (best < 0 || cand < best) best = cand;
    }
    return best < 0 ? (long long)1 << 30 : best;
  }

  Val valuation() const {
    long long best = num_val_pi();
    if (best >= (long long)1 << 30) return Val::infinity();
    return Val(best - denom, e());
  }

  friend void align(RElem& a, RElem& b) {
    if (!a.tw.same(b.tw)) throw truncation_mismatch("RElem: tower mismatch");
    while (a.denom < b.denom) {
      a = a.mul_pi();
      a.denom += 1;
    }
    while (b.denom < a.denom) {
      b = b.mul_pi();
      b.denom += 1;
    }
  }

  friend bool eq(const RElem& a, const RElem& b) { return (a - b).is_zero(); }

  RElem uinv_elem() const { return RElem(tw, tw.eis->u_inv, max_pprec(), 0); }
  RElem u_elem() const {
    std::vector<BaseElem> uu = tw.eis->u;
    return RElem(tw, std::move(uu), max_pprec(), 0);
  }

  // ---- trace ---------------------------------------------------------------

  // R_p-linear trace down to the unramified base, returned over the trivial
  // tower (p-power denominators survive there).
  RElem trace() const {
    Tower triv = tw.trivial_tower();
    int ee = e();
    int m = (denom + ee - 1) / ee;
    RElem w = *this;
    w.denom = 0;
    w = w.mul_pi_pow(ee * m - denom);
    if (m > 0) w = w * (-uinv_elem()).pow((u64)m);
    BaseElem acc = tw.base->zero(tw.K());
    for (int i = 0; i < ee; ++i) acc = acc + w.d[i] * tw.eis->trace_pi[i];
    int bp = std::max(1, std::min(acc.prec, w.digit_prec(ee - 1)));
    std::vector<BaseElem> dd{acc.at_prec(bp)};
    return RElem(triv, std::move(dd), bp, m).normalized();
  }

  std::string digits() const {
    std::string s;
    for (int i = 0; i < e(); ++i) {
      if (i) s += "|";
      s += d[i].digits();
    }
    if (denom) s += "/pi^" + std::to_string(denom);
    return s;
  }
};

// ---- Tower construction ------------------------------------------------------

namespace detail {

inline std::vector<long long> cyclotomic_eisenstein(long long p) {
  // sum_{j=0}^{p-1} (1-x)^j, the minimal polynomial of 1 - zeta_p
  std::vector<long long> coef(p, 0);
  std::vector<long long> pw{1};
  for (long long j = 0; j < p; ++j) {
    for (size_t k = 0; k < pw.size(); ++k) coef[k] += pw[k];
    std::vector<long long> nxt(pw.size() + 1, 0);
    for (size_t k = 0; k < pw.size(); ++k) {
      nxt[k] += pw[k];
      nxt[k + 1] -= pw[k];
    }
    pw = std::move(nxt);
  }
  coef.pop_back();  // drop the leading 1
  return coef;      // b_0..b_{e-1}, e = p-1
}

inline std::shared_ptr<EisCtx> make_eis_layer(
    const std::shared_ptr<const UnramCtx>& base, int e,
    const std::vector<long long>& b, bool galois_flag, bool cyclotomic) {
  auto ec = std::make_shared<EisCtx>();
  ec->e = e;
  ec->galois_flag = galois_flag;
  ec->cyclotomic = cyclotomic;
  for (int i = 0; i < e; ++i) {
    ec->b.push_back(base->from_ll(b[i]));
    ec->u.push_back(base->from_ll(b[i] / base->p));
  }

  std::vector<BaseElem> row(e, base->zero());
  for (int i = 0; i < e; ++i) row[i] = -ec->b[i];
  ec->redpow.push_back(row);
  for (int j = 1; j <= e - 2; ++j) {
    std::vector<BaseElem> nxt(e, base->zero());
    for (int i = 0; i + 1 < e; ++i) nxt[i + 1] = row[i];
    if (!row[e - 1].is_zero())
      for (int i = 0; i < e; ++i) nxt[i] = nxt[i] + row[e - 1] * ec->redpow[0][i];
    ec->redpow.push_back(nxt);
    row = ec->redpow.back();
  }

  int tmax = std::max(0, 2 * e - 2);
  ec->trace_pi.assign(tmax + 1, base->zero());
  ec->trace_pi[0] = base->from_ll(e);
  for (int k = 1; k <= tmax; ++k) {
    BaseElem s = base->zero();
    for (int i = 1; i <= std::min(k - 1, e); ++i)
      s = s + ec->b[e - i] * ec->trace_pi[k - i];
    if (k <= e) s = s + base->from_ll(k) * ec->b[e - k];
    if (k > e) s = s + ec->b[0] * ec->trace_pi[k - e];
    ec->trace_pi[k] = -s;
  }

  // u(pi)^{-1} by Newton iteration over the layer itself
  {
    Tower t{base, ec};
    RElem u(t, ec->u, e * base->K, 0);
    RElem x = t.from_base(ec->u[0].inverse());
    RElem two = t.from_ll(2);
    int rounds = 2;
    while ((1 << rounds) < e * base->K + 2) ++rounds;
    for (int i = 0; i <= rounds; ++i) x = x * (two - u * x);
    ec->u_inv = x.d;
  }
  return ec;
}

}  // namespace detail

inline Tower Tower::make(const PadicConfig& cfg,
                         const std::optional<EisensteinConfig>& ecfg,
                         std::vector<long long> unram_modulus) {
  Tower t;
  t.base = UnramCtx::make(cfg, std::move(unram_modulus));

  auto trivial = detail::make_eis_layer(t.base, 1, {-cfg.p}, true, false);
  if (!ecfg) {
    t.eis = trivial;
    return t;
  }
  if (ecfg->e < 2) throw config_error("Eisenstein degree e must be >= 2");
  if ((int)ecfg->b.size() != ecfg->e)
    throw config_error("Eisenstein coefficient list must have length e");
  for (long long bi : ecfg->b)
    if (bi % cfg.p != 0)
      throw config_error("Eisenstein coefficients must be divisible by p");
  if ((ecfg->b[0] / cfg.p) % cfg.p == 0)
    throw config_error("Eisenstein constant term must have v_p exactly 1");
  auto ec = detail::make_eis_layer(t.base, ecfg->e, ecfg->b, ecfg->galois_flag,
                                   ecfg->cyclotomic);
  ec->trivial_layer = trivial;
  t.eis = ec;
  return t;
}

inline Tower Tower::make_cyclotomic(const PadicConfig& cfg) {
  EisensteinConfig ec;
  ec.e = (int)cfg.p - 1;
  ec.b = detail::cyclotomic_eisenstein(cfg.p);
  ec.cyclotomic = true;
  ec.galois_flag = true;
  return make(cfg, ec);
}

inline RElem Tower::zero(int pprec) const {
  if (pprec < 0) pprec = e() * K();
  return RElem(*this, std::vector<BaseElem>(e(), base->zero()), pprec);
}
inline RElem Tower::one(int pprec) const { return from_ll(1, pprec); }
inline RElem Tower::from_ll(long long v, int pprec) const {
  if (pprec < 0) pprec = e() * K();
  std::vector<BaseElem> dd(e(), base->zero());
  dd[0] = base->from_ll(v);
  return RElem(*this, std::move(dd), pprec);
}
inline RElem Tower::from_base(const BaseElem& x) const {
  std::vector<BaseElem> dd(e(), base->zero());
  dd[0] = x;
  int pp = std::min(e() * x.prec, e() * K());
  return RElem(*this, std::move(dd), pp);
}
inline RElem Tower::pi(int pprec) const {
  if (pprec < 0) pprec = e() * K();
  if (e() == 1) return from_ll(p(), pprec);
  std::vector<BaseElem> dd(e(), base->zero());
  dd[1] = base->one();
  return RElem(*this, std::move(dd), pprec);
}
inline RElem Tower::p_over_pi() const {
  RElem ui(*this, eis->u_inv, e() * K(), 0);
  return (-ui).mul_pi_pow(e() - 1);  // p/pi = -pi^{e-1} u^{-1}
}
inline RElem Tower::pi_over_p() const {
  std::vector<BaseElem> uu = eis->u;
  RElem u(*this, std::move(uu), e() * K(), 0);
  RElem r = (-u).mul_pi();  // pi/p = -u pi / pi^e
  r.denom += e();
  return r;
}
inline RElem Tower::random_int(std::mt19937_64& rng) const {
  std::vector<BaseElem> dd(e());
  for (int i = 0; i < e(); ++i) dd[i] = base->random(rng);
  return RElem(*this, std::move(dd), e() * K());
}
inline RElem Tower::random_base(std::mt19937_64& rng) const {
  return from_base(base->random(rng));
}

inline RElem Tower::rational(long long num, long long den) const {
  if (den == 0) throw config_error("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  int v = 0;
  while (den % p() == 0) {
    den /= p();
    ++v;
  }
  RElem r = from_ll(num) * from_ll(den).inverse();
  for (int i = 0; i < v; ++i) r = r.div_p_frac();
  return r;
}

// det(Tr(pi^{i+j}))_{0<=i,j<e} by minor expansion (e stays small here).
inline BaseElem gram_determinant(const Tower& t) {
  int e = t.e();
  if (e > 12) throw config_error("gram determinant: e too large");
  std::vector<std::vector<BaseElem>> m(e, std::vector<BaseElem>(e, t.base->zero()));
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < e; ++j) m[i][j] = t.eis->trace_pi[i + j];

  std::function<BaseElem(int, const std::vector<int>&)> det =
      [&](int row, const std::vector<int>& cs) {
        if (cs.size() == 1) return m[row][cs[0]];
        BaseElem acc = t.base->zero();
        for (size_t k = 0; k < cs.size(); ++k) {
          if (m[row][cs[k]].is_zero()) continue;
          std::vector<int> rest;
          for (size_t l = 0; l < cs.size(); ++l)
            if (l != k) rest.push_back(cs[l]);
          BaseElem sub = m[row][cs[k]] * det(row + 1, rest);
          acc = (k % 2 == 0) ? acc + sub : acc - sub;
        }
        return acc;
      };
  std::vector<int> cols(e);
  for (int j = 0; j < e; ++j) cols[j] = j;
  BaseElem result = det(0, cols);
  if (result.is_zero())
    throw precision_exhausted("gram determinant vanishes at working precision");
  return result;
}

}  // namespace pijet
