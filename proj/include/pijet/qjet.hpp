#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "pijet/jet_convert.hpp"

namespace pijet {

// Finite shadow of the local expansion ring R((q))[dq, ..., d^r q]^:
// Laurent-bounded in q, total-degree capped in the jet variables, coefficient
// precision carried by the elements themselves.
struct SeriesTrunc {
  // q_prec of exact_q marks a series with no unknown q-tail (finite
  // constructions); multiplication then cannot shrink the window
  static constexpr int exact_q = 1 << 28;

  int q_min = 0;    // lowest reliable q exponent
  int q_prec = 1;   // exponents < q_prec are reliable (Q)
  int jet_cap = 1;  // total jet degree cap (D)
  int coeff_prec = 1;  // K stamp for reports

  std::string str() const {
    std::ostringstream os;
    os << "(qmin=" << q_min << ",Q=" << q_prec << ",D=" << jet_cap
       << ",K=" << coeff_prec << ")";
    return os.str();
  }
};

struct QKey {
  int n = 0;
  std::vector<std::uint16_t> beta;
  friend bool operator<(const QKey& a, const QKey& b) {
    if (a.n != b.n) return a.n < b.n;
    return a.beta < b.beta;
  }
  int jet_degree() const {
    int d = 0;
    for (auto x : beta) d += x;
    return d;
  }
};

class QJet {
 public:
  Tower tower;
  Flavor flavor = Flavor::delta_p;
  int order = 1;
  SeriesTrunc tr;
  std::map<QKey, RElem> t;

  QJet() = default;
  QJet(Tower tw, Flavor fl, int ord, SeriesTrunc trunc)
      : tower(std::move(tw)), flavor(fl), order(ord), tr(trunc) {}

  bool is_zero() const { return t.empty(); }

  void add_term(QKey k, const RElem& c) {
    if (c.is_zero()) return;
    if (k.n >= tr.q_prec || k.n < tr.q_min) return;
    if (k.jet_degree() > tr.jet_cap) return;
    auto it = t.find(k);
    if (it == t.end()) {
      t.emplace(std::move(k), c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) t.erase(it);
    }
  }

  void add_qterm(int n, const RElem& c) { add_term(QKey{n, std::vector<std::uint16_t>(order, 0)}, c); }

  static void check_compat(const QJet& a, const QJet& b) {
    if (!a.tower.same(b.tower) || a.flavor != b.flavor || a.order != b.order)
      throw truncation_mismatch("QJet: ring mismatch");
  }

  friend QJet operator+(const QJet& a, const QJet& b) {
    check_compat(a, b);
    QJet r(a.tower, a.flavor, a.order,
           SeriesTrunc{std::min(a.tr.q_min, b.tr.q_min),
                       std::min(a.tr.q_prec, b.tr.q_prec),
                       std::min(a.tr.jet_cap, b.tr.jet_cap),
                       std::min(a.tr.coeff_prec, b.tr.coeff_prec)});
    for (const auto& [k, c] : a.t) r.add_term(k, c);
    for (const auto& [k, c] : b.t) r.add_term(k, c);
    return r;
  }
  friend QJet operator-(const QJet& a, const QJet& b) { return a + (-b); }
  QJet operator-() const {
    QJet r = *this;
    for (auto& [k, c] : r.t) c = -c;
    return r;
  }

  // smallest q exponent actually present (large when empty)
  int min_exponent() const {
    return t.empty() ? (1 << 28) : t.begin()->first.n;
  }

  friend QJet operator*(const QJet& a, const QJet& b) {
    check_compat(a, b);
    // reliable q window shrinks by the partner's actual Laurent tail
    long long q_prec;
    if (a.tr.q_prec == SeriesTrunc::exact_q && b.tr.q_prec == SeriesTrunc::exact_q) {
      q_prec = SeriesTrunc::exact_q;
    } else {
      q_prec = std::min<long long>((long long)a.tr.q_prec + b.min_exponent(),
                                   (long long)b.tr.q_prec + a.min_exponent());
      q_prec = std::min<long long>(q_prec, SeriesTrunc::exact_q);
    }
    QJet r(a.tower, a.flavor, a.order,
           SeriesTrunc{a.tr.q_min + b.tr.q_min, (int)q_prec,
                       std::min(a.tr.jet_cap, b.tr.jet_cap),
                       std::min(a.tr.coeff_prec, b.tr.coeff_prec)});
    for (const auto& [ka, ca] : a.t) {
      int da = ka.jet_degree();
      for (const auto& [kb, cb] : b.t) {
        if (ka.n + kb.n >= r.tr.q_prec) continue;
        if (da + kb.jet_degree() > r.tr.jet_cap) continue;
        QKey k;
        k.n = ka.n + kb.n;
        k.beta.resize(a.order);
        for (int i = 0; i < a.order; ++i)
          k.beta[i] = (std::uint16_t)(ka.beta[i] + kb.beta[i]);
        r.add_term(std::move(k), ca * cb);
      }
    }
    return r;
  }

  QJet scaled(const RElem& c) const {
    QJet r(tower, flavor, order, tr);
    for (const auto& [k, cc] : t) r.add_term(k, c * cc);
    return r;
  }

  QJet pow(unsigned e) const {
    QJet r = one_like();
    QJet a = *this;
    while (e) {
      if (e & 1) r = r * a;
      a = a * a;
      e >>= 1;
    }
    return r;
  }

  QJet one_like() const {
    QJet r(tower, flavor, order, tr);
    r.add_qterm(0, tower.one());
    return r;
  }

  QJet with_trunc(const SeriesTrunc& nt) const {
    QJet r(tower, flavor, order, nt);
    for (const auto& [k, c] : t) r.add_term(k, c);
    return r;
  }

  QJet with_order(int new_order) const {
    QJet r(tower, flavor, new_order, tr);
    for (const auto& [k, c] : t) {
      QKey kk;
      kk.n = k.n;
      kk.beta.assign(new_order, 0);
      for (int i = 0; i < std::min(order, new_order); ++i) kk.beta[i] = k.beta[i];
      for (int i = new_order; i < order; ++i)
        if (k.beta[i]) throw order_overflow("with_order: dropping a live jet variable");
      r.add_term(std::move(kk), c);
    }
    return r;
  }

  friend bool eq(const QJet& a, const QJet& b) { return (a - b).is_zero(); }

  // restrict to the jet-free part (all beta = 0)
  QJet jet_free_part() const {
    QJet r(tower, flavor, order, tr);
    for (const auto& [k, c] : t)
      if (k.jet_degree() == 0) r.add_term(k, c);
    return r;
  }

  Val min_valuation() const {
    Val best = Val::infinity();
    for (const auto& [k, c] : t) best = Val::min(best, c.valuation());
    return best;
  }

  bool is_integral() const {
    Val v = min_valuation();
    return v.infinite || v >= Val(0);
  }

  // reduce every coefficient modulo pi^j (drop what vanishes)
  QJet mod_pi_pow(int j) const {
    QJet r(tower, flavor, order, tr);
    Val bound(j, tower.e());
    for (const auto& [k, c] : t) {
      Val v = c.valuation();
      if (!v.infinite && v < bound) r.add_term(k, c);
    }
    return r;
  }

  std::string dump() const {
    // one line per monomial: n beta_1 .. beta_r : digits
    // sorted by (|beta|, n, beta lexicographic)
    std::vector<const std::pair<const QKey, RElem>*> items;
    for (const auto& kv : t) items.push_back(&kv);
    std::sort(items.begin(), items.end(), [](auto* a, auto* b) {
      int da = a->first.jet_degree(), db = b->first.jet_degree();
      if (da != db) return da < db;
      if (a->first.n != b->first.n) return a->first.n < b->first.n;
      return a->first.beta < b->first.beta;
    });
    std::ostringstream os;
    os << "# pijet-series p=" << tower.p() << " K=" << tower.K()
       << " f=" << tower.base->f << " e=" << tower.e()
       << " flavor=" << flavor_name(flavor) << " order=" << order
       << " qmin=" << tr.q_min << " Q=" << tr.q_prec << " D=" << tr.jet_cap
       << "\n";
    for (auto* kv : items) {
      os << kv->first.n;
      for (auto bb : kv->first.beta) os << " " << (int)bb;
      os << " : " << kv->second.digits() << "\n";
    }
    return os.str();
  }
};

// phi on the series ring: Frobenius on coefficients, q -> q^p + w dq,
// d^j q -> (d^j q)^p + w d^{j+1} q, with w the flavor uniformizer.
inline QJet phi_on_series(const QJet& s) {
  long long p = s.tower.p();
  RElem w = s.flavor == Flavor::delta_p ? s.tower.from_ll(p) : s.tower.pi();

  SeriesTrunc tr = s.tr;
  tr.q_min = std::min(tr.q_min * (int)p, tr.q_min);
  SeriesTrunc ex = tr;
  ex.q_prec = SeriesTrunc::exact_q;

  // (q^p + w dq)^n, n of either sign, binomials built as exact fractions so a
  // p-divisible k never blocks the division; exact per kept jet degree
  auto qimage_pow = [&](int n) {
    QJet r(s.tower, s.flavor, s.order, ex);
    int kmax = n >= 0 ? std::min(n, tr.jet_cap) : tr.jet_cap;
    RElem binom = s.tower.one();
    for (int k = 0; k <= kmax; ++k) {
      if (k > 0) binom = binom * s.tower.rational(n - k + 1, k);
      QKey key;
      key.n = (int)p * (n - k);
      key.beta.assign(s.order, 0);
      if (k > 0) key.beta[0] = (std::uint16_t)k;
      r.add_term(std::move(key), binom * w.pow((u64)k));
    }
    return r;
  };

  // jet variable images
  std::vector<QJet> jet_img(s.order);
  for (int j = 0; j < s.order; ++j) {
    QJet img(s.tower, s.flavor, s.order, ex);
    QKey kp;
    kp.n = 0;
    kp.beta.assign(s.order, 0);
    kp.beta[j] = (std::uint16_t)p;
    img.add_term(kp, s.tower.one());
    if (j + 1 < s.order) {
      QKey ks;
      ks.n = 0;
      ks.beta.assign(s.order, 0);
      ks.beta[j + 1] = 1;
      img.add_term(ks, w);
    }
    jet_img[j] = img;  // top slot image is never consulted (overflow throws)
  }

  for (const auto& [k, c] : s.t)
    if (s.order > 0 && k.beta[s.order - 1] > 0)
      throw order_overflow("phi_on_series: would need jet order " +
                           std::to_string(s.order + 1));

  QJet acc(s.tower, s.flavor, s.order, ex);
  for (const auto& [k, c] : s.t) {
    QJet term(s.tower, s.flavor, s.order, ex);
    term.add_qterm(0, c.frobenius());
    term = term * qimage_pow(k.n);
    for (int j = 0; j < s.order; ++j)
      if (k.beta[j]) term = term * jet_img[j].pow(k.beta[j]);
    acc = acc + term;
  }
  if (s.tr.q_prec != SeriesTrunc::exact_q) return acc.with_trunc(tr);
  return acc;
}

namespace detail {

// cache of jet-monomial images under the coordinate changes, keyed by the
// jet exponent vector
struct JetImageTable {
  // image[j] = polynomial in the target jet variables for source d^{j+1} q
  std::vector<std::map<std::vector<std::uint16_t>, RElem>> image;
};

inline std::map<std::vector<std::uint16_t>, RElem> poly_to_beta(
    const JetPoly& h, int order) {
  std::map<std::vector<std::uint16_t>, RElem> out;
  for (const auto& [m, c] : h.t) {
    std::vector<std::uint16_t> beta(order, 0);
    if (m[h.ring->slot(0, 0)])
      throw integrality_error("jet image unexpectedly involves the base variable");
    for (int j = 1; j <= h.ring->order; ++j)
      if (m[h.ring->slot(0, j)]) beta[j - 1] = m[h.ring->slot(0, j)];
    out[beta] = c;
  }
  return out;
}

inline QJet substitute_jets(const QJet& s, Flavor out_flavor,
                            const JetImageTable& tab) {
  QJet r(s.tower, out_flavor, s.order, s.tr);
  for (const auto& [k, c] : s.t) {
    // start from the q-power and coefficient, multiply jet images in
    QJet term(s.tower, out_flavor, s.order, s.tr);
    QKey base;
    base.n = k.n;
    base.beta.assign(s.order, 0);
    term.add_term(base, c);
    for (int j = 0; j < s.order; ++j) {
      if (!k.beta[j]) continue;
      SeriesTrunc ex = s.tr;
      ex.q_prec = SeriesTrunc::exact_q;
      QJet img(s.tower, out_flavor, s.order, ex);
      for (const auto& [beta, cc] : tab.image[j]) {
        QKey kk;
        kk.n = 0;
        kk.beta = beta;
        img.add_term(kk, cc);
      }
      term = term * img.pow(k.beta[j]);
    }
    r = r + term;
  }
  return r;
}

}  // namespace detail

// view a delta_pi series inside the delta_p series ring (injective inclusion)
inline QJet include_pi_into_p(const QJet& s, const ConversionSystem& cs) {
  if (s.flavor != Flavor::delta_pi)
    throw truncation_mismatch("include_pi_into_p: input must be delta_pi");
  if (s.order > cs.max_order)
    throw order_overflow("include_pi_into_p: conversion order too small");
  detail::JetImageTable tab;
  tab.image.resize(s.order);
  for (int j = 1; j <= s.order; ++j)
    tab.image[j - 1] = detail::poly_to_beta(cs.H[j], s.order);
  return detail::substitute_jets(s, Flavor::delta_p, tab);
}

// rewrite a delta_p series in delta_pi coordinates (fraction coefficients)
inline QJet rewrite_p_as_pi(const QJet& s, const ConversionSystem& cs) {
  if (s.flavor != Flavor::delta_p)
    throw truncation_mismatch("rewrite_p_as_pi: input must be delta_p");
  if (s.order > cs.max_order)
    throw order_overflow("rewrite_p_as_pi: conversion order too small");
  // build the triangular images of d_p^n q inside the delta_pi jet polynomial
  // ring, then transcribe them to beta tables
  Tower tw = s.tower;
  auto Rp = make_jet_ring(tw, {"q"}, s.order, Flavor::delta_p);
  detail::JetImageTable tab;
  tab.image.resize(s.order);
  {
    RElem pi_over_p = tw.pi_over_p();
    int e = tw.e();
    std::vector<JetPoly> images(s.order + 1);
    auto Rpi = make_jet_ring(tw, {"q"}, s.order, Flavor::delta_pi);
    images[0] = JetPoly::variable(Rpi, 0, 0);
    for (int n = 1; n <= s.order; ++n) {
      std::vector<JetPoly> fslots(cs.ring->nslots(), JetPoly(Rpi));
      for (int j = 0; j < n; ++j) fslots[cs.ring->slot(0, j)] = images[j];
      JetPoly fn = cs.F[n].substitute(Rpi, fslots);
      RElem pi_pow = tw.pi().pow((u64)std::max(e - n, 0));
      JetPoly rhs = JetPoly::variable(Rpi, 0, n) - fn.scaled(pi_pow);
      images[n] = rhs.scaled(pi_over_p.pow((u64)n));
      tab.image[n - 1] = detail::poly_to_beta(images[n], s.order);
    }
  }
  return detail::substitute_jets(s, Flavor::delta_pi, tab);
}

// coefficient-wise trace down to the trivial tower; delta_p flavor only
inline QJet trace_series(const QJet& s) {
  if (s.flavor != Flavor::delta_p)
    throw truncation_mismatch("trace_series: input must be delta_p flavored");
  QJet r(s.tower.trivial_tower(), Flavor::delta_p, s.order, s.tr);
  for (const auto& [k, c] : s.t) r.add_term(k, c.trace());
  return r;
}

// embed a series over the trivial tower into a ramified tower
inline QJet embed_series(const QJet& s, const Tower& target) {
  QJet r(target, s.flavor, s.order, s.tr);
  for (const auto& [k, c] : s.t) {
    if (c.e() != 1) throw truncation_mismatch("embed_series: source not trivial");
    RElem cc = target.from_base(c.d[0]);
    for (int i = 0; i < c.denom; ++i) cc = cc.div_p_frac();
    r.add_term(k, cc);
  }
  return r;
}

}  // namespace pijet
