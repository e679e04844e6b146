#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pijet/relem.hpp"

namespace pijet {

enum class Flavor { delta_p, delta_pi };

inline const char* flavor_name(Flavor f) {
  return f == Flavor::delta_p ? "delta_p" : "delta_pi";
}

struct order_overflow : std::runtime_error {
  explicit order_overflow(const std::string& m) : std::runtime_error(m) {}
};

// Free jet polynomial ring Base[v, dv, ..., d^r v] over a coefficient tower.
// flavor fixes the uniformizer in the jet shift phi(d^j v) = (d^j v)^p + w d^{j+1} v.
struct JetRingSpec {
  Tower tower;
  std::vector<std::string> vars;
  int order = 0;
  Flavor flavor = Flavor::delta_p;
  int degree_cap = -1;  // total-degree cap for capped rings; < 0 means free

  int nslots() const { return (int)vars.size() * (order + 1); }
  int slot(int var, int jet) const { return var * (order + 1) + jet; }
  bool compatible(const JetRingSpec& o) const {
    return tower.same(o.tower) && vars == o.vars && order == o.order &&
           flavor == o.flavor && degree_cap == o.degree_cap;
  }
  std::string slot_name(int s) const {
    int var = s / (order + 1), jet = s % (order + 1);
    if (jet == 0) return vars[var];
    return "d" + (jet > 1 ? "^" + std::to_string(jet) : "") + "{" + vars[var] + "}";
  }
};

using JetRing = std::shared_ptr<const JetRingSpec>;

inline JetRing make_jet_ring(Tower tower, std::vector<std::string> vars, int order,
                             Flavor flavor, int degree_cap = -1) {
  auto r = std::make_shared<JetRingSpec>();
  r->tower = std::move(tower);
  r->vars = std::move(vars);
  r->order = order;
  r->flavor = flavor;
  r->degree_cap = degree_cap;
  return r;
}

using Mono = std::vector<std::uint16_t>;

inline int mono_degree(const Mono& m) {
  int d = 0;
  for (auto x : m) d += x;
  return d;
}

class JetPoly {
 public:
  JetRing ring;
  std::map<Mono, RElem> t;

  JetPoly() = default;
  explicit JetPoly(JetRing r) : ring(std::move(r)) {}

  static JetPoly zero(const JetRing& r) { return JetPoly(r); }
  static JetPoly constant(const JetRing& r, const RElem& c) {
    JetPoly p(r);
    p.add_term(Mono(r->nslots(), 0), c);
    return p;
  }
  static JetPoly one(const JetRing& r) { return constant(r, r->tower.one()); }
  static JetPoly variable(const JetRing& r, int var, int jet) {
    if (jet > r->order) throw order_overflow("jet order beyond ring order");
    JetPoly p(r);
    Mono m(r->nslots(), 0);
    m[r->slot(var, jet)] = 1;
    p.add_term(m, r->tower.one());
    return p;
  }

  bool is_zero() const { return t.empty(); }
  int degree() const {
    int d = -1;
    for (const auto& [m, c] : t) d = std::max(d, mono_degree(m));
    return d;
  }

  void add_term(const Mono& m, const RElem& c) {
    if (c.is_zero()) return;
    if (ring->degree_cap >= 0 && mono_degree(m) > ring->degree_cap) return;
    auto it = t.find(m);
    if (it == t.end()) {
      t.emplace(m, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) t.erase(it);
    }
  }

  friend JetPoly operator+(const JetPoly& a, const JetPoly& b) {
    check_compat(a, b);
    JetPoly r = a;
    for (const auto& [m, c] : b.t) r.add_term(m, c);
    return r;
  }
  friend JetPoly operator-(const JetPoly& a, const JetPoly& b) {
    check_compat(a, b);
    JetPoly r = a;
    for (const auto& [m, c] : b.t) r.add_term(m, -c);
    return r;
  }
  JetPoly operator-() const {
    JetPoly r(ring);
    for (const auto& [m, c] : t) r.t.emplace(m, -c);
    return r;
  }
  friend JetPoly operator*(const JetPoly& a, const JetPoly& b) {
    check_compat(a, b);
    JetPoly r(a.ring);
    int cap = a.ring->degree_cap;
    for (const auto& [ma, ca] : a.t) {
      int da = mono_degree(ma);
      for (const auto& [mb, cb] : b.t) {
        if (cap >= 0 && da + mono_degree(mb) > cap) continue;
        Mono m(ma.size());
        for (size_t i = 0; i < ma.size(); ++i)
          m[i] = (std::uint16_t)(ma[i] + mb[i]);
        r.add_term(m, ca * cb);
      }
    }
    return r;
  }

  JetPoly scaled(const RElem& c) const {
    JetPoly r(ring);
    for (const auto& [m, cc] : t) r.add_term(m, c * cc);
    return r;
  }

  JetPoly pow(unsigned n) const {
    JetPoly r = one(ring);
    JetPoly a = *this;
    while (n) {
      if (n & 1) r = r * a;
      a = a * a;
      n >>= 1;
    }
    return r;
  }

  friend bool eq(const JetPoly& a, const JetPoly& b) { return (a - b).is_zero(); }

  Val min_valuation() const {
    Val best = Val::infinity();
    for (const auto& [m, c] : t) best = Val::min(best, c.valuation());
    return best;
  }

  bool is_integral() const {
    Val v = min_valuation();
    return v.infinite || v >= Val(0);
  }

  // exact coefficient-wise division by the uniformizer of the given kind
  JetPoly div_exact(Flavor kind) const {
    JetPoly r(ring);
    for (const auto& [m, c] : t) {
      RElem q = kind == Flavor::delta_p ? c.div_p_exact() : c.div_pi_exact();
      if (!q.is_zero()) r.t.emplace(m, q);
    }
    return r;
  }
  JetPoly div_frac(Flavor kind) const {
    JetPoly r(ring);
    for (const auto& [m, c] : t)
      r.add_term(m, kind == Flavor::delta_p ? c.div_p_frac() : c.div_pi_frac());
    return r;
  }

  JetPoly map_coeffs(const std::function<RElem(const RElem&)>& f) const {
    JetPoly r(ring);
    for (const auto& [m, c] : t) r.add_term(m, f(c));
    return r;
  }

  // formal partial derivative with respect to a slot
  JetPoly partial(int slot) const {
    JetPoly r(ring);
    for (const auto& [m, c] : t) {
      if (!m[slot]) continue;
      Mono mm = m;
      mm[slot] -= 1;
      r.add_term(mm, ring->tower.from_ll(m[slot]) * c);
    }
    return r;
  }

  // substitute each slot by a polynomial of the target ring
  JetPoly substitute(const JetRing& target,
                     const std::vector<JetPoly>& images) const {
    JetPoly acc(target);
    for (const auto& [m, c] : t) {
      JetPoly term = JetPoly::constant(target, c);
      for (size_t s = 0; s < m.size(); ++s)
        if (m[s]) term = term * images[s].pow(m[s]);
      acc = acc + term;
    }
    return acc;
  }

  RElem eval(const std::vector<RElem>& values) const {
    RElem acc = ring->tower.zero();
    for (const auto& [m, c] : t) {
      RElem term = c;
      for (size_t s = 0; s < m.size(); ++s)
        if (m[s]) term = term * values[s].pow(m[s]);
      acc = acc + term;
    }
    return acc;
  }

  std::string str() const {
    if (t.empty()) return "0";
    // canonical order: total degree, then slot-lexicographic exponents
    std::vector<std::pair<Mono, const RElem*>> items;
    for (const auto& [m, c] : t) items.push_back({m, &c});
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
      int da = mono_degree(a.first), db = mono_degree(b.first);
      if (da != db) return da < db;
      return a.first < b.first;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : items) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c->digits() << ")";
      for (size_t s = 0; s < m.size(); ++s) {
        if (!m[s]) continue;
        os << "*" << ring->slot_name((int)s);
        if (m[s] > 1) os << "^" << (int)m[s];
      }
    }
    return os.str();
  }

 private:
  static void check_compat(const JetPoly& a, const JetPoly& b) {
    if (a.ring != b.ring && !a.ring->compatible(*b.ring))
      throw truncation_mismatch("JetPoly: ring mismatch");
  }
};

// re-key a polynomial into a ring with the same variables and a higher order
inline JetPoly lift_to(const JetPoly& p, const JetRing& target) {
  JetPoly r(target);
  for (const auto& [m, c] : p.t) {
    Mono mm(target->nslots(), 0);
    for (size_t v = 0; v < p.ring->vars.size(); ++v)
      for (int j = 0; j <= p.ring->order; ++j) {
        auto x = m[p.ring->slot((int)v, j)];
        if (!x) continue;
        if (j > target->order) throw order_overflow("lift_to: order shrank");
        mm[target->slot((int)v, j)] = x;
      }
    r.add_term(mm, c);
  }
  return r;
}

// The jet-ring endomorphism phi: Frobenius on coefficients,
// d^j v -> (d^j v)^p + w d^{j+1} v with w the flavor uniformizer.
inline JetPoly phi_jet(const JetPoly& p) {
  const auto& R = *p.ring;
  long long pr = R.tower.p();
  RElem w = R.flavor == Flavor::delta_p ? R.tower.from_ll(pr) : R.tower.pi();
  std::vector<JetPoly> images(R.nslots());
  for (size_t v = 0; v < R.vars.size(); ++v)
    for (int j = 0; j <= R.order; ++j) {
      int s = R.slot((int)v, j);
      JetPoly img = JetPoly::variable(p.ring, (int)v, j).pow((unsigned)pr);
      if (j < R.order)
        img = img + JetPoly::variable(p.ring, (int)v, j + 1).scaled(w);
      images[s] = img;
    }
  // detect genuine use of the top order before substituting
  for (const auto& [m, c] : p.t)
    for (size_t v = 0; v < R.vars.size(); ++v)
      if (m[R.slot((int)v, R.order)])
        throw order_overflow("phi_jet: would need jet order " +
                             std::to_string(R.order + 1));
  JetPoly out(p.ring);
  for (const auto& [m, c] : p.t) {
    JetPoly term = JetPoly::constant(p.ring, c.frobenius());
    for (size_t s = 0; s < m.size(); ++s)
      if (m[s]) term = term * images[s].pow(m[s]);
    out = out + term;
  }
  return out;
}

// delta of the ring's flavor, extended from the coefficients to jet variables
// by the sum/product axioms (the pairwise fold telescopes to this closed form).
inline JetPoly prolong(const JetPoly& p) {
  const auto& R = *p.ring;
  JetPoly num = phi_jet(p) - p.pow((unsigned)R.tower.p());
  return num.div_exact(R.flavor);
}

// Mixed prolongation: apply a derivation with uniformizer `deriv` to a
// polynomial whose jet variables shift with the ring's own flavor. Used to
// push delta_pi through delta_p-jet coordinates.
inline JetPoly prolong_mixed(const JetPoly& p, Flavor deriv) {
  const auto& R = *p.ring;
  JetPoly num = phi_jet(p) - p.pow((unsigned)R.tower.p());
  return num.div_exact(deriv);
}

// phi_hat(x) = x^p + w prolong(x); coincides with phi_jet as a ring identity
inline JetPoly phi_hat(const JetPoly& p) {
  const auto& R = *p.ring;
  long long pr = R.tower.p();
  RElem w = R.flavor == Flavor::delta_p ? R.tower.from_ll(pr) : R.tower.pi();
  return p.pow((unsigned)pr) + prolong(p).scaled(w);
}

// C_w(X, Y) = (X^p + Y^p - (X+Y)^p) / w
inline JetPoly c_poly(const JetPoly& x, const JetPoly& y) {
  unsigned p = (unsigned)x.ring->tower.p();
  JetPoly num = x.pow(p) + y.pow(p) - (x + y).pow(p);
  return num.div_exact(x.ring->flavor);
}

inline JetPoly random_jet_poly(const JetRing& r, std::mt19937_64& rng, int terms,
                               int max_deg_per_slot = 2, int max_jet_order = -1) {
  if (max_jet_order < 0) max_jet_order = r->order;
  JetPoly p(r);
  for (int i = 0; i < terms; ++i) {
    Mono m(r->nslots(), 0);
    for (int s = 0; s < r->nslots(); ++s) {
      if (s % (r->order + 1) > max_jet_order) continue;
      m[s] = rng() % (max_deg_per_slot + 1);
    }
    p.add_term(m, r->tower.random_int(rng));
  }
  return p;
}

}  // namespace pijet
