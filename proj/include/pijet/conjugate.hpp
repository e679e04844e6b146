#pragma once

#include "pijet/jet_ring.hpp"

namespace pijet {

// Conjugate operators of a base derivation d on a delta_p jet ring: the unique
// derivations d_0..d_r with d_j phi^s = 0 for j != s and d_j phi^j = p^j phi^j d
// on order-0 elements. Values on jet variables are solved from the triangular
// system in the phi-coordinates; integrality of the solution is asserted, not
// assumed.
struct ConjugateSystem {
  JetRing ring;
  std::vector<JetPoly> dbase;               // d(v_i), order-0 polynomials
  std::vector<std::vector<JetPoly>> value;  // value[j][slot] = d_j(d^s v_i)
};

inline ConjugateSystem build_conjugates(const JetRing& ring,
                                        std::vector<JetPoly> dbase) {
  if (ring->flavor != Flavor::delta_p)
    throw truncation_mismatch("conjugates are defined on delta_p jet rings");
  int r = ring->order;
  long long p = ring->tower.p();
  ConjugateSystem sys;
  sys.ring = ring;
  sys.dbase = std::move(dbase);
  sys.value.assign(r + 1, std::vector<JetPoly>(ring->nslots(), JetPoly(ring)));

  for (size_t vi = 0; vi < ring->vars.size(); ++vi) {
    // phi-coordinates of this variable and phi-iterates of d(v)
    std::vector<JetPoly> phis(r + 1), dphis(r + 1);
    phis[0] = JetPoly::variable(ring, (int)vi, 0);
    dphis[0] = sys.dbase[vi];
    for (int s = 1; s <= r; ++s) {
      phis[s] = phi_jet(phis[s - 1]);
      dphis[s] = phi_jet(dphis[s - 1]);
    }
    for (int j = 0; j <= r; ++j) {
      std::vector<JetPoly> val(r + 1, JetPoly(ring));
      for (int s = 0; s <= r; ++s) {
        JetPoly acc(ring);
        if (s == j) acc = dphis[j].scaled(ring->tower.from_ll(p).pow((u64)j));
        for (int t = 0; t < s; ++t)
          acc = acc - phis[s].partial(ring->slot((int)vi, t)) * val[t];
        // diagonal coefficient of d^s v in phi^s(v) is p^s
        for (int k = 0; k < s; ++k) acc = acc.div_frac(Flavor::delta_p);
        val[s] = acc;
      }
      for (int s = 0; s <= r; ++s) {
        // keep the exact fraction representation: cancelling the p-powers
        // early would burn precision that the defining relations rely on
        if (!val[s].is_integral())
          throw integrality_error("conjugate solve left a denominator at d_" +
                                  std::to_string(j));
        sys.value[j][ring->slot((int)vi, s)] = val[s];
      }
    }
  }
  return sys;
}

inline JetPoly conjugate_apply(const ConjugateSystem& sys, int j,
                               const JetPoly& x) {
  JetPoly acc(sys.ring);
  for (int s = 0; s < sys.ring->nslots(); ++s) {
    if (sys.value[j][s].is_zero()) continue;
    acc = acc + x.partial(s) * sys.value[j][s];
  }
  return acc;
}

// order-1 closed forms: d_1 v = 0, d_1 dv = phi(d v), d_0 v = d v,
// d_0 dv = -v^{p-1} d v
inline ConjugateSystem build_conjugates_order1(const JetRing& ring,
                                               std::vector<JetPoly> dbase) {
  if (ring->order != 1) throw order_overflow("closed forms are for order 1");
  long long p = ring->tower.p();
  ConjugateSystem sys;
  sys.ring = ring;
  sys.dbase = std::move(dbase);
  sys.value.assign(2, std::vector<JetPoly>(ring->nslots(), JetPoly(ring)));
  for (size_t vi = 0; vi < ring->vars.size(); ++vi) {
    JetPoly v = JetPoly::variable(ring, (int)vi, 0);
    sys.value[0][ring->slot((int)vi, 0)] = sys.dbase[vi];
    sys.value[0][ring->slot((int)vi, 1)] =
        -(v.pow((unsigned)(p - 1)) * sys.dbase[vi]);
    sys.value[1][ring->slot((int)vi, 1)] = phi_jet(sys.dbase[vi]);
  }
  return sys;
}

}  // namespace pijet
