#pragma once

#include "pijet/jet_ring.hpp"

namespace pijet {

// Images of delta_pi^n f inside the delta_p-jet coordinates of one variable,
// together with the residual polynomials F_n of the decomposition
//   delta_pi^n f = (p/pi)^n delta_p^n f + pi^{max(e-n,0)} F_n(delta_p f, ..., delta_p^{n-1} f).
struct ConversionSystem {
  Tower tower;
  int max_order = 0;
  JetRing ring;           // single variable "f", flavor delta_p, free
  std::vector<JetPoly> H;  // H[n] = image of delta_pi^n f, n = 1..max_order
  std::vector<JetPoly> F;  // F[n], n = 1..max_order (F[1] = 0)
};

inline ConversionSystem build_conversion(const Tower& tower, int max_order) {
  ConversionSystem cs;
  cs.tower = tower;
  cs.max_order = max_order;
  cs.ring = make_jet_ring(tower, {"f"}, max_order, Flavor::delta_p);

  cs.H.resize(max_order + 1, JetPoly(cs.ring));
  cs.F.resize(max_order + 1, JetPoly(cs.ring));

  JetPoly cur = JetPoly::variable(cs.ring, 0, 0);
  RElem p_over_pi = tower.p_over_pi();
  long long p = tower.p();
  int e = tower.e();

  for (int n = 1; n <= max_order; ++n) {
    cur = prolong_mixed(cur, Flavor::delta_pi);
    cs.H[n] = cur;

    JetPoly lead = JetPoly::variable(cs.ring, 0, n).scaled(p_over_pi.pow((u64)n));
    JetPoly resid = cur - lead;
    int shift = std::max(e - n, 0);
    for (int i = 0; i < shift; ++i) resid = resid.div_exact(Flavor::delta_pi);
    cs.F[n] = resid;

    // contract checks on the decomposition
    Mono zero_m(cs.ring->nslots(), 0);
    if (cs.F[n].t.count(zero_m))
      throw integrality_error("conversion: F_n has a constant term");
    long long degbound = 1;
    for (int i = 0; i < n - 1; ++i) degbound *= p;
    if (cs.F[n].degree() > degbound)
      throw integrality_error("conversion: deg F_n exceeds p^{n-1}");
    for (const auto& [m, c] : cs.F[n].t)
      if (m[cs.ring->slot(0, n)] || m[cs.ring->slot(0, 0)])
        throw integrality_error("conversion: F_n uses a forbidden jet variable");
  }
  return cs;
}

// move a single-variable conversion polynomial into another ring, mapping the
// jet slots of "f" onto prescribed images
inline JetPoly transplant(const JetPoly& h, const JetRing& target,
                          const std::vector<JetPoly>& slot_images) {
  return h.substitute(target, slot_images);
}

// Rewrite a delta_pi-flavored polynomial in delta_p-jet coordinates (the
// inclusion of jet rings; injective). Output flavor delta_p, same tower.
inline JetPoly pi_to_p(const JetPoly& x, const ConversionSystem& cs) {
  const auto& src = *x.ring;
  if (src.flavor != Flavor::delta_pi)
    throw truncation_mismatch("pi_to_p: input must be delta_pi flavored");
  if (src.order > cs.max_order)
    throw order_overflow("pi_to_p: conversion system order too small");
  JetRing target = make_jet_ring(src.tower, src.vars, src.order, Flavor::delta_p,
                                 src.degree_cap);
  // per-variable images of each delta_pi^j v
  std::vector<JetPoly> images(src.nslots(), JetPoly(target));
  for (size_t v = 0; v < src.vars.size(); ++v) {
    std::vector<JetPoly> fslots(cs.ring->nslots(), JetPoly(target));
    for (int j = 0; j <= std::min(src.order, cs.max_order); ++j)
      fslots[cs.ring->slot(0, j)] = JetPoly::variable(target, (int)v, j);
    images[src.slot((int)v, 0)] = JetPoly::variable(target, (int)v, 0);
    for (int j = 1; j <= src.order; ++j)
      images[src.slot((int)v, j)] = transplant(cs.H[j], target, fslots);
  }
  return x.substitute(target, images);
}

// Rewrite a delta_p-flavored polynomial in delta_pi-jet coordinates by the
// triangular back-substitution. Coefficients may pick up pi-denominators;
// they are tracked exactly and never dropped.
inline JetPoly p_to_pi(const JetPoly& x, const ConversionSystem& cs) {
  const auto& src = *x.ring;
  if (src.flavor != Flavor::delta_p)
    throw truncation_mismatch("p_to_pi: input must be delta_p flavored");
  if (src.order > cs.max_order)
    throw order_overflow("p_to_pi: conversion system order too small");
  JetRing target = make_jet_ring(src.tower, src.vars, src.order, Flavor::delta_pi,
                                 src.degree_cap);
  RElem pi_over_p = src.tower.pi_over_p();
  int e = src.tower.e();

  std::vector<JetPoly> images(src.nslots(), JetPoly(target));
  for (size_t v = 0; v < src.vars.size(); ++v) {
    images[src.slot((int)v, 0)] = JetPoly::variable(target, (int)v, 0);
    for (int n = 1; n <= src.order; ++n) {
      // delta_p^n v = (pi/p)^n (delta_pi^n v - pi^{max(e-n,0)} F_n(images...))
      std::vector<JetPoly> fslots(cs.ring->nslots(), JetPoly(target));
      for (int j = 0; j < n; ++j)
        fslots[cs.ring->slot(0, j)] = images[src.slot((int)v, j)];
      fslots[cs.ring->slot(0, n)] = JetPoly(target);  // F_n never uses it
      JetPoly fn = transplant(cs.F[n], target, fslots);
      RElem pi_pow = src.tower.pi().pow((u64)std::max(e - n, 0));
      JetPoly rhs = JetPoly::variable(target, (int)v, n) - fn.scaled(pi_pow);
      images[src.slot((int)v, n)] = rhs.scaled(pi_over_p.pow((u64)n));
    }
  }
  return x.substitute(target, images);
}

}  // namespace pijet
