#pragma once

#include "pijet/qjet.hpp"

namespace pijet {

// Verdict of the membership test against the delta_pi jet ring, certified only
// at the given truncation. Two normalizations are reported:
//   p_steps_to_image: least nu >= 0 with p^nu s integral in delta_pi coordinates
//   defect:           least nu >= 0 with p^nu s within pi/p of the image,
//                     i.e. 0 iff (p/pi) s rewrites integrally -- the
//                     normalization the overconvergence theorems achieve
struct OverconvReport {
  Val min_val = Val::infinity();
  long long p_steps_to_image = 0;
  long long defect = 0;
  QJet witness;
  SeriesTrunc stamp;

  std::string str() const {
    std::ostringstream os;
    os << "min_val=" << min_val.str() << " p_steps=" << p_steps_to_image
       << " defect=" << defect << " at " << stamp.str();
    return os.str();
  }
};

inline OverconvReport overconvergence_defect(const QJet& s,
                                             const ConversionSystem& cs) {
  OverconvReport rep;
  rep.witness = rewrite_p_as_pi(s, cs);
  rep.stamp = s.tr;
  rep.min_val = rep.witness.min_valuation();
  if (!rep.min_val.infinite) {
    Val neg = Val(0) - rep.min_val;
    rep.p_steps_to_image = std::max(0LL, neg.ceil());
    Val slack = Val(1) - s.tower.pi_val();  // v(p/pi)
    rep.defect = std::max(0LL, (neg - slack).ceil());
  }
  return rep;
}

// scale by p/pi (exact): the canonical normalization of the main theorems
inline QJet scale_p_over_pi(const QJet& s) {
  return s.scaled(s.tower.p_over_pi());
}

struct RadiusEstimate {
  std::vector<std::pair<int, Val>> points;  // (jet degree, min coefficient val)
  std::vector<std::pair<int, Val>> hull;    // lower convex hull vertices
  Val final_slope = Val::infinity();        // slope of the last hull segment
  Val intercept = Val(0);                   // best C' for v >= C d - C'

  std::string str() const {
    std::ostringstream os;
    os << "slope=" << final_slope.str() << " intercept=" << intercept.str()
       << " hull=";
    for (auto& [d, m] : hull) os << "(" << d << "," << m.str() << ")";
    return os.str();
  }
};

inline Val segment_slope(const std::pair<int, Val>& a,
                         const std::pair<int, Val>& b) {
  Val dm = b.second - a.second;
  return Val(dm.num, dm.den * (b.first - a.first));
}

// Per-jet-degree valuation profile with its lower convex hull. The final
// segment slope is the truncation-level estimate of the radius exponent.
inline RadiusEstimate radius_estimate(const QJet& s) {
  RadiusEstimate est;
  std::map<int, Val> prof;
  for (const auto& [k, c] : s.t) {
    int d = k.jet_degree();
    Val v = c.valuation();
    if (v.infinite) continue;
    auto it = prof.find(d);
    if (it == prof.end())
      prof.emplace(d, v);
    else
      it->second = Val::min(it->second, v);
  }
  for (auto& [d, m] : prof) est.points.push_back({d, m});
  if (est.points.size() < 2) {
    est.hull = est.points;
    return est;
  }
  // monotone chain lower hull over increasing degree
  for (auto& pt : est.points) {
    while (est.hull.size() >= 2) {
      auto& a = est.hull[est.hull.size() - 2];
      auto& b = est.hull[est.hull.size() - 1];
      if (segment_slope(a, b) < segment_slope(b, pt)) break;
      est.hull.pop_back();
    }
    est.hull.push_back(pt);
  }
  if (est.hull.size() >= 2)
    est.final_slope =
        segment_slope(est.hull[est.hull.size() - 2], est.hull.back());
  // achieved intercept for the estimated slope
  if (!est.final_slope.infinite) {
    Val c0 = Val(0);
    bool first = true;
    for (auto& [d, m] : est.points) {
      Val cand = Val(d * est.final_slope.num, est.final_slope.den) - m;
      if (first || c0 < cand) c0 = cand;
      first = false;
    }
    est.intercept = c0;
  }
  return est;
}

struct CaffReport {
  bool pass = true;
  Val worst_margin = Val::infinity();
  QKey worst_key;
  SeriesTrunc stamp;
};

// coefficientwise lower bound v(a) >= (1/e)(|beta|/p^{r-1} - 1) for series of
// order r <= e-1 whose delta_pi rewrite is already integral
inline CaffReport caff_check(const QJet& s, const ConversionSystem& cs) {
  int e = s.tower.e();
  int r = s.order;
  if (r > e - 1)
    throw hypothesis_error("caff_check: needs order <= e-1");
  OverconvReport rep = overconvergence_defect(s, cs);
  if (!rep.min_val.infinite && rep.min_val < Val(0))
    throw hypothesis_error(
        "caff_check: rewrite not integral; prescale by p^" +
        std::to_string(rep.p_steps_to_image));
  long long prm1 = 1;
  for (int i = 0; i < r - 1; ++i) prm1 *= s.tower.p();
  CaffReport out;
  out.stamp = s.tr;
  for (const auto& [k, c] : s.t) {
    Val v = c.valuation();
    if (v.infinite) continue;
    Val bound(k.jet_degree() - prm1, e * prm1);  // (|beta|/p^{r-1} - 1)/e
    Val margin = v - bound;
    if (margin < out.worst_margin ||
        (out.worst_margin.infinite && !margin.infinite)) {
      out.worst_margin = margin;
      out.worst_key = k;
    }
    if (margin < Val(0)) out.pass = false;
  }
  return out;
}

// The standard delta-character series on the multiplicative group coordinate:
// sum_{n>=1} (-1)^{n-1} (w^{n-1}/n) (dx / x^p)^n, w the flavor uniformizer.
// For the pi flavor this needs v(pi) >= 1/(p-1).
inline QJet psi_series(const Tower& tw, Flavor fl, SeriesTrunc tr) {
  long long p = tw.p();
  if (fl == Flavor::delta_pi && !(Val(1, tw.e()) >= Val(1, p - 1)))
    throw hypothesis_error("psi_series: needs v(pi) >= 1/(p-1)");
  RElem w = fl == Flavor::delta_p ? tw.from_ll(p) : tw.pi();
  SeriesTrunc ex = tr;
  ex.q_prec = SeriesTrunc::exact_q;
  ex.q_min = -(int)p * (tr.jet_cap + 1);
  QJet out(tw, fl, 1, ex);
  QJet y(tw, fl, 1, ex);  // dx / x^p
  y.add_term(QKey{-(int)p, {1}}, tw.one());
  QJet ypow = y;
  for (int n = 1; n <= tr.jet_cap; ++n) {
    if (n > 1) ypow = ypow * y;
    RElem c = w.pow((u64)(n - 1)) * tw.rational(n % 2 ? 1 : -1, n);
    out = out + ypow.scaled(c);
  }
  return out.with_trunc(tr);
}

}  // namespace pijet
