#include "mgn/weighted_series.hpp"

#include <algorithm>

namespace mgn {

SlotVec slotvec_merge(const SlotVec& a, const SlotVec& b) {
  SlotVec r;
  r.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) r.push_back(a[i++]);
    else if (a[i].first > b[j].first) r.push_back(b[j++]);
    else {
      r.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i, ++j;
    }
  }
  while (i < a.size()) r.push_back(a[i++]);
  while (j < b.size()) r.push_back(b[j++]);
  return r;
}

WeightedSeries WeightedSeries::one(int lmin, int lmax, int ymax) {
  WeightedSeries s(lmin, lmax, ymax);
  s.add_term(WMonomial{}, Rational(1));
  return s;
}

void WeightedSeries::add_term(const WMonomial& m, const Rational& c) {
  if (c.is_zero()) return;
  if (m.lam < lmin_ || m.lam > lmax_ || m.y < 0 || m.y > ymax_) return;
  auto [it, inserted] = t_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

Rational WeightedSeries::coeff(const WMonomial& m) const {
  auto it = t_.find(m);
  return it == t_.end() ? Rational(0) : it->second;
}

int WeightedSeries::min_lambda_degree() const {
  int m = lmax_ + 1;
  for (const auto& [k, v] : t_) m = std::min(m, k.lam);
  return m;
}

bool WeightedSeries::has_slots() const {
  for (const auto& [k, v] : t_)
    if (!k.slots.empty()) return true;
  return false;
}

WeightedSeries WeightedSeries::operator-() const {
  WeightedSeries r(*this);
  for (auto& [k, v] : r.t_) v = -v;
  return r;
}

WeightedSeries& WeightedSeries::operator+=(const WeightedSeries& o) {
  for (const auto& [k, v] : o.t_) add_term(k, v);
  return *this;
}

WeightedSeries operator+(const WeightedSeries& a, const WeightedSeries& b) {
  WeightedSeries r(a);
  r += b;
  return r;
}

WeightedSeries operator-(const WeightedSeries& a, const WeightedSeries& b) {
  WeightedSeries r(a);
  r += -b;
  return r;
}

WeightedSeries operator*(const WeightedSeries& a, const WeightedSeries& b) {
  WeightedSeries r(std::max(a.lmin_, b.lmin_), std::min(a.lmax_, b.lmax_), std::min(a.ymax_, b.ymax_));
  for (const auto& [ka, va] : a.t_) {
    if (ka.lam > r.lmax_ || ka.y > r.ymax_) continue;
    for (const auto& [kb, vb] : b.t_) {
      WMonomial m;
      m.lam = ka.lam + kb.lam;
      if (m.lam > r.lmax_ || m.lam < r.lmin_) continue;
      m.y = ka.y + kb.y;
      if (m.y > r.ymax_) continue;
      m.slots = slotvec_merge(ka.slots, kb.slots);
      r.add_term(m, va * vb);
    }
  }
  return r;
}

WeightedSeries WeightedSeries::scaled(const Rational& c) const {
  WeightedSeries r(lmin_, lmax_, ymax_);
  if (c.is_zero()) return r;
  r.t_ = t_;
  for (auto& [k, v] : r.t_) v *= c;
  return r;
}

WeightedSeries exp_weighted(const WeightedSeries& s) {
  if (s.min_lambda_degree() < 1)
    throw std::invalid_argument("exp_weighted: all terms must have lambda degree >= 1");
  WeightedSeries acc = WeightedSeries::one(s.lmin(), s.lmax(), s.ymax());
  WeightedSeries term = acc;
  for (long m = 1; m <= s.lmax(); ++m) {
    term = (term * s).scaled(Rational(1, m));
    if (term.is_zero()) break;
    acc += term;
  }
  return acc;
}

WeightedSeries log_weighted(const WeightedSeries& s) {
  if (s.coeff(WMonomial{}) != Rational(1))
    throw std::invalid_argument("log_weighted: constant term must be 1");
  WeightedSeries u = s;
  u.add_term(WMonomial{}, Rational(-1));
  if (u.min_lambda_degree() < 1)
    throw std::invalid_argument("log_weighted: non-constant terms must have lambda degree >= 1");
  WeightedSeries acc(s.lmin(), s.lmax(), s.ymax());
  WeightedSeries term = WeightedSeries::one(s.lmin(), s.lmax(), s.ymax());
  for (long m = 1; m <= s.lmax(); ++m) {
    term = term * u;
    if (term.is_zero()) break;
    acc += term.scaled(Rational((m % 2 == 1) ? 1 : -1, m));
  }
  return acc;
}

namespace {
// (e-1)!! * r^{e/2} for even e; 0 moment signalled by empty optional semantics.
bool slot_moment(int r, int e, Integer* out) {
  if (e % 2 != 0) return false;
  Integer v = odd_double_factorial(e);
  Integer rr(r);
  for (int i = 0; i < e / 2; ++i) v *= rr;
  *out = v;
  return true;
}
}  // namespace

WeightedSeries wick_multi(const WeightedSeries& s) {
  WeightedSeries r(s.lmin(), s.lmax(), s.ymax());
  for (const auto& [k, v] : s.terms()) {
    Rational c = v;
    bool alive = true;
    for (const auto& [slot, e] : k.slots) {
      Integer m;
      if (!slot_moment(slot, e, &m)) {
        alive = false;
        break;
      }
      c *= Rational(m);
    }
    if (!alive) continue;
    r.add_term(WMonomial{k.lam, k.y, {}}, c);
  }
  return r;
}

WeightedSeries wick_slot(const WeightedSeries& s, int r) {
  WeightedSeries out(s.lmin(), s.lmax(), s.ymax());
  for (const auto& [k, v] : s.terms()) {
    int e = 0;
    SlotVec rest;
    for (const auto& [slot, ee] : k.slots) {
      if (slot == r) e = ee;
      else rest.push_back({slot, ee});
    }
    if (e == 0) {
      out.add_term(k, v);
      continue;
    }
    Integer m;
    if (!slot_moment(r, e, &m)) continue;
    out.add_term(WMonomial{k.lam, k.y, rest}, v * Rational(m));
  }
  return out;
}

}  // namespace mgn
