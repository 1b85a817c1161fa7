#include "mgn/biseries.hpp"

#include <algorithm>

namespace mgn {

namespace {
const Rational kZero(0);

void check_window(int xmax, int hmin, int hmax) {
  if (xmax < 0 || hmin > hmax)
    throw std::invalid_argument("BiSeries: empty truncation window");
}
}  // namespace

BiSeries::BiSeries(int xmax, int hmin, int hmax) : xmax_(xmax), hmin_(hmin), hmax_(hmax) {
  check_window(xmax, hmin, hmax);
  c_.assign((size_t)(xmax_ + 1) * (hmax_ - hmin_ + 1), Rational(0));
}

BiSeries BiSeries::constant(const Rational& c, int xmax, int hmin, int hmax) {
  BiSeries s(xmax, hmin, hmax);
  if (s.in_window(0, 0)) s.set(0, 0, c);
  return s;
}

BiSeries BiSeries::var_x(int xmax, int hmin, int hmax) {
  BiSeries s(xmax, hmin, hmax);
  if (s.in_window(1, 0)) s.set(1, 0, Rational(1));
  return s;
}

const Rational& BiSeries::coeff(int i, int j) const {
  if (!in_window(i, j)) return kZero;
  return c_[idx(i, j)];
}

void BiSeries::set(int i, int j, const Rational& v) {
  if (!in_window(i, j)) throw std::invalid_argument("BiSeries::set outside window");
  c_[idx(i, j)] = v;
}

void BiSeries::add_to(int i, int j, const Rational& v) {
  if (!in_window(i, j)) throw std::invalid_argument("BiSeries::add_to outside window");
  c_[idx(i, j)] += v;
}

bool BiSeries::is_zero() const {
  for (const auto& v : c_)
    if (!v.is_zero()) return false;
  return true;
}

BiSeries BiSeries::restricted(int xmax, int hmin, int hmax) const {
  BiSeries r(xmax, hmin, hmax);
  for (int i = 0; i <= xmax; ++i)
    for (int j = hmin; j <= hmax; ++j)
      if (in_window(i, j)) r.set(i, j, coeff(i, j));
  return r;
}

BiSeries BiSeries::operator-() const {
  BiSeries r(*this);
  for (auto& v : r.c_) v = -v;
  return r;
}

BiSeries operator+(const BiSeries& a, const BiSeries& b) {
  BiSeries r(std::min(a.xmax_, b.xmax_), std::max(a.hmin_, b.hmin_), std::min(a.hmax_, b.hmax_));
  for (int i = 0; i <= r.xmax_; ++i)
    for (int j = r.hmin_; j <= r.hmax_; ++j) r.set(i, j, a.coeff(i, j) + b.coeff(i, j));
  return r;
}

BiSeries operator-(const BiSeries& a, const BiSeries& b) {
  BiSeries r(std::min(a.xmax_, b.xmax_), std::max(a.hmin_, b.hmin_), std::min(a.hmax_, b.hmax_));
  for (int i = 0; i <= r.xmax_; ++i)
    for (int j = r.hmin_; j <= r.hmax_; ++j) r.set(i, j, a.coeff(i, j) - b.coeff(i, j));
  return r;
}

BiSeries operator*(const BiSeries& a, const BiSeries& b) {
  BiSeries r(std::min(a.xmax_, b.xmax_), std::max(a.hmin_, b.hmin_), std::min(a.hmax_, b.hmax_));
  for (int ia = 0; ia <= a.xmax_ && ia <= r.xmax_; ++ia) {
    for (int ja = a.hmin_; ja <= a.hmax_; ++ja) {
      const Rational& ca = a.coeff(ia, ja);
      if (ca.is_zero()) continue;
      int ibmax = std::min(b.xmax_, r.xmax_ - ia);
      for (int ib = 0; ib <= ibmax; ++ib) {
        int jbmin = std::max(b.hmin_, r.hmin_ - ja);
        int jbmax = std::min(b.hmax_, r.hmax_ - ja);
        for (int jb = jbmin; jb <= jbmax; ++jb) {
          const Rational& cb = b.coeff(ib, jb);
          if (cb.is_zero()) continue;
          r.add_to(ia + ib, ja + jb, ca * cb);
        }
      }
    }
  }
  return r;
}

BiSeries BiSeries::scaled(const Rational& c) const {
  BiSeries r(*this);
  for (auto& v : r.c_) v *= c;
  return r;
}

BiSeries BiSeries::shifted(int dx, int dh) const {
  BiSeries r(xmax_, hmin_, hmax_);
  for (int i = 0; i <= xmax_; ++i)
    for (int j = hmin_; j <= hmax_; ++j) {
      if (coeff(i, j).is_zero()) continue;
      if (r.in_window(i + dx, j + dh)) r.add_to(i + dx, j + dh, coeff(i, j));
    }
  return r;
}

BiSeries BiSeries::pow(int e) const {
  if (e < 0) throw std::invalid_argument("BiSeries::pow: negative exponent");
  BiSeries acc = constant(Rational(1), xmax_, hmin_, hmax_);
  BiSeries base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

BiSeries BiSeries::inverse() const {
  const Rational c0 = coeff(0, 0);
  if (c0.is_zero()) throw std::invalid_argument("BiSeries::inverse: zero constant term");
  for (int j = hmin_; j < 0; ++j)
    if (!coeff(0, j).is_zero())
      throw std::invalid_argument("BiSeries::inverse: x^0 terms with negative hbar power");
  // 1/s = (1/c0) * sum_m u^m with u = 1 - s/c0.
  BiSeries u = constant(Rational(1), xmax_, hmin_, hmax_) - scaled(Rational(1) / c0);
  BiSeries acc = constant(Rational(1), xmax_, hmin_, hmax_);
  BiSeries term = constant(Rational(1), xmax_, hmin_, hmax_);
  size_t span = (size_t)(xmax_ + 1) * (hmax_ - hmin_ + 1);
  for (size_t m = 1; m <= span + 1; ++m) {
    term = term * u;
    if (term.is_zero()) break;
    acc += term;
  }
  if (!term.is_zero()) throw std::invalid_argument("BiSeries::inverse: does not terminate in window");
  return acc.scaled(Rational(1) / c0);
}

BiSeries exp_series(const BiSeries& s) {
  for (int j = s.hmin(); j <= 0; ++j)
    if (!s.coeff(0, j).is_zero())
      throw std::invalid_argument("exp_series: argument has x^0 hbar^{<=0} terms");
  BiSeries acc = BiSeries::constant(Rational(1), s.xmax(), s.hmin(), s.hmax());
  BiSeries term = acc;
  size_t span = (size_t)(s.xmax() + 1) * (s.hmax() - s.hmin() + 1);
  for (size_t m = 1; m <= span + 1; ++m) {
    term = (term * s).scaled(Rational(1, (long)m));
    if (term.is_zero()) break;
    acc += term;
  }
  if (!term.is_zero()) throw std::invalid_argument("exp_series: does not terminate in window");
  return acc;
}

BiSeries log_series(const BiSeries& s) {
  if (s.coeff(0, 0) != Rational(1))
    throw std::invalid_argument("log_series: constant term must be 1");
  BiSeries u = s - BiSeries::constant(Rational(1), s.xmax(), s.hmin(), s.hmax());
  for (int j = s.hmin(); j <= 0; ++j)
    if (!u.coeff(0, j).is_zero())
      throw std::invalid_argument("log_series: argument has x^0 hbar^{<=0} terms");
  BiSeries acc(u.xmax(), u.hmin(), u.hmax());
  BiSeries term = BiSeries::constant(Rational(1), u.xmax(), u.hmin(), u.hmax());
  size_t span = (size_t)(u.xmax() + 1) * (u.hmax() - u.hmin() + 1);
  for (size_t m = 1; m <= span + 1; ++m) {
    term = term * u;
    if (term.is_zero()) break;
    Rational sign((m % 2 == 1) ? 1 : -1, (long)m);
    acc += term.scaled(sign);
  }
  if (!term.is_zero()) throw std::invalid_argument("log_series: does not terminate in window");
  return acc;
}

Polynomial poly_derivative(const Polynomial& p) {
  Polynomial d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational((long)i));
  return d;
}

BiSeries poly_compose(const Polynomial& p, const BiSeries& s) {
  if (!s.coeff(0, 0).is_zero())
    throw std::invalid_argument("poly_compose: argument needs zero constant term");
  BiSeries acc(s.xmax(), s.hmin(), s.hmax());
  for (size_t i = p.size(); i-- > 0;) {
    acc = acc * s;
    if (!p[i].is_zero()) acc += BiSeries::constant(p[i], s.xmax(), s.hmin(), s.hmax());
  }
  return acc;
}

WPoly wpoly_mul(const WPoly& a, const WPoly& b, int wmax) {
  if (a.empty() || b.empty()) return {};
  WPoly r;
  for (int t = 0; t <= wmax; ++t) r.push_back(BiSeries(a[0].xmax(), a[0].hmin(), a[0].hmax()));
  for (int ta = 0; ta < (int)a.size(); ++ta) {
    if (a[ta].is_zero()) continue;
    for (int tb = 0; tb < (int)b.size() && ta + tb <= wmax; ++tb) {
      if (b[tb].is_zero()) continue;
      r[ta + tb] += a[ta] * b[tb];
    }
  }
  return r;
}

WPoly wpoly_exp(const WPoly& u, int wmax) {
  if (u.empty()) throw std::invalid_argument("wpoly_exp: empty argument");
  const BiSeries& model = u[0];
  for (int j = model.hmin(); j <= 0; ++j)
    if (!model.coeff(0, j).is_zero())
      throw std::invalid_argument("wpoly_exp: w^0 part has x^0 hbar^{<=0} terms");
  WPoly acc, term;
  for (int t = 0; t <= wmax; ++t) {
    acc.push_back(t == 0 ? BiSeries::constant(Rational(1), model.xmax(), model.hmin(), model.hmax())
                         : BiSeries(model.xmax(), model.hmin(), model.hmax()));
  }
  term = acc;
  size_t span = (size_t)(wmax + 1) * (model.xmax() + 1) * (model.hmax() - model.hmin() + 1);
  for (size_t m = 1; m <= span + 1; ++m) {
    term = wpoly_mul(term, u, wmax);
    bool zero = true;
    for (auto& t : term) {
      t = t.scaled(Rational(1, (long)m));
      if (!t.is_zero()) zero = false;
    }
    if (zero) break;
    for (int t = 0; t <= wmax; ++t) acc[t] += term[t];
    if (m == span + 1) throw std::invalid_argument("wpoly_exp: does not terminate in window");
  }
  return acc;
}

BiSeries gaussian_moments(const WPoly& f, const BiSeries& variance) {
  if (f.empty()) throw std::invalid_argument("gaussian_moments: empty polynomial");
  BiSeries acc(f[0].xmax(), f[0].hmin(), f[0].hmax());
  for (int t = 0; t < (int)f.size(); ++t) {
    if (t % 2 != 0) continue;  // odd moments vanish
    if (f[t].is_zero()) continue;
    Rational m(odd_double_factorial(t));
    acc += f[t] * variance.pow(t / 2).scaled(m);
  }
  return acc;
}

BiSeries wick_single(const WPoly& exponent, const BiSeries& variance, int wmax) {
  return gaussian_moments(wpoly_exp(exponent, wmax), variance);
}

BiSeries solve_fixed_point(const std::vector<Polynomial>& omega_prime, int xmax, int hmax) {
  auto rhs = [&](const BiSeries& y) {
    BiSeries r = BiSeries::var_x(xmax, 0, hmax);
    for (int g = 0; g < (int)omega_prime.size() && g <= hmax; ++g) {
      if (omega_prime[g].empty()) continue;
      r += poly_compose(omega_prime[g], y).shifted(0, g);
    }
    return r;
  };
  BiSeries y = BiSeries::var_x(xmax, 0, hmax);
  // Each iteration is a contraction in the (x,hbar)-adic metric; xmax+hmax+2
  // steps pin every coefficient in the window.
  for (int it = 0; it < xmax + hmax + 2; ++it) y = rhs(y);
  BiSeries residual = y - rhs(y);
  if (!residual.is_zero()) throw consistency_error("solve_fixed_point: residual does not vanish");
  return y;
}

Polynomial hbar_row(const BiSeries& s, int j) {
  Polynomial p;
  for (int i = 0; i <= s.xmax(); ++i) p.push_back(s.coeff(i, j));
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

}  // namespace mgn
