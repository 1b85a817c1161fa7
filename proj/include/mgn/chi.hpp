#pragma once

#include "mgn/biseries.hpp"
#include "mgn/rational.hpp"

namespace mgn {

bool stable_pair(int g, int n);

/// Orbifold Euler characteristic of the open moduli space M_g^n:
/// (-1)^n (2g-1) B_{2g} (2g+n-3)! / (2g)!. Invalid-argument on unstable (g,n).
Rational chi_open(int g, int n);

/// Orbifold Euler characteristic of the compactification, summed stratum by
/// stratum over stable graph classes: sum_G prod_v chi(M_{genus(v)}^{l(v)}) / |Aut G|.
Rational chi_bar_graphsum(int g, int n, int jobs = 1);

/// Same restricted to classes with h^1(G) = betti.
Rational chi_bar_by_betti(int g, int n, int betti, int jobs = 1);

/// Compact-type variant: tree classes only (h^1 = 0).
Rational chi_compact_type(int g, int n, int jobs = 1);

/// The generating series Omega(x,hbar) = sum chi(M_g^n) x^n/n! hbar^{g-1}.
BiSeries omega_series(int xmax, int hmax);

/// Free energy F(x,hbar) = log <exp Omega(x+w,hbar)> over the Gaussian w with
/// variance hbar; the coefficient of x^n hbar^{g-1} times n! is chi_bar(g,n).
BiSeries wick_free_energy(int xmax, int hmax);

/// chi_bar via the Gaussian-integral route. Throws std::invalid_argument when
/// the requested (g,n) exceeds the configured window instead of truncating.
Rational chi_bar_wick(int g, int n, int xmax = -1, int hmax = -1);

/// The three terms of the semiclassical expansion of F: the tree part (saddle
/// value), the one-loop part -1/2 log(1-G) and the multi-loop part log(1+A),
/// which resolve F by the first Betti number of the underlying stable graph.
struct SemiclassicalF {
  BiSeries tree;       // h^1 = 0
  BiSeries one_loop;   // h^1 = 1
  BiSeries multi_loop; // h^1 >= 2
  BiSeries total;
  BiSeries ybar;
};

SemiclassicalF semiclassical_F(int xmax, int hmax);

/// ybar(x,hbar) solving Eq. of motion ybar = x + sum_g Omega_g'(ybar) hbar^g.
BiSeries ybar_series(int xmax, int hmax);

/// Closed forms for the first three free-energy coefficients, as x-coefficient
/// lists: F0 = Omega_0(y0) - Omega_0'(y0)^2/2, F1 = Omega_1(y0) -
/// log(1-Omega_0''(y0))/2, and the printed two-loop combination for F2.
struct ClosedF012 {
  Polynomial F0, F1, F2;
};

ClosedF012 closed_form_F012(int xmax);

}  // namespace mgn
