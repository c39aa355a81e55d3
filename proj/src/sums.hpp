#pragma once

#include <optional>

#include "basechange.hpp"
#include "eigenforms.hpp"
#include "quadarith.hpp"
#include "testfunc.hpp"

namespace qprog {

// Per-splitting-class prime sums.  The "all" accumulator is defined as the
// componentwise sum split + inert + ramified, so class additivity is exact
// by construction (when no discriminant is supplied everything lands in the
// single undivided bucket).
struct PrimeClassSums {
    double inv_p = 0.0;            // sum 1/p
    double abs_lam = 0.0;          // sum |lambda(p)|/p
    double abs_lam_sq = 0.0;       // sum |lambda(p)|^2/p
    double one_minus_abs_sq = 0.0; // sum (1-|lambda(p)|)^2/p

    PrimeClassSums operator+(const PrimeClassSums& o) const {
        return {inv_p + o.inv_p, abs_lam + o.abs_lam, abs_lam_sq + o.abs_lam_sq,
                one_minus_abs_sq + o.one_minus_abs_sq};
    }
};

struct PrimeStats {
    i64 X = 0;
    std::optional<i64> D;
    PrimeClassSums split, inert, ramified;
    PrimeClassSums all() const { return split + inert + ramified; }
};

PrimeStats prime_stats(const EigenformTable& t, std::optional<i64> D, i64 X);

// One computed sum statistic with its normalization, emitted as-is by the
// report writers.  Bit-reproducible for a fixed summation order.
struct SumReport {
    std::string statistic;
    i64 k = 0;
    i64 weight = 0;
    i64 index = 0;
    std::optional<i64> D;
    std::string q_desc;  // "a,b,c" or empty
    std::string f_desc;  // e.g. "bump(1,2)"
    double raw = 0.0;
    double normalization = 1.0;
    double normalized = 0.0;
    std::optional<double> aux;  // statistic-specific (e.g. deviation from int f)
};

// sum_n lambda(|Q(n)|) f(n/k) (signed) or sum |lambda(|Q(n)|)| f(n/k),
// n over integers with f(n/k) != 0 and Q(n) != 0, Kahan-compensated in
// ascending n, normalized by k * L(ad, 1).
SumReport quad_sum(const EigenformTable& t, const QuadPoly& Q, const TestFunction& f,
                   i64 k, bool absolute);

// zeta(2)/(k L(ad,1)) * sum f(n/k) lambda(n) lambda(n+ell); for ell = 0 the
// aux field carries the deviation from int_0^infty f.
SumReport shifted_sum(const EigenformTable& t, i64 ell, const TestFunction& f, i64 k);

// exp(-sum_split (1-|lambda|)^2/p), the non-split ratio
// exp(-sum_split (1-|lambda|)^2/p + sum_inert (1-|lambda|^2)/p), and the
// symmetrized exp(sum_all (|lambda|-|lambda|^2)/p).
struct Majorants {
    double split_majorant;
    double nonsplit_ratio;
    double symmetrized;
};
Majorants holowinsky_majorants(const PrimeStats& stats);

// Nair-style sieve majorant report for irreducible integer-valued Q.
struct NairReport {
    double rhs;             // ||Q||^C exp( sum_{split p<=x} (2(|lambda(p)|-1)+eps)/p )
    std::optional<double> lhs;  // x^{-1} sum_{n<=x} |lambda(|Q(n)|)| when in table range
    double y, z;            // smooth/rough split: y = x^alpha, z = x^{1/(alpha log log x)}
    double omega_bound;     // bound on Omega(b) for the z-rough part
    std::vector<std::pair<u64, double>> sieve_products;  // (a, prod_{p<=z, p!|a} (1 - rho(p)/p))
};
NairReport nair_majorant(const EigenformTable& t, const QuadPoly& Q, i64 x,
                         double alpha, double eps, double norm_exponent);

// Smoothed Dirichlet-series proxy for L(ad pi, 1) (and its chi_D twist):
// zeta(2) [* prod_{p|D}(1-p^-2)] * sum lambda(n^2) [chi_D(n)] exp(-(n/M)^2)/n
// with M = min(nmax/4, 10^4); the tail estimate is the last decade's
// contribution (heuristic, not certified).
struct LadValue {
    double value;
    double tail_estimate;
};
LadValue l_ad_value(const EigenformTable& t, std::optional<i64> twist_D = std::nullopt);

// Sato-Tate moments: quadrature of (2/pi) int_0^pi g(theta) sin^2 theta dtheta
// and, with a table, the 1/p-weighted empirical average of the matching
// lambda(p)-statistic over p <= X.
enum class SatoTateIntegrand { One, AbsSq, AbsMinusSq };
struct SatoTateReport {
    double quadrature;
    std::optional<double> empirical;
};
SatoTateReport sato_tate(SatoTateIntegrand g, const EigenformTable* t = nullptr,
                         i64 X = 0);

// min over c in [0,2] of max(c^2, (1-c)^2)/2 = 1/8 at c = 1/2, with a grid
// verification sweep.
struct MinimaxResult {
    double value;
    double argmin;
    double grid_value;
};
MinimaxResult minimax_exponent();

}  // namespace qprog
