#pragma once

#include <gmpxx.h>

#include <vector>

#include "util.hpp"

namespace qprog {

// Exact q-expansion with arbitrary-precision integer coefficients,
// truncated at q^nmax.  All operations preserve the truncation order:
// a product of series truncated at nmax is exact up to q^nmax.
struct IntegerSeries {
    std::vector<mpz_class> c;  // c[n] = coefficient of q^n, n = 0..nmax

    IntegerSeries() = default;
    explicit IntegerSeries(i64 nmax) : c(static_cast<std::size_t>(nmax) + 1, 0) {
        if (nmax < 0) throw ConfigError("series truncation order must be >= 0");
    }
    i64 nmax() const { return static_cast<i64>(c.size()) - 1; }
};

struct EisensteinResult {
    IntegerSeries series;  // c * E_weight, integer coefficients
    mpz_class scale;       // the minimal positive integer c clearing denominators
};

// Integer-scaled Eisenstein series c*E_k with E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n.
// Rejects odd weights and weights < 4.
EisensteinResult eisenstein_qexp(i64 weight, i64 nmax);

// Exact truncated product.  Inputs must share nmax.  Uses multi-prime NTT +
// CRT with the prime count chosen from the proven bound
// |coef| <= (nmax+1) * max|a| * max|b|; falls back to schoolbook for short
// series.  A modulus smaller than the bound raises InternalError.
IntegerSeries series_mul(const IntegerSeries& a, const IntegerSeries& b);

// Dense-product desk-scale ceiling (documented, see README); delta_qexp
// switches to the sparse eta route above it.
constexpr i64 kDenseSeriesCeiling = 200000;

// Ramanujan tau series: coefficient of q^n is tau(n), n <= nmax.
IntegerSeries delta_qexp(i64 nmax);

// Sparse eta-product route: q * prod (1-q^n)^24 expanded with Euler's
// pentagonal-number series, no NTT involved.
IntegerSeries delta_eta_qexp(i64 nmax);

// Level-1 dimension formulas.
i64 dim_modular(i64 weight);
i64 dim_cusp(i64 weight);

// Monomial exponents (delta_power, e4_power, e6_power) of the spanning set
// Delta^i E4^a E6^b of S_weight, i = 1..dim.
struct CuspMonomial {
    i64 delta_power;
    i64 e4_power;
    i64 e6_power;
};
std::vector<CuspMonomial> cusp_monomials(i64 weight);

// Echelonized integral basis of S_weight: element i has coefficient
// delta_{ij} at q^j for 1 <= i,j <= dim.  Requires nmax >= dim.
std::vector<IntegerSeries> miller_basis(i64 weight, i64 nmax);

// Schoolbook product, exported for the randomized NTT cross-checks.
IntegerSeries series_mul_schoolbook(const IntegerSeries& a, const IntegerSeries& b);

// Exact Bernoulli number B_n (B_1 = -1/2 convention).
mpq_class bernoulli(i64 n);

}  // namespace qprog
