#pragma once

#include <gmpxx.h>

#include <vector>

#include "util.hpp"

namespace qprog {

// Real quadratic field Q(sqrt(D)) given by a positive nontrivial fundamental
// discriminant: D ≡ 1 (mod 4) squarefree, or D = 4m with m squarefree and
// m ≡ 2, 3 (mod 4).
bool is_fundamental(i64 D);

struct QuadField {
    i64 D;
    explicit QuadField(i64 disc) : D(disc) {
        if (D <= 1 || !is_fundamental(D))
            throw ConfigError("QuadField: D must be a positive nontrivial fundamental discriminant");
    }
};

// Kronecker symbol (D|n), completely multiplicative in n.
int kronecker(i64 D, i64 n);

enum class SplitType { Split, Inert, Ramified };
SplitType splitting(const QuadField& field, u64 p);

// True iff D is a positive fundamental discriminant and every prime of
// ram_set is inert in O_D.
bool admissible_discriminant(i64 D, const std::vector<u64>& ram_set);

// x = (n + l*sqrt(D))/2 in O_D.  Membership demands the parity condition:
// n even when D is even, n ≡ l (mod 2) when D is odd.
bool od_parity_ok(i64 D, i64 n, i64 l);

struct QuadInteger {
    QuadField field;
    i64 n;
    i64 l;
    QuadInteger(const QuadField& f, i64 n_, i64 l_) : field(f), n(n_), l(l_) {
        if (!od_parity_ok(f.D, n, l))
            throw ConfigError("QuadInteger: (n, l) violates the O_D parity condition");
    }
    bool is_zero() const { return n == 0 && l == 0; }
    i64 trace() const { return n; }
    i64 norm() const;  // (n^2 - D l^2)/4, exact
};

// Integer-valued quadratic polynomial a x^2 + b x + c: c, a+b and 2a are
// integers (equivalently Q(Z) ⊆ Z); norms and comparisons stay rational.
struct QuadPoly {
    mpq_class a, b, c;
    QuadPoly(const mpq_class& a_, const mpq_class& b_, const mpq_class& c_);
    mpq_class norm_inf() const;          // max(|a|,|b|,|c|)
    mpz_class eval(i64 x) const;         // Q(x), exact integer
    bool has_integer_coeffs() const;
    std::string to_string() const;
};

bool qp_is_irreducible(const QuadPoly& q);

// Number of roots of Q modulo n (Q with integer coefficients), by CRT over
// prime powers with Hensel lifting; exhaustive fallback for p <= 7 and
// degenerate lifts.
u64 root_count(const QuadPoly& q, u64 n);

// Prime-ideal slots.  Split1 is the conjugate containing (p, w - r) where
// w = (D + sqrt(D))/2 and r is the smallest nonnegative root of the minimal
// polynomial of w mod p.
enum class PrimeSlot { Split1, Split2, Inert, Ramified };

struct PrimeIdealPower {
    u64 p;
    PrimeSlot slot;
    int e;
};

struct IdealFactorization {
    std::vector<PrimeIdealPower> factors;  // increasing p; Split1 before Split2
    u64 norm() const;
};

// Canonical root r for the split labeling (0 <= r < p).
u64 split_prime_root(const QuadField& field, u64 p);

// Factor the principal ideal (x), x != 0.
IdealFactorization ideal_factor(const QuadInteger& x);

// Largest split (d1) and inert (d2) naturals dividing x, where a rational d
// divides x iff x/d lies in O_D; residual = |n^2 - D l^2| / (4 d1 d2^2).
struct SplitInertParts {
    u64 d1, d2, residual;
};
SplitInertParts split_inert_parts(const QuadInteger& x);

// All integral ideals of norm n (multiplicative enumeration over splitting
// types).  n = 1 yields the unit ideal.
std::vector<IdealFactorization> ideals_of_norm(const QuadField& field, u64 n);

// Square root mod an odd prime via Tonelli-Shanks; returns false when a is a
// non-residue.
bool sqrt_mod(u64 a, u64 p, u64& root);

}  // namespace qprog
