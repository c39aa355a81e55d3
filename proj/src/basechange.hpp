#pragma once

#include "eigenforms.hpp"
#include "quadarith.hpp"

namespace qprog {

// Quadratic base change of a level-1 eigenform to Q(sqrt(D)): the
// Galois-invariant multiplicative function lambda_D on integral ideals
// characterized by L(pi_D, s) = L(pi, s) L(pi tensor chi_D, s).
//
// ram_set lists the finite primes at which the quaternion algebra ramifies;
// it is empty in the split setting used by all shipped statistics.  Every
// member must be inert in O_D (admissibility).
struct BaseChangeContext {
    const EigenformTable* table;
    QuadField field;
    std::vector<u64> ram_set;

    BaseChangeContext(const EigenformTable& t, const QuadField& f,
                      std::vector<u64> ram = {})
        : table(&t), field(f), ram_set(std::move(ram)) {
        for (u64 p : ram_set)
            if (splitting(field, p) != SplitType::Inert)
                throw ConfigError("BaseChangeContext: ram_set prime not inert (inadmissible D)");
    }
};

// lambda_D(p^e) at the prime ideal designated by `which`:
//   split/ramified: lambda(N(p^e));
//   inert, p not in ram_set: u_e with u_0 = 1, u_1 = lambda(p)^2 - 2,
//     u_{j+1} = u_1 u_j - u_{j-1}  (coefficient of X^{2e} in
//     1/((1 - a^2 X^2)(1 - a^-2 X^2)));
//   inert, p in ram_set: lambda(p)^{2e}.
double lambda_D_prime(const BaseChangeContext& ctx, u64 p, int e, PrimeSlot which);

double lambda_D_ideal(const BaseChangeContext& ctx, const IdealFactorization& f);

// lambda_D of the principal ideal (x) via the largest split/inert rational
// divisors: lambda(d1) * lambda_D(d2) * lambda(|n^2 - D l^2| / (4 d1 d2^2)).
double lambda_D_element(const BaseChangeContext& ctx, const QuadInteger& x);

// Both sides of the Dirichlet-coefficient identity at n:
//   lhs = sum over ideals of norm n of lambda_D,
//   rhs = sum_{de=n} lambda(d) chi_D(e) lambda(e).
struct CoefficientIdentity {
    double lhs;
    double rhs;
};
CoefficientIdentity lambda_D_coefficient(const BaseChangeContext& ctx, i64 n);

// Exact version for integer tables: everything scaled by n^((k-1)/2) so both
// sides are integers.  lhs_rejected evaluates the display reading of the
// inert prime-power formula (lambda(p^{2e}) = step-2 sum), which must fail
// the identity at n = p^2 for inert p.
struct CoefficientIdentityExact {
    mpz_class lhs;
    mpz_class rhs;
    mpz_class lhs_rejected;
};
CoefficientIdentityExact lambda_D_coefficient_exact(const BaseChangeContext& ctx, i64 n);

}  // namespace qprog
