#include "basechange.hpp"

#include <algorithm>
#include <cmath>

namespace qprog {

namespace {

bool in_ram_set(const BaseChangeContext& ctx, u64 p) {
    return std::find(ctx.ram_set.begin(), ctx.ram_set.end(), p) != ctx.ram_set.end();
}

i64 checked_pow(u64 p, int e, i64 limit) {
    i64 v = 1;
    for (int i = 0; i < e; ++i) {
        if (v > limit / static_cast<i64>(p))
            throw RangeError("lambda_D: prime power beyond table range (nmax=" +
                                 std::to_string(limit) + ")",
                             limit);
        v *= static_cast<i64>(p);
    }
    return v;
}

double inert_chebyshev(double lambda_p, int e) {
    // u_e with u_0 = 1, u_1 = lambda(p)^2 - 2
    double u1 = lambda_p * lambda_p - 2.0;
    if (e == 0) return 1.0;
    if (e == 1) return u1;
    double prev = 1.0, cur = u1;
    for (int j = 2; j <= e; ++j) {
        double next = u1 * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace

double lambda_D_prime(const BaseChangeContext& ctx, u64 p, int e, PrimeSlot which) {
    if (e < 0) throw ConfigError("lambda_D_prime: exponent must be >= 0");
    if (e == 0) return 1.0;
    SplitType st = splitting(ctx.field, p);
    bool consistent = (which == PrimeSlot::Ramified && st == SplitType::Ramified) ||
                      (which == PrimeSlot::Inert && st == SplitType::Inert) ||
                      ((which == PrimeSlot::Split1 || which == PrimeSlot::Split2) &&
                       st == SplitType::Split);
    if (!consistent)
        throw ConfigError("lambda_D_prime: slot inconsistent with splitting of p");
    const EigenformTable& t = *ctx.table;
    if (st == SplitType::Split || st == SplitType::Ramified)
        return t.lambda_at(checked_pow(p, e, t.nmax));
    if (in_ram_set(ctx, p))
        return std::pow(t.lambda_at(static_cast<i64>(p)), 2 * e);
    return inert_chebyshev(t.lambda_at(static_cast<i64>(p)), e);
}

double lambda_D_ideal(const BaseChangeContext& ctx, const IdealFactorization& f) {
    double v = 1.0;
    for (const auto& pf : f.factors) v *= lambda_D_prime(ctx, pf.p, pf.e, pf.slot);
    return v;
}

double lambda_D_element(const BaseChangeContext& ctx, const QuadInteger& x) {
    if (x.is_zero()) throw ConfigError("lambda_D_element: x must be nonzero");
    if (x.field.D != ctx.field.D)
        throw ConfigError("lambda_D_element: field mismatch");
    SplitInertParts parts = split_inert_parts(x);
    const EigenformTable& t = *ctx.table;
    if (static_cast<i64>(parts.residual) > t.nmax || static_cast<i64>(parts.d1) > t.nmax)
        throw RangeError("lambda_D_element: residual beyond table range (nmax=" +
                             std::to_string(t.nmax) + ")",
                         static_cast<i64>(parts.residual));
    double v = t.lambda_at(static_cast<i64>(parts.d1));
    for (auto& [p, e] : factorize(parts.d2)) {
        if (in_ram_set(ctx, p))
            v *= std::pow(t.lambda_at(static_cast<i64>(p)), 2 * e);
        else
            v *= inert_chebyshev(t.lambda_at(static_cast<i64>(p)), e);
    }
    v *= t.lambda_at(static_cast<i64>(parts.residual));
    return v;
}

CoefficientIdentity lambda_D_coefficient(const BaseChangeContext& ctx, i64 n) {
    if (n < 1) throw ConfigError("lambda_D_coefficient: n must be >= 1");
    const EigenformTable& t = *ctx.table;
    if (n > t.nmax)
        throw RangeError("lambda_D_coefficient: n beyond table range (nmax=" +
                             std::to_string(t.nmax) + ")",
                         n);
    double lhs = 0.0;
    for (const auto& ideal : ideals_of_norm(ctx.field, static_cast<u64>(n)))
        lhs += lambda_D_ideal(ctx, ideal);
    double rhs = 0.0;
    for (i64 d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        i64 e = n / d;
        rhs += t.lambda_at(d) * kronecker(ctx.field.D, e) * t.lambda_at(e);
        if (d != e) rhs += t.lambda_at(e) * kronecker(ctx.field.D, d) * t.lambda_at(d);
    }
    return {lhs, rhs};
}

CoefficientIdentityExact lambda_D_coefficient_exact(const BaseChangeContext& ctx, i64 n) {
    const EigenformTable& t = *ctx.table;
    if (!t.exact)
        throw ConfigError("lambda_D_coefficient_exact: exact table required");
    if (n < 1 || n > t.nmax)
        throw RangeError("lambda_D_coefficient_exact: n beyond table range", n);

    mpz_class pk;  // p^(k-1), set per prime below
    // scaled lambda_D over an ideal: product over factors of the integer
    // values; split/ramified contribute a(p^e), inert contributes
    // U_e = u_e p^{(k-1)e} with U_1 = a(p)^2 - 2 p^{k-1},
    // U_{e+1} = U_1 U_e - p^{2(k-1)} U_{e-1}.
    auto scaled_prime = [&](u64 p, int e, PrimeSlot slot, bool rejected_reading) {
        if (slot == PrimeSlot::Split1 || slot == PrimeSlot::Split2 ||
            slot == PrimeSlot::Ramified) {
            i64 pe = checked_pow(p, e, t.nmax);
            return t.a_at(pe);
        }
        if (in_ram_set(ctx, p)) {
            mpz_class ap = t.a_at(static_cast<i64>(p));
            mpz_class v;
            mpz_pow_ui(v.get_mpz_t(), ap.get_mpz_t(), static_cast<unsigned long>(2 * e));
            return v;
        }
        if (rejected_reading) {
            // display reading: lambda_D(p^e) "=" lambda(p^{2e})
            i64 p2e = checked_pow(p, 2 * e, t.nmax);
            return t.a_at(p2e);
        }
        mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(t.weight - 1));
        mpz_class u1 = t.a_at(static_cast<i64>(p)) * t.a_at(static_cast<i64>(p)) - 2 * pk;
        if (e == 1) return u1;
        mpz_class prev = 1, cur = u1, pk2 = pk * pk;
        for (int j = 2; j <= e; ++j) {
            mpz_class next = u1 * cur - pk2 * prev;
            prev = cur;
            cur = next;
        }
        return cur;
    };

    CoefficientIdentityExact out;
    out.lhs = 0;
    out.lhs_rejected = 0;
    for (const auto& ideal : ideals_of_norm(ctx.field, static_cast<u64>(n))) {
        mpz_class term = 1, term_rej = 1;
        for (const auto& pf : ideal.factors) {
            term *= scaled_prime(pf.p, pf.e, pf.slot, false);
            term_rej *= scaled_prime(pf.p, pf.e, pf.slot, true);
        }
        out.lhs += term;
        out.lhs_rejected += term_rej;
    }
    out.rhs = 0;
    for (i64 d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        i64 e = n / d;
        int chi = kronecker(ctx.field.D, e);
        if (chi == 0) continue;
        out.rhs += t.a_at(d) * chi * t.a_at(e);
    }
    return out;
}

}  // namespace qprog
