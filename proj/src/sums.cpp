#include "sums.hpp"

#include <cmath>

namespace qprog {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kZeta2 = kPi * kPi / 6.0;

std::string bump_desc(const TestFunction& f) {
    return "bump(" + fmt_double(f.support_lo()) + "," + fmt_double(f.support_hi()) + ")";
}

}  // namespace

PrimeStats prime_stats(const EigenformTable& t, std::optional<i64> D, i64 X) {
    if (X < 2) throw ConfigError("prime_stats: X must be >= 2");
    if (X > t.nmax)
        throw RangeError("prime_stats: X beyond table range (nmax=" +
                             std::to_string(t.nmax) + ")",
                         X);
    PrimeStats stats;
    stats.X = X;
    stats.D = D;
    std::optional<QuadField> field;
    if (D) field.emplace(*D);
    for (u32 p : primes_upto(static_cast<u64>(X))) {
        double al = std::fabs(t.lambda_at(static_cast<i64>(p)));
        PrimeClassSums v{1.0 / p, al / p, al * al / p, (1.0 - al) * (1.0 - al) / p};
        PrimeClassSums* bucket = &stats.split;
        if (field) {
            switch (splitting(*field, p)) {
                case SplitType::Split: bucket = &stats.split; break;
                case SplitType::Inert: bucket = &stats.inert; break;
                case SplitType::Ramified: bucket = &stats.ramified; break;
            }
        }
        *bucket = *bucket + v;
    }
    return stats;
}

SumReport quad_sum(const EigenformTable& t, const QuadPoly& Q, const TestFunction& f,
                   i64 k, bool absolute) {
    if (k < 1) throw ConfigError("quad_sum: k must be >= 1");
    if (!(f.support_lo() > 0.0)) throw ConfigError("quad_sum: f must be supported in (0, inf)");
    i64 n_lo = static_cast<i64>(std::floor(f.support_lo() * k)) ;
    i64 n_hi = static_cast<i64>(std::ceil(f.support_hi() * k));
    Kahan acc;
    for (i64 n = std::max<i64>(1, n_lo); n <= n_hi; ++n) {
        double fv = f(static_cast<double>(n) / static_cast<double>(k));
        if (fv == 0.0) continue;
        mpz_class qn = Q.eval(n);
        if (qn == 0) continue;
        mpz_class aq = abs(qn);
        if (aq > t.nmax)
            throw RangeError("quad_sum: |Q(n)| = " + aq.get_str() +
                                 " beyond table range (required nmax=" + aq.get_str() + ")",
                             static_cast<i64>(mpz_get_ui(aq.get_mpz_t())));
        double lam = t.lambda_at(mpz_get_si(aq.get_mpz_t()));
        acc.add((absolute ? std::fabs(lam) : lam) * fv);
    }
    SumReport r;
    r.statistic = absolute ? "quad-sum-abs" : "quad-sum";
    r.k = k;
    r.weight = t.weight;
    r.index = t.index;
    r.q_desc = Q.to_string();
    r.f_desc = bump_desc(f);
    r.raw = acc.value();
    r.normalization = static_cast<double>(k) * l_ad_value(t).value;
    r.normalized = r.raw / r.normalization;
    return r;
}

SumReport shifted_sum(const EigenformTable& t, i64 ell, const TestFunction& f, i64 k) {
    if (k < 1) throw ConfigError("shifted_sum: k must be >= 1");
    i64 n_lo = std::max<i64>({1, 1 - ell,
                              static_cast<i64>(std::floor(f.support_lo() * k))});
    i64 n_hi = static_cast<i64>(std::ceil(f.support_hi() * k));
    if (n_hi + ell > t.nmax || n_hi > t.nmax)
        throw RangeError("shifted_sum: n + ell beyond table range (nmax=" +
                             std::to_string(t.nmax) + ")",
                         n_hi + std::max<i64>(ell, 0));
    Kahan acc;
    for (i64 n = n_lo; n <= n_hi; ++n) {
        double fv = f(static_cast<double>(n) / static_cast<double>(k));
        if (fv == 0.0) continue;
        acc.add(fv * t.lambda_at(n) * t.lambda_at(n + ell));
    }
    SumReport r;
    r.statistic = "shifted-sum";
    r.k = k;
    r.weight = t.weight;
    r.index = t.index;
    r.q_desc = "ell=" + std::to_string(ell);
    r.f_desc = bump_desc(f);
    r.raw = acc.value();
    r.normalization = static_cast<double>(k) * l_ad_value(t).value / kZeta2;
    r.normalized = r.raw / r.normalization;
    if (ell == 0) r.aux = r.normalized - f.integral();
    return r;
}

Majorants holowinsky_majorants(const PrimeStats& stats) {
    if (!stats.D)
        throw ConfigError("holowinsky_majorants: class-resolved stats required (D missing)");
    PrimeClassSums all = stats.all();
    Majorants m;
    m.split_majorant = std::exp(-stats.split.one_minus_abs_sq);
    m.nonsplit_ratio = std::exp(-stats.split.one_minus_abs_sq +
                                (stats.inert.inv_p - stats.inert.abs_lam_sq));
    m.symmetrized = std::exp(all.abs_lam - all.abs_lam_sq);
    return m;
}

NairReport nair_majorant(const EigenformTable& t, const QuadPoly& Q, i64 x,
                         double alpha, double eps, double norm_exponent) {
    if (x < 16) throw ConfigError("nair_majorant: x too small");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw ConfigError("nair_majorant: need 0 < alpha < 1");
    if (!qp_is_irreducible(Q))
        throw ConfigError("nair_majorant: Q must be irreducible");
    if (!Q.has_integer_coeffs())
        throw ConfigError("nair_majorant: integer coefficients required");

    // fundamental discriminant attached to disc(Q)'s square class
    mpq_class discq = Q.b * Q.b - 4 * Q.a * Q.c;
    discq.canonicalize();
    mpz_class disc = discq.get_num();
    if (disc <= 0)
        throw ConfigError("nair_majorant: negative discriminant has no real splitting");
    i64 d_int = static_cast<i64>(mpz_get_si(disc.get_mpz_t()));
    i64 sf = 1;
    for (auto& [p, e] : factorize(static_cast<u64>(d_int))) {
        if (e % 2 == 1) sf *= static_cast<i64>(p);
    }
    i64 D0 = (sf % 4 == 1) ? sf : 4 * sf;

    NairReport r;
    double sum = 0.0;
    for (u32 p : primes_upto(static_cast<u64>(x))) {
        if (kronecker(D0, static_cast<i64>(p)) != 1) continue;  // split primes only
        double al = std::fabs(t.lambda_at(std::min<i64>(static_cast<i64>(p), t.nmax)));
        if (static_cast<i64>(p) > t.nmax)
            throw RangeError("nair_majorant: prime beyond table range", static_cast<i64>(p));
        sum += (2.0 * (al - 1.0) + eps) / p;
    }
    double qn = std::fabs(mpq_class(Q.norm_inf()).get_d());
    r.rhs = std::pow(qn, norm_exponent) * std::exp(sum);

    double loglogx = std::log(std::log(static_cast<double>(x)));
    r.y = std::pow(static_cast<double>(x), alpha);
    r.z = std::pow(static_cast<double>(x), 1.0 / (alpha * loglogx));
    r.omega_bound = std::log(3.0 * qn * static_cast<double>(x) * static_cast<double>(x)) /
                    std::log(r.z);

    // sieve products over sampled a
    i64 zi = static_cast<i64>(std::floor(r.z));
    auto zprimes = primes_upto(static_cast<u64>(std::max<i64>(zi, 2)));
    for (u64 a : {1ULL, 2ULL, 6ULL, 30ULL, 210ULL}) {
        double prod = 1.0;
        for (u32 p : zprimes) {
            if (a % p == 0) continue;
            prod *= 1.0 - static_cast<double>(root_count(Q, p)) / p;
        }
        r.sieve_products.emplace_back(a, prod);
    }

    // direct LHS loop when the table covers |Q(n)| for n <= x
    mpz_class worst = 0;
    for (i64 n : {x, x - 1, i64(1)}) worst = std::max(worst, mpz_class(abs(Q.eval(n))));
    if (worst <= t.nmax) {
        Kahan acc;
        for (i64 n = 1; n <= x; ++n) {
            mpz_class qv = abs(Q.eval(n));
            if (qv == 0) continue;
            acc.add(std::fabs(t.lambda_at(mpz_get_si(qv.get_mpz_t()))));
        }
        r.lhs = acc.value() / static_cast<double>(x);
    }
    return r;
}

LadValue l_ad_value(const EigenformTable& t, std::optional<i64> twist_D) {
    i64 M = std::min<i64>(t.nmax / 4, 10000);
    if (M < 8)
        throw RangeError("l_ad_value: table too short for the smoothing cutoff", 32);
    i64 n_stop = std::min<i64>(4 * M, t.nmax);
    std::optional<QuadField> field;
    if (twist_D) field.emplace(*twist_D);

    // lambda(n^2) multiplicatively: at prime powers via the Hecke recursion
    // extended to exponent 2e
    auto lambda_sq = [&](i64 n) {
        double v = 1.0;
        for (auto& [p, e] : factorize(static_cast<u64>(n))) {
            double lp = t.lambda_at(static_cast<i64>(p));
            // lambda(p^j) by recursion up to j = 2e
            double prev = 1.0, cur = lp;
            for (int j = 2; j <= 2 * e; ++j) {
                double next = lp * cur - prev;
                prev = cur;
                cur = next;
            }
            v *= (e == 0) ? 1.0 : cur;
        }
        return v;
    };

    double front = kZeta2;
    if (field)
        for (auto& [p, e] : factorize(static_cast<u64>(field->D))) {
            (void)e;
            front *= 1.0 - 1.0 / (static_cast<double>(p) * static_cast<double>(p));
        }

    Kahan acc, tail;
    i64 decade_lo = n_stop - n_stop / 10;
    for (i64 n = 1; n <= n_stop; ++n) {
        double term = lambda_sq(n) / static_cast<double>(n) *
                      std::exp(-std::pow(static_cast<double>(n) / M, 2.0));
        if (field) {
            int chi = kronecker(field->D, n);
            if (chi == 0) continue;
            term *= chi;
        }
        acc.add(term);
        if (n > decade_lo) tail.add(term);
    }
    return {front * acc.value(), std::fabs(front * tail.value())};
}

SatoTateReport sato_tate(SatoTateIntegrand g, const EigenformTable* t, i64 X) {
    auto integrand = [&](double theta) {
        double a = std::fabs(2.0 * std::cos(theta));
        double v = 1.0;
        switch (g) {
            case SatoTateIntegrand::One: v = 1.0; break;
            case SatoTateIntegrand::AbsSq: v = a * a; break;
            case SatoTateIntegrand::AbsMinusSq: v = a - a * a; break;
        }
        double s = std::sin(theta);
        return 2.0 / kPi * v * s * s;
    };
    SatoTateReport r;
    r.quadrature = gauss_legendre(0.0, kPi, integrand, 64);
    if (t != nullptr && X >= 2) {
        double num = 0.0, den = 0.0;
        for (u32 p : primes_upto(static_cast<u64>(std::min<i64>(X, t->nmax)))) {
            double al = std::fabs(t->lambda_at(static_cast<i64>(p)));
            double v = 1.0;
            switch (g) {
                case SatoTateIntegrand::One: v = 1.0; break;
                case SatoTateIntegrand::AbsSq: v = al * al; break;
                case SatoTateIntegrand::AbsMinusSq: v = al - al * al; break;
            }
            num += v / p;
            den += 1.0 / p;
        }
        r.empirical = num / den;
    }
    return r;
}

MinimaxResult minimax_exponent() {
    MinimaxResult r;
    r.value = 0.125;  // max(c^2, (1-c)^2)/2 at the crossing c^2 = (1-c)^2
    r.argmin = 0.5;
    double best = 1e300;
    for (int i = 0; i <= 10000; ++i) {
        double c = 2.0 * i / 10000.0;
        double v = std::max(c * c, (1.0 - c) * (1.0 - c)) / 2.0;
        best = std::min(best, v);
    }
    r.grid_value = best;
    return r;
}

}  // namespace qprog
