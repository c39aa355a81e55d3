#include "series.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "ntt.hpp"

namespace qprog {

namespace {

i64 bit_length(const mpz_class& v) {
    if (v == 0) return 0;
    return static_cast<i64>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

mpz_class max_abs_coeff(const IntegerSeries& s) {
    mpz_class m = 0;
    for (const auto& x : s.c) {
        mpz_class a = abs(x);
        if (a > m) m = a;
    }
    return m;
}

// ---------------------------------------------------------------- plan cache

struct PlanKey {
    u64 p;
    int logn;
    bool operator<(const PlanKey& o) const {
        return p != o.p ? p < o.p : logn < o.logn;
    }
};

class PlanCache {
public:
    const NttPlan& get(const NttPrime& prime, int logn) {
        std::lock_guard<std::mutex> lock(mutex_);
        PlanKey key{prime.p, logn};
        auto it = plans_.find(key);
        if (it != plans_.end()) return *it->second;
        std::size_t bytes = (std::size_t(1) << logn) * 16;
        if (bytes_ + bytes > kMaxBytes) {
            plans_.clear();
            bytes_ = 0;
        }
        auto plan = std::make_unique<NttPlan>(prime, logn);
        const NttPlan& ref = *plan;
        plans_.emplace(key, std::move(plan));
        bytes_ += bytes;
        return ref;
    }

private:
    static constexpr std::size_t kMaxBytes = 512ull << 20;
    std::mutex mutex_;
    std::map<PlanKey, std::unique_ptr<NttPlan>> plans_;
    std::size_t bytes_ = 0;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

// ------------------------------------------------------------ CRT machinery

struct CrtBasis {
    std::vector<NttPrime> primes;
    std::vector<mpz_class> prefix;        // prefix[i] = p_0 * ... * p_{i-1}
    mpz_class modulus, half_modulus;
    // inv_tab[i][j] = (p_j)^{-1} mod p_i with its Shoup companion, j < i
    std::vector<std::vector<std::pair<u64, u64>>> inv_tab;

    explicit CrtBasis(std::size_t count) {
        primes = ntt_prime_pool(count);
        primes.resize(count);
        prefix.resize(count + 1);
        prefix[0] = 1;
        for (std::size_t i = 0; i < count; ++i)
            prefix[i + 1] = prefix[i] * mpz_class(primes[i].p);
        modulus = prefix[count];
        half_modulus = modulus / 2;
        inv_tab.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            inv_tab[i].resize(i);
            u64 pi = primes[i].p;
            for (std::size_t j = 0; j < i; ++j) {
                u64 inv = invmod(primes[j].p % pi, pi);
                u64 sh = static_cast<u64>((static_cast<unsigned __int128>(inv) << 64) / pi);
                inv_tab[i][j] = {inv, sh};
            }
        }
    }

    // Garner: residues -> signed value (|value| < modulus/2), via mixed radix.
    void reconstruct(const u64* residues, std::vector<u64>& digits, mpz_class& out) const {
        std::size_t n = primes.size();
        digits.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            u64 pi = primes[i].p;
            u64 v = residues[i] % pi;
            for (std::size_t j = 0; j < i; ++j) {
                u64 d = digits[j] % pi;
                u64 t = v >= d ? v - d : v + pi - d;
                u64 q = static_cast<u64>((static_cast<unsigned __int128>(t) * inv_tab[i][j].second) >> 64);
                u64 r = t * inv_tab[i][j].first - q * pi;
                v = r >= pi ? r - pi : r;
            }
            digits[i] = v;
        }
        out = 0;
        for (std::size_t i = n; i-- > 0;) {
            if (digits[i] == 0) continue;
            mpz_addmul_ui(out.get_mpz_t(), prefix[i].get_mpz_t(), digits[i]);
        }
        if (out > half_modulus) out -= modulus;
    }
};

void reduce_series_mod(const IntegerSeries& s, u64 p, std::size_t padded, std::vector<u64>& out) {
    out.assign(padded, 0);
    std::size_t n = s.c.size();
    for (std::size_t i = 0; i < n; ++i)
        out[i] = mpz_fdiv_ui(s.c[i].get_mpz_t(), p);
}

}  // namespace

IntegerSeries series_mul_schoolbook(const IntegerSeries& a, const IntegerSeries& b) {
    if (a.nmax() != b.nmax()) throw ConfigError("series_mul: truncation orders differ");
    i64 nmax = a.nmax();
    IntegerSeries out(nmax);
    for (i64 i = 0; i <= nmax; ++i) {
        if (a.c[i] == 0) continue;
        for (i64 j = 0; i + j <= nmax; ++j) {
            if (b.c[j] == 0) continue;
            mpz_addmul(out.c[i + j].get_mpz_t(), a.c[i].get_mpz_t(), b.c[j].get_mpz_t());
        }
    }
    return out;
}

IntegerSeries series_mul(const IntegerSeries& a, const IntegerSeries& b) {
    if (a.nmax() != b.nmax()) throw ConfigError("series_mul: truncation orders differ");
    i64 nmax = a.nmax();
    if (nmax <= 127) return series_mul_schoolbook(a, b);

    mpz_class ma = max_abs_coeff(a), mb = max_abs_coeff(b);
    if (ma == 0 || mb == 0) return IntegerSeries(nmax);
    // proven bound: |coef| <= (nmax+1) * max|a| * max|b|
    i64 bound_bits = bit_length(ma) + bit_length(mb) + bit_length(mpz_class(nmax + 1)) + 2;

    int logn = 1;
    while ((i64(1) << logn) < 2 * nmax + 1) ++logn;
    std::size_t padded = std::size_t(1) << logn;

    std::size_t nprimes = 1;
    {
        // primes are ~2^62; count until the product provably covers the bound
        i64 acc = 0;
        const auto& pool = ntt_prime_pool(1);
        (void)pool;
        nprimes = 0;
        while (acc < bound_bits) {
            const auto& ps = ntt_prime_pool(nprimes + 1);
            acc += bit_length(mpz_class(ps[nprimes].p)) - 1;  // floor(log2 p) safe bits
            ++nprimes;
        }
    }
    CrtBasis basis(nprimes);
    if (bit_length(basis.modulus) < bound_bits)
        throw InternalError("series_mul: CRT modulus below proven coefficient bound");

    std::vector<std::vector<u64>> residues(nprimes);
    std::vector<u64> ra, rb;
    for (std::size_t k = 0; k < nprimes; ++k) {
        const NttPlan& plan = plan_cache().get(basis.primes[k], logn);
        reduce_series_mod(a, basis.primes[k].p, padded, ra);
        reduce_series_mod(b, basis.primes[k].p, padded, rb);
        plan.forward(ra.data());
        plan.forward(rb.data());
        plan.pointwise(ra.data(), rb.data(), ra.data());
        plan.inverse(ra.data());
        ra.resize(nmax + 1);
        residues[k] = ra;
    }

    IntegerSeries out(nmax);
    std::vector<u64> res(nprimes), digits;
    for (i64 n = 0; n <= nmax; ++n) {
        for (std::size_t k = 0; k < nprimes; ++k) res[k] = residues[k][n];
        basis.reconstruct(res.data(), digits, out.c[n]);
    }
    return out;
}

mpq_class bernoulli(i64 n) {
    if (n < 0) throw ConfigError("bernoulli: negative index");
    static std::mutex mutex;
    static std::vector<mpq_class> table = {mpq_class(1)};
    std::lock_guard<std::mutex> lock(mutex);
    while (static_cast<i64>(table.size()) <= n) {
        i64 m = static_cast<i64>(table.size());
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        mpq_class acc = 0;
        mpz_class binom = 1;  // C(m+1, 0)
        for (i64 j = 0; j < m; ++j) {
            acc += mpq_class(binom) * table[j];
            binom *= (m + 1 - j);
            binom /= (j + 1);
        }
        mpq_class bm = -acc / mpq_class(binom);  // binom = C(m+1, m) = m+1
        bm.canonicalize();
        table.push_back(bm);
    }
    return table[n];
}

EisensteinResult eisenstein_qexp(i64 weight, i64 nmax) {
    if (weight < 4 || weight % 2 != 0)
        throw ConfigError("eisenstein_qexp: weight must be even and >= 4");
    if (nmax < 0) throw ConfigError("eisenstein_qexp: nmax must be >= 0");

    mpq_class factor = mpq_class(-2 * weight) / bernoulli(weight);
    factor.canonicalize();
    mpz_class scale = factor.get_den();        // minimal c with c*E_k integral
    mpz_class lead = factor.get_num();         // c * (-2k / B_k)

    EisensteinResult r;
    r.scale = scale;
    r.series = IntegerSeries(nmax);
    r.series.c[0] = scale;
    if (nmax >= 1) {
        // sigma_{k-1} by divisor sieve
        std::vector<mpz_class> sigma(static_cast<std::size_t>(nmax) + 1, 0);
        for (i64 d = 1; d <= nmax; ++d) {
            mpz_class pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(d),
                          static_cast<unsigned long>(weight - 1));
            for (i64 m = d; m <= nmax; m += d) sigma[m] += pw;
        }
        for (i64 n = 1; n <= nmax; ++n) r.series.c[n] = lead * sigma[n];
    }
    return r;
}

IntegerSeries delta_eta_qexp(i64 nmax) {
    if (nmax < 1) throw ConfigError("delta_qexp: nmax must be >= 1");
    // Euler: prod (1-q^n) = sum_j (-1)^j q^{j(3j-1)/2}
    i64 m = nmax - 1;  // expand prod^24 to order m, then shift by q
    struct Term { i64 idx; int sign; };
    std::vector<Term> pent;
    pent.push_back({0, +1});
    for (i64 j = 1;; ++j) {
        i64 g1 = j * (3 * j - 1) / 2;
        i64 g2 = j * (3 * j + 1) / 2;
        if (g1 > m && g2 > m) break;
        int s = (j % 2 == 0) ? +1 : -1;
        if (g1 <= m) pent.push_back({g1, s});
        if (g2 <= m) pent.push_back({g2, s});
    }
    std::sort(pent.begin(), pent.end(), [](const Term& x, const Term& y) { return x.idx < y.idx; });

    std::vector<mpz_class> acc(static_cast<std::size_t>(m) + 1, 0);
    acc[0] = 1;
    std::vector<mpz_class> next(acc.size());
    for (int pass = 0; pass < 24; ++pass) {
        for (auto& x : next) x = 0;
        for (i64 n = 0; n <= m; ++n) {
            if (acc[n] == 0) continue;
            for (const Term& t : pent) {
                i64 target = n + t.idx;
                if (target > m) break;
                if (t.sign > 0)
                    next[target] += acc[n];
                else
                    next[target] -= acc[n];
            }
        }
        acc.swap(next);
    }
    IntegerSeries out(nmax);
    for (i64 n = 0; n <= m; ++n) out.c[n + 1] = acc[n];
    return out;
}

IntegerSeries delta_qexp(i64 nmax) {
    if (nmax < 1) throw ConfigError("delta_qexp: nmax must be >= 1");
    if (nmax > kDenseSeriesCeiling) return delta_eta_qexp(nmax);
    IntegerSeries e4 = eisenstein_qexp(4, nmax).series;
    IntegerSeries e6 = eisenstein_qexp(6, nmax).series;
    IntegerSeries e4sq = series_mul(e4, e4);
    IntegerSeries e4cb = series_mul(e4sq, e4);
    IntegerSeries e6sq = series_mul(e6, e6);
    IntegerSeries out(nmax);
    for (i64 n = 0; n <= nmax; ++n) {
        mpz_class num = e4cb.c[n] - e6sq.c[n];
        mpz_class q, r;
        mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), 1728);
        if (r != 0) throw InternalError("delta_qexp: E4^3 - E6^2 not divisible by 1728");
        out.c[n] = q;
    }
    return out;
}

i64 dim_modular(i64 weight) {
    if (weight < 0 || weight % 2 != 0) return 0;
    if (weight % 12 == 2) return weight / 12;
    return weight / 12 + 1;
}

i64 dim_cusp(i64 weight) {
    if (weight < 12) return 0;
    return std::max<i64>(0, dim_modular(weight) - 1);
}

std::vector<CuspMonomial> cusp_monomials(i64 weight) {
    if (weight % 2 != 0) throw ConfigError("cusp_monomials: weight must be even");
    i64 d = dim_cusp(weight);
    std::vector<CuspMonomial> out;
    out.reserve(d);
    for (i64 i = 1; i <= d; ++i) {
        i64 rem = weight - 12 * i;
        i64 e6 = (rem % 4 == 2) ? 1 : 0;
        i64 e4 = (rem - 6 * e6) / 4;
        if (e4 < 0 || 12 * i + 4 * e4 + 6 * e6 != weight)
            throw InternalError("cusp_monomials: no monomial decomposition");
        out.push_back({i, e4, e6});
    }
    return out;
}

std::vector<IntegerSeries> miller_basis(i64 weight, i64 nmax) {
    if (weight < 12 || weight % 2 != 0)
        throw ConfigError("miller_basis: weight must be even and >= 12");
    i64 d = dim_cusp(weight);
    if (d == 0) return {};
    if (nmax < d) throw RangeError("miller_basis: nmax below dim S_weight", d);

    IntegerSeries e4 = eisenstein_qexp(4, nmax).series;
    IntegerSeries e6 = eisenstein_qexp(6, nmax).series;
    IntegerSeries delta = delta_qexp(nmax);

    auto mons = cusp_monomials(weight);
    // Shared power ladders keep the multiplication count near 3*dim.
    std::vector<IntegerSeries> basis(d);
    IntegerSeries delta_pow = delta;
    for (i64 i = 1; i <= d; ++i) {
        if (i > 1) delta_pow = series_mul(delta_pow, delta);
        IntegerSeries term = delta_pow;
        const CuspMonomial& mon = mons[static_cast<std::size_t>(i - 1)];
        if (mon.e4_power > 0) {
            // binary powering of E4
            IntegerSeries acc;
            bool have = false;
            IntegerSeries base = e4;
            i64 ee = mon.e4_power;
            while (ee) {
                if (ee & 1) {
                    acc = have ? series_mul(acc, base) : base;
                    have = true;
                }
                ee >>= 1;
                if (ee) base = series_mul(base, base);
            }
            term = series_mul(term, acc);
        }
        if (mon.e6_power == 1) term = series_mul(term, e6);
        basis[static_cast<std::size_t>(i - 1)] = std::move(term);
    }

    // Echelonize: leading block is unit lower-triangular, so elimination stays
    // integral.  After this, basis[i-1][j] = delta_{ij} for 1 <= i,j <= d.
    for (i64 i = d - 1; i >= 1; --i) {
        IntegerSeries& gi = basis[static_cast<std::size_t>(i - 1)];
        for (i64 j = i + 1; j <= d; ++j) {
            mpz_class coef = gi.c[static_cast<std::size_t>(j)];
            if (coef == 0) continue;
            const IntegerSeries& gj = basis[static_cast<std::size_t>(j - 1)];
            for (i64 n = j; n <= nmax; ++n)
                mpz_submul(gi.c[static_cast<std::size_t>(n)].get_mpz_t(),
                           coef.get_mpz_t(), gj.c[static_cast<std::size_t>(n)].get_mpz_t());
        }
    }
    for (i64 i = 1; i <= d; ++i) {
        const IntegerSeries& gi = basis[static_cast<std::size_t>(i - 1)];
        for (i64 j = 1; j <= d; ++j) {
            if (gi.c[static_cast<std::size_t>(j)] != ((i == j) ? 1 : 0))
                throw InternalError("miller_basis: echelon property failed");
        }
    }
    return basis;
}

}  // namespace qprog
