#include "eigenforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "json.hpp"
#include "ntt.hpp"

namespace qprog {

namespace {

constexpr int kCacheVersion = 1;

double mpz_ratio_to_double(const mpz_class& num, const mpz_class& den) {
    if (num == 0) return 0.0;
    long en = 0, ed = 0;
    double mn = mpz_get_d_2exp(&en, num.get_mpz_t());
    double md = mpz_get_d_2exp(&ed, den.get_mpz_t());
    return (mn / md) * std::ldexp(1.0, static_cast<int>(en - ed));
}

// lambda(n) = a(n)/n^((k-1)/2) with sub-ulp rounding slop: computed as
// sign(a) * sqrt(a^2 / n^(k-1)).
double lambda_from_exact(const mpz_class& an, i64 n, i64 weight) {
    if (an == 0) return 0.0;
    mpz_class sq = an * an;
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(n),
                  static_cast<unsigned long>(weight - 1));
    double v = std::sqrt(mpz_ratio_to_double(sq, pw));
    return an < 0 ? -v : v;
}

// Multiplicative fill of lambda(n) from prime values, using the Hecke
// recursion lambda(p^{e+1}) = lambda(p) lambda(p^e) - lambda(p^{e-1}).
void hecke_fill_lambda(std::vector<double>& lam, i64 nmax) {
    auto& sieve = global_sieve();
    primes_upto(static_cast<u64>(nmax));  // make sure the sieve covers nmax
    lam[1] = 1.0;
    for (i64 n = 2; n <= nmax; ++n) {
        auto fac = sieve.factorize(static_cast<u64>(n));
        u64 p = fac[0].first;
        int e = fac[0].second;
        i64 pe = 1;
        for (int i = 0; i < e; ++i) pe *= static_cast<i64>(p);
        if (pe == n) {
            if (e >= 2)
                lam[n] = lam[static_cast<i64>(p)] * lam[n / static_cast<i64>(p)] -
                         lam[n / static_cast<i64>(p * p)];
            // e == 1: lam[p] already set by the caller
        } else {
            lam[n] = lam[pe] * lam[n / pe];
        }
    }
}

// ------------------------------------------------------------------ columns
//
// Exact coefficients h_j[col] of the spanning set h_j = Delta^j E4^{e_j} E6^{eps},
// j = 1..dim, at the requested column indices, computed one NTT prime at a
// time (the chain h_{j+1} = h_j * Delta * E4^{-3} stays in Z[[q]], so residues
// of the true integer coefficients come out of each prime independently) and
// recombined by CRT.  Reconstruction is sized from an empirical coefficient
// bound and certified against held-out primes; on mismatch the prime count
// escalates.  Never silently wrong.

struct ColumnData {
    std::vector<i64> cols;
    std::vector<std::vector<mpz_class>> h;  // h[j][ci]
};

struct ColumnCrt {
    std::vector<NttPrime> primes;
    std::vector<mpz_class> prefix;
    mpz_class modulus, half_modulus;
    std::vector<std::vector<std::pair<u64, u64>>> inv_tab;

    explicit ColumnCrt(std::size_t count) {
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

    void reconstruct(const u64* residues, std::vector<u64>& digits, mpz_class& out) const {
        std::size_t n = primes.size();
        digits.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            u64 pi = primes[i].p;
            u64 v = residues[i] % pi;
            for (std::size_t j = 0; j < i; ++j) {
                u64 d = digits[j] % pi;
                u64 t = v >= d ? v - d : v + pi - d;
                u64 q = static_cast<u64>(
                    (static_cast<unsigned __int128>(t) * inv_tab[i][j].second) >> 64);
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

class PrimeChain {
public:
    PrimeChain(const NttPrime& prime, int logn, i64 nmax)
        : prime_(prime), plan_(prime, logn), nmax_(nmax), size_(std::size_t(1) << logn) {}

    // c = a * b truncated to nmax (a, b truncated coefficient vectors)
    void mul(const std::vector<u64>& a, const std::vector<u64>& b, std::vector<u64>& c) {
        buf_a_.assign(size_, 0);
        std::copy(a.begin(), a.end(), buf_a_.begin());
        buf_b_.assign(size_, 0);
        std::copy(b.begin(), b.end(), buf_b_.begin());
        plan_.forward(buf_a_.data());
        plan_.forward(buf_b_.data());
        plan_.pointwise(buf_a_.data(), buf_b_.data(), buf_a_.data());
        plan_.inverse(buf_a_.data());
        c.assign(buf_a_.begin(), buf_a_.begin() + nmax_ + 1);
    }

    // multiply by a cached transform
    void set_cached(const std::vector<u64>& y) {
        cached_.assign(size_, 0);
        std::copy(y.begin(), y.end(), cached_.begin());
        plan_.forward(cached_.data());
    }
    void mul_cached(const std::vector<u64>& a, std::vector<u64>& c) {
        buf_a_.assign(size_, 0);
        std::copy(a.begin(), a.end(), buf_a_.begin());
        plan_.forward(buf_a_.data());
        plan_.pointwise(buf_a_.data(), cached_.data(), buf_a_.data());
        plan_.inverse(buf_a_.data());
        c.assign(buf_a_.begin(), buf_a_.begin() + nmax_ + 1);
    }

    // power series inverse of b (b[0] must be a unit) to nmax_, Newton
    void invert(const std::vector<u64>& b, std::vector<u64>& out) {
        u64 p = prime_.p;
        out.assign(1, invmod(b[0] % p, p));
        i64 have = 1;
        std::vector<u64> tmp, tb;
        while (have <= nmax_) {
            i64 want = std::min<i64>(2 * have, nmax_ + 1);
            // out <- out * (2 - b*out) truncated to want
            tb.assign(b.begin(), b.begin() + std::min<std::size_t>(b.size(), want));
            mul_to(tb, out, want, tmp);  // tmp = b*out
            for (auto& x : tmp) x = x ? p - x : 0;
            tmp[0] = (tmp[0] + 2) % p;
            mul_to(out, tmp, want, out);
            have = want;
            if (have == nmax_ + 1) break;
        }
        out.resize(nmax_ + 1, 0);
    }

    u64 p() const { return prime_.p; }

private:
    // general truncated product at arbitrary length (used by Newton stages)
    void mul_to(const std::vector<u64>& a, const std::vector<u64>& b, i64 len,
                std::vector<u64>& out) {
        int lg = 0;
        while ((i64(1) << lg) < 2 * len - 1) ++lg;
        if ((std::size_t(1) << lg) > size_)
            throw InternalError("PrimeChain::mul_to: stage exceeds transform size");
        if (len <= 64) {
            // schoolbook for tiny stages
            std::vector<u64> c(len, 0);
            u64 p = prime_.p;
            for (i64 i = 0; i < std::min<i64>(len, a.size()); ++i) {
                if (!a[i]) continue;
                for (i64 j = 0; j + i < len && j < static_cast<i64>(b.size()); ++j) {
                    if (!b[j]) continue;
                    c[i + j] = (c[i + j] + mulmod(a[i], b[j], p)) % p;
                }
            }
            out = std::move(c);
            return;
        }
        NttPlan plan(prime_, lg);
        std::size_t n = std::size_t(1) << lg;
        std::vector<u64> fa(n, 0), fb(n, 0);
        std::copy(a.begin(), a.begin() + std::min<std::size_t>(a.size(), len), fa.begin());
        std::copy(b.begin(), b.begin() + std::min<std::size_t>(b.size(), len), fb.begin());
        plan.forward(fa.data());
        plan.forward(fb.data());
        plan.pointwise(fa.data(), fb.data(), fa.data());
        plan.inverse(fa.data());
        fa.resize(len);
        out = std::move(fa);
    }

    NttPrime prime_;
    NttPlan plan_;
    i64 nmax_;
    std::size_t size_;
    std::vector<u64> buf_a_, buf_b_, cached_;
};

// residues of h_j at the requested columns for a single prime
void chain_one_prime(const NttPrime& prime, i64 weight, i64 nmax,
                     const IntegerSeries& e4, const IntegerSeries& e6,
                     const std::vector<i64>& cols, std::vector<std::vector<u64>>& out) {
    i64 d = dim_cusp(weight);
    auto mons = cusp_monomials(weight);
    int logn = 1;
    while ((i64(1) << logn) < 2 * nmax + 1) ++logn;
    PrimeChain chain(prime, logn, nmax);
    u64 p = prime.p;

    auto reduce = [&](const IntegerSeries& s) {
        std::vector<u64> r(s.c.size());
        for (std::size_t i = 0; i < s.c.size(); ++i)
            r[i] = mpz_fdiv_ui(s.c[i].get_mpz_t(), p);
        return r;
    };
    std::vector<u64> E4 = reduce(e4), E6 = reduce(e6);

    std::vector<u64> E4sq, E4cb, E6sq, Delta(nmax + 1), tmp;
    chain.mul(E4, E4, E4sq);
    chain.mul(E4sq, E4, E4cb);
    chain.mul(E6, E6, E6sq);
    u64 inv1728 = invmod(1728 % p, p);
    for (i64 n = 0; n <= nmax; ++n) {
        u64 diff = E4cb[n] >= E6sq[n] ? E4cb[n] - E6sq[n] : E4cb[n] + p - E6sq[n];
        Delta[n] = mulmod(diff, inv1728, p);
    }

    // Y = Delta * E4^{-3}; ratio of integer series with unit constant term,
    // so Y itself has integer coefficients and reductions commute.
    std::vector<u64> invE4cb, Y;
    chain.invert(E4cb, invE4cb);
    chain.mul(Delta, invE4cb, Y);

    // h_1 = Delta * E4^{e_1} * E6^{eps}
    std::vector<u64> h = Delta;
    i64 e1 = mons[0].e4_power;
    if (e1 > 0) {
        std::vector<u64> acc, base = E4;
        bool have = false;
        i64 ee = e1;
        while (ee) {
            if (ee & 1) {
                if (have) {
                    chain.mul(acc, base, acc);
                } else {
                    acc = base;
                    have = true;
                }
            }
            ee >>= 1;
            if (ee) chain.mul(base, base, base);
        }
        chain.mul(h, acc, h);
    }
    if (mons[0].e6_power == 1) chain.mul(h, E6, h);

    chain.set_cached(Y);
    out.assign(d, std::vector<u64>(cols.size()));
    for (i64 j = 1; j <= d; ++j) {
        for (std::size_t ci = 0; ci < cols.size(); ++ci)
            out[j - 1][ci] = h[cols[ci]];
        if (j < d) chain.mul_cached(h, h);
    }
}

ColumnData eigen_columns(i64 weight, i64 nmax, const std::vector<i64>& cols) {
    ColumnData data;
    data.cols = cols;
    i64 d = dim_cusp(weight);
    IntegerSeries e4 = eisenstein_qexp(4, nmax).series;
    IntegerSeries e6 = eisenstein_qexp(6, nmax).series;

    // empirical coefficient bound |h_j[n]| <= n^((k-1)/2) * n * 2^80,
    // certified below by held-out primes
    double bound_bits =
        0.5 * (weight - 1) * std::log2(static_cast<double>(std::max<i64>(nmax, 2))) +
        std::log2(static_cast<double>(std::max<i64>(nmax, 2))) + 80.0;
    std::size_t nprimes = static_cast<std::size_t>(bound_bits / 61.0) + 1;
    const std::size_t holdout = 3;

    for (int attempt = 0; attempt < 4; ++attempt) {
        std::size_t total = nprimes + holdout;
        const auto& pool = ntt_prime_pool(total);
        std::vector<std::vector<std::vector<u64>>> residues(total);
        for (std::size_t k = 0; k < total; ++k)
            chain_one_prime(pool[k], weight, nmax, e4, e6, cols, residues[k]);

        ColumnCrt crt(nprimes);
        data.h.assign(d, std::vector<mpz_class>(cols.size()));
        std::vector<u64> res(nprimes), digits;
        bool ok = true;
        for (i64 j = 0; j < d && ok; ++j) {
            for (std::size_t ci = 0; ci < cols.size() && ok; ++ci) {
                for (std::size_t k = 0; k < nprimes; ++k) res[k] = residues[k][j][ci];
                crt.reconstruct(res.data(), digits, data.h[j][ci]);
                for (std::size_t k = 0; k < holdout; ++k) {
                    u64 hp = pool[nprimes + k].p;
                    u64 want = residues[nprimes + k][j][ci];
                    u64 got = mpz_fdiv_ui(data.h[j][ci].get_mpz_t(), hp);
                    if (got != want) { ok = false; break; }
                }
            }
        }
        if (ok) return data;
        nprimes = nprimes + nprimes / 2 + 2;  // escalate and retry
    }
    throw InternalError("eigen_columns: CRT verification kept failing");
}

// ----------------------------------------------------------- exact matrices

std::vector<std::vector<mpz_class>> hecke_matrix_z(i64 weight, u64 p, i64 nmax) {
    i64 d = dim_cusp(weight);
    if (d == 0) return {};
    if (nmax < static_cast<i64>(p) * d)
        throw RangeError("hecke_matrix: need nmax >= p*dim", static_cast<i64>(p) * d);
    auto basis = miller_basis(weight, nmax);
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p),
                  static_cast<unsigned long>(weight - 1));
    std::vector<std::vector<mpz_class>> m(d, std::vector<mpz_class>(d));
    for (i64 i = 1; i <= d; ++i)
        for (i64 j = 1; j <= d; ++j) {
            mpz_class v = basis[j - 1].c[static_cast<std::size_t>(p * i)];
            if (i % static_cast<i64>(p) == 0)
                v += pk * basis[j - 1].c[static_cast<std::size_t>(i / static_cast<i64>(p))];
            m[i - 1][j - 1] = v;
        }
    return m;
}

// char poly of an exact integer matrix by Faddeev-LeVerrier; returns
// monic coefficients c[0..d] with p(x) = sum c[i] x^i, c[d] = 1.
std::vector<mpz_class> char_poly(const std::vector<std::vector<mpz_class>>& m) {
    i64 d = static_cast<i64>(m.size());
    std::vector<std::vector<mpz_class>> mk(d, std::vector<mpz_class>(d, 0));
    std::vector<mpz_class> c(d + 1, 0);
    c[d] = 1;
    // M_1 = M; c_{d-1} = -tr(M_1); M_{k+1} = M (M_k + c_{d-k} I)
    std::vector<std::vector<mpz_class>> cur = m;
    for (i64 k = 1; k <= d; ++k) {
        mpz_class tr = 0;
        for (i64 i = 0; i < d; ++i) tr += cur[i][i];
        mpz_class ck;
        mpz_divexact_ui(ck.get_mpz_t(), tr.get_mpz_t(), static_cast<unsigned long>(k));
        ck = -ck;
        c[d - k] = ck;
        if (k == d) break;
        for (i64 i = 0; i < d; ++i) cur[i][i] += ck;
        // cur <- m * cur
        std::vector<std::vector<mpz_class>> next(d, std::vector<mpz_class>(d, 0));
        for (i64 i = 0; i < d; ++i)
            for (i64 l = 0; l < d; ++l) {
                if (m[i][l] == 0) continue;
                for (i64 j = 0; j < d; ++j)
                    if (cur[l][j] != 0)
                        mpz_addmul(next[i][j].get_mpz_t(), m[i][l].get_mpz_t(),
                                   cur[l][j].get_mpz_t());
            }
        cur = std::move(next);
    }
    return c;
}

// ---------------------------------------------------------- numeric route

struct MpfContext {
    explicit MpfContext(unsigned long bits) : old_(mpf_get_default_prec()) {
        mpf_set_default_prec(bits);
    }
    ~MpfContext() { mpf_set_default_prec(old_); }
    unsigned long old_;
};

// Solve (A - mu I) x = b by Gaussian elimination with partial pivoting.
std::vector<mpf_class> shifted_solve(const std::vector<std::vector<mpf_class>>& a,
                                     const mpf_class& mu, std::vector<mpf_class> b) {
    i64 d = static_cast<i64>(a.size());
    std::vector<std::vector<mpf_class>> w(d, std::vector<mpf_class>(d));
    for (i64 i = 0; i < d; ++i)
        for (i64 j = 0; j < d; ++j) {
            w[i][j] = a[i][j];
            if (i == j) w[i][j] -= mu;
        }
    for (i64 col = 0; col < d; ++col) {
        i64 piv = col;
        for (i64 r = col + 1; r < d; ++r)
            if (abs(w[r][col]) > abs(w[piv][col])) piv = r;
        std::swap(w[piv], w[col]);
        std::swap(b[piv], b[col]);
        if (w[col][col] == 0) w[col][col] = mpf_class(1e-300);  // near-singular by design
        for (i64 r = col + 1; r < d; ++r) {
            mpf_class f = w[r][col] / w[col][col];
            if (f == 0) continue;
            for (i64 j = col; j < d; ++j) w[r][j] -= f * w[col][j];
            b[r] -= f * b[col];
        }
    }
    std::vector<mpf_class> x(d);
    for (i64 r = d - 1; r >= 0; --r) {
        mpf_class s = b[r];
        for (i64 j = r + 1; j < d; ++j) s -= w[r][j] * x[j];
        x[r] = s / w[r][r];
    }
    return x;
}

std::vector<EigenformTable> eigenforms_numeric(i64 weight, i64 nmax) {
    i64 d = dim_cusp(weight);
    double w_half = 0.5 * (weight - 1);

    // exact T_2 matrix on the echelon basis (small window)
    i64 small_nmax = 2 * d + 2;
    auto M = hecke_matrix_z(weight, 2, small_nmax);
    auto cp = char_poly(M);

    // normalized char poly q(y) = p(2^w y) / 2^(w d): coefficients
    // cp[j] * 2^(w (j - d)), all of moderate size since roots are lambda(2)
    std::vector<double> qc(d + 1);
    for (i64 j = 0; j <= d; ++j) {
        long e2 = 0;
        double mant = cp[j] == 0 ? 0.0 : mpz_get_d_2exp(&e2, cp[j].get_mpz_t());
        qc[j] = mant * std::pow(2.0, static_cast<double>(e2) + w_half * (j - d));
    }
    // companion matrix seeds (roots are real, in [-2, 2])
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
    for (i64 i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (i64 i = 0; i < d; ++i) comp(i, d - 1) = -qc[i] / qc[d];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
    std::vector<double> seeds(d);
    for (i64 i = 0; i < d; ++i) seeds[i] = es.eigenvalues()[i].real();
    std::sort(seeds.begin(), seeds.end());

    // working precision: covers the echelon-coordinate cancellation
    unsigned long prec = static_cast<unsigned long>(
        w_half * std::log2(2.0 * d + 2.0) + 320.0);
    MpfContext ctx(prec);

    // polish the normalized roots with Newton on the exact char poly:
    // p(x)/2^{wd} at x = 2^w y
    auto eval_p = [&](const mpf_class& x, mpf_class& val, mpf_class& der) {
        val = 0;
        der = 0;
        for (i64 j = d; j >= 0; --j) {
            der = der * x + val;
            val = val * x + mpf_class(cp[j]);
        }
    };
    mpf_class two_w;  // 2^w = sqrt(2^(k-1))
    {
        mpz_class t;
        mpz_ui_pow_ui(t.get_mpz_t(), 2, static_cast<unsigned long>(weight - 1));
        two_w = sqrt(mpf_class(t));
    }
    std::vector<mpf_class> roots(d);
    for (i64 i = 0; i < d; ++i) {
        mpf_class x = mpf_class(seeds[i]) * two_w;
        for (int it = 0; it < 60; ++it) {
            mpf_class val, der;
            eval_p(x, val, der);
            if (der == 0) break;
            mpf_class step = val / der;
            x -= step;
            if (abs(step) <= abs(x) * mpf_class(std::ldexp(1.0, -static_cast<int>(prec) + 8)))
                break;
        }
        roots[i] = x;
    }
    for (i64 i = 1; i < d; ++i)
        if (roots[i] == roots[i - 1])
            throw InternalError("eigenforms: repeated T_2 eigenvalue after polishing");

    // columns at primes (exact)
    std::vector<i64> cols;
    for (u32 p : primes_upto(static_cast<u64>(nmax))) cols.push_back(static_cast<i64>(p));
    ColumnData columns = eigen_columns(weight, nmax, cols);

    // change of basis: echelon g = C * h with C = H^{-1}, H[i][j] = h_j[i]
    // (unit lower triangular).  We fold C into the eigenvector instead.
    IntegerSeries e4s = eisenstein_qexp(4, small_nmax).series;
    std::vector<IntegerSeries> h_small;
    {
        IntegerSeries e6s = eisenstein_qexp(6, small_nmax).series;
        IntegerSeries delta = delta_qexp(small_nmax);
        auto mons = cusp_monomials(weight);
        IntegerSeries dp = delta;
        for (i64 j = 1; j <= d; ++j) {
            if (j > 1) dp = series_mul(dp, delta);
            IntegerSeries t = dp;
            i64 e = mons[j - 1].e4_power;
            if (e > 0) {
                IntegerSeries acc, base = e4s;
                bool have = false;
                while (e) {
                    if (e & 1) {
                        acc = have ? series_mul(acc, base) : base;
                        have = true;
                    }
                    e >>= 1;
                    if (e) base = series_mul(base, base);
                }
                t = series_mul(t, acc);
            }
            if (mons[j - 1].e6_power == 1) t = series_mul(t, e6s);
            h_small.push_back(std::move(t));
        }
    }

    std::vector<std::vector<mpf_class>> A(d, std::vector<mpf_class>(d));
    for (i64 i = 0; i < d; ++i)
        for (i64 j = 0; j < d; ++j) A[i][j] = mpf_class(M[i][j]);

    std::vector<EigenformTable> tables;
    for (i64 r = 0; r < d; ++r) {
        // inverse iteration at the polished eigenvalue (one refinement pass
        // after the seeded solve)
        std::vector<mpf_class> v(d, 1);
        for (int pass = 0; pass < 2; ++pass) {
            v = shifted_solve(A, roots[r], v);
            mpf_class mx = 0;
            for (auto& x : v)
                if (abs(x) > mx) mx = abs(x);
            if (mx == 0) throw InternalError("eigenforms: inverse iteration collapsed");
            for (auto& x : v) x /= mx;
        }
        if (v[0] == 0) throw InternalError("eigenforms: vanishing first coefficient");
        for (i64 i = d - 1; i >= 0; --i) v[i] /= v[0];  // a(1) = 1

        // h-basis coordinates c = C^T-fold: f = sum_i v_i g_i = sum_j c_j h_j
        // via back-substitution against the unit-triangular H on the fly:
        // determine c from matching coefficients 1..d of f.
        std::vector<mpf_class> c(d);
        for (i64 j = 0; j < d; ++j) {
            // coefficient of q^{j+1} in f is v[j]; subtract known h-parts
            mpf_class s = v[j];
            for (i64 l = 0; l < j; ++l)
                s -= c[l] * mpf_class(h_small[l].c[static_cast<std::size_t>(j + 1)]);
            c[j] = s;  // h_j leading coefficient is 1
        }

        EigenformTable t;
        t.weight = weight;
        t.nmax = nmax;
        t.exact = false;
        t.lambda.assign(nmax + 1, 0.0);
        // small-window lambdas from the echelon coordinates
        for (i64 n = 1; n <= std::min<i64>(d, nmax); ++n) {
            mpz_class pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(n),
                          static_cast<unsigned long>(weight - 1));
            mpf_class lam = v[n - 1] / sqrt(mpf_class(pw));
            t.lambda[n] = lam.get_d();
        }
        // prime columns
        for (std::size_t ci = 0; ci < columns.cols.size(); ++ci) {
            i64 p = columns.cols[ci];
            if (p <= d) continue;
            mpf_class f = 0;
            for (i64 j = 0; j < d; ++j) f += c[j] * mpf_class(columns.h[j][ci]);
            mpz_class pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(p),
                          static_cast<unsigned long>(weight - 1));
            mpf_class lam = f / sqrt(mpf_class(pw));
            t.lambda[p] = lam.get_d();
        }
        hecke_fill_lambda(t.lambda, nmax);
        tables.push_back(std::move(t));
    }

    std::sort(tables.begin(), tables.end(), [](const EigenformTable& x, const EigenformTable& y) {
        double l2x = x.lambda[2], l2y = y.lambda[2];
        if (std::abs(l2x - l2y) > 1e-12) return l2x < l2y;
        return x.lambda[3] < y.lambda[3];
    });
    for (i64 i = 0; i < d; ++i) tables[i].index = i;
    return tables;
}

EigenformTable eigenform_exact(i64 weight, i64 nmax) {
    auto mons = cusp_monomials(weight);
    IntegerSeries e4 = eisenstein_qexp(4, nmax).series;
    IntegerSeries f = delta_qexp(nmax);
    i64 e = mons[0].e4_power;
    if (e > 0) {
        IntegerSeries acc, base = e4;
        bool have = false;
        while (e) {
            if (e & 1) {
                acc = have ? series_mul(acc, base) : base;
                have = true;
            }
            e >>= 1;
            if (e) base = series_mul(base, base);
        }
        f = series_mul(f, acc);
    }
    if (mons[0].e6_power == 1) {
        IntegerSeries e6 = eisenstein_qexp(6, nmax).series;
        f = series_mul(f, e6);
    }
    EigenformTable t;
    t.weight = weight;
    t.index = 0;
    t.nmax = nmax;
    t.exact = true;
    t.a.assign(nmax + 1, 0);
    for (i64 n = 1; n <= nmax; ++n) t.a[n] = f.c[n];
    t.lambda.assign(nmax + 1, 0.0);
    for (i64 n = 1; n <= nmax; ++n) t.lambda[n] = lambda_from_exact(t.a[n], n, weight);
    return t;
}

std::string cache_file(i64 weight, i64 index, i64 nmax, const std::string& dir) {
    return dir + "/eigenform_w" + std::to_string(weight) + "_i" + std::to_string(index) +
           "_n" + std::to_string(nmax) + ".json";
}

std::string cache_payload_string(const EigenformTable& t, const std::vector<std::string>& coeffs) {
    std::string s = std::to_string(kCacheVersion) + "|" + std::to_string(t.weight) + "|" +
                    std::to_string(t.index) + "|" + std::to_string(t.nmax) + "|" +
                    (t.exact ? "1" : "0");
    for (const auto& c : coeffs) {
        s += "|";
        s += c;
    }
    return s;
}

}  // namespace

std::vector<std::vector<mpq_class>> hecke_matrix(i64 weight, u64 p, i64 nmax) {
    if (weight < 12 || weight % 2 != 0)
        throw ConfigError("hecke_matrix: weight must be even and >= 12");
    auto z = hecke_matrix_z(weight, p, nmax);
    std::vector<std::vector<mpq_class>> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        for (auto& v : z[i]) out[i].emplace_back(v);
    return out;
}

std::vector<EigenformTable> eigenforms(i64 weight, i64 nmax, const std::string& cache_dir) {
    if (weight % 2 != 0 || weight < 12)
        throw ConfigError("eigenforms: weight must be even and >= 12");
    if (nmax < 2) throw ConfigError("eigenforms: nmax must be >= 2");
    i64 d = dim_cusp(weight);
    if (d == 0) return {};

    if (!cache_dir.empty()) {
        std::vector<EigenformTable> cached;
        bool all = true;
        for (i64 i = 0; i < d; ++i) {
            auto t = cache_load(weight, i, nmax, cache_dir);
            if (!t) { all = false; break; }
            cached.push_back(std::move(*t));
        }
        if (all) return cached;
    }

    std::vector<EigenformTable> tables;
    if (d == 1) {
        tables.push_back(eigenform_exact(weight, nmax));
    } else {
        tables = eigenforms_numeric(weight, nmax);
    }
    if (!cache_dir.empty())
        for (const auto& t : tables) cache_store(t, cache_dir);
    return tables;
}

double normalized_lambda(const EigenformTable& t, i64 n) { return t.lambda_at(n); }

void cache_store(const EigenformTable& t, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<std::string> coeffs;
    coeffs.reserve(t.nmax);
    for (i64 n = 1; n <= t.nmax; ++n)
        coeffs.push_back(t.exact ? t.a[n].get_str() : fmt_double(t.lambda[n]));
    nlohmann::json j;
    j["schema"] = "qprog-eigenform-cache";
    j["version"] = kCacheVersion;
    j["weight"] = t.weight;
    j["index"] = t.index;
    j["nmax"] = t.nmax;
    j["exact"] = t.exact;
    j["coeffs"] = coeffs;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(cache_payload_string(t, coeffs))));
    j["checksum"] = buf;

    std::string path = cache_file(t.weight, t.index, t.nmax, dir);
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw ConfigError("cache_store: cannot write " + tmp);
        out << j.dump();
    }
    fs::rename(tmp, path);  // atomic publish
}

std::optional<EigenformTable> cache_load(i64 weight, i64 index, i64 nmax,
                                         const std::string& dir) {
    std::string path = cache_file(weight, index, nmax, dir);
    std::ifstream in(path);
    if (!in) return std::nullopt;  // absent, not an error
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception&) {
        throw IngestError("eigenform cache: unparseable file " + path);
    }
    if (!j.contains("version") || j["version"].get<int>() != kCacheVersion)
        return std::nullopt;  // version mismatch: recompute, never misread

    EigenformTable t;
    t.weight = j.at("weight").get<i64>();
    t.index = j.at("index").get<i64>();
    t.nmax = j.at("nmax").get<i64>();
    t.exact = j.at("exact").get<bool>();
    std::vector<std::string> coeffs = j.at("coeffs").get<std::vector<std::string>>();
    if (static_cast<i64>(coeffs.size()) != t.nmax)
        throw IngestError("eigenform cache: coefficient count mismatch in " + path);

    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(cache_payload_string(t, coeffs))));
    if (j.at("checksum").get<std::string>() != buf)
        throw IngestError("eigenform cache: checksum mismatch in " + path);
    if (t.weight != weight || t.index != index || t.nmax != nmax)
        return std::nullopt;

    t.lambda.assign(t.nmax + 1, 0.0);
    if (t.exact) {
        t.a.assign(t.nmax + 1, 0);
        for (i64 n = 1; n <= t.nmax; ++n) {
            t.a[n] = mpz_class(coeffs[n - 1]);
            t.lambda[n] = lambda_from_exact(t.a[n], n, t.weight);
        }
    } else {
        for (i64 n = 1; n <= t.nmax; ++n) t.lambda[n] = std::stod(coeffs[n - 1]);
    }
    return t;
}

}  // namespace qprog
