#include "ntt.hpp"

#include <mutex>

namespace qprog {

u64 mulmod(u64 a, u64 b, u64 p) {
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p);
}

u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

namespace {

bool miller_rabin(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

std::vector<u64> distinct_prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 p = 2; p * p <= n; p += (p == 2) ? 1 : 2) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

u64 find_primitive_root(u64 p) {
    auto qs = distinct_prime_factors(p - 1);
    for (u64 g = 2;; ++g) {
        bool ok = true;
        for (u64 q : qs) {
            if (powmod(g, (p - 1) / q, p) == 1) { ok = false; break; }
        }
        if (ok) return g;
    }
}

std::vector<NttPrime> g_pool;
std::mutex g_pool_mutex;
u64 g_next_candidate = 0;

inline u64 shoup_of(u64 w, u64 p) {
    return static_cast<u64>((static_cast<unsigned __int128>(w) << 64) / p);
}

// Shoup product: result ≡ a*w (mod p), result < 2p, for any a < 2^64, w < p.
inline u64 mul_shoup_lazy(u64 a, u64 w, u64 wsh, u64 p) {
    u64 q = static_cast<u64>((static_cast<unsigned __int128>(a) * wsh) >> 64);
    return a * w - q * p;
}

}  // namespace

const std::vector<NttPrime>& ntt_prime_pool(std::size_t count) {
    std::lock_guard<std::mutex> lock(g_pool_mutex);
    if (g_next_candidate == 0)
        g_next_candidate = ((1ULL << 62) - 1) >> 24;  // largest c with c*2^24+1 < 2^62
    while (g_pool.size() < count) {
        u64 p = (g_next_candidate << 24) + 1;
        --g_next_candidate;
        if (g_next_candidate == 0)
            throw InternalError("NTT prime pool exhausted");
        if (!miller_rabin(p)) continue;
        g_pool.push_back({p, find_primitive_root(p)});
    }
    return g_pool;
}

// Twiddles are packed per stage: forward stages run h = n/2, n/4, ..., 1 and
// stage h stores the h powers of a primitive 2h-th root; inverse stages run
// h = 1, ..., n/2 with inverse roots.  Values travel in [0, 2p) (Harvey-style
// lazy reduction) and are fully reduced only on the way out of inverse().
NttPlan::NttPlan(const NttPrime& prime, int logn) : p_(prime.p), logn_(logn) {
    if (logn < 0 || logn > 24) throw InternalError("NTT size out of range");
    n_ = std::size_t(1) << logn;
    std::size_t total = n_ > 1 ? n_ - 1 : 1;
    w_.resize(total);
    w_shoup_.resize(total);
    iw_.resize(total);
    iw_shoup_.resize(total);

    u64 w = powmod(prime.g, (p_ - 1) >> logn, p_);  // primitive n-th root
    u64 iw = invmod(w, p_);
    // forward: stage h = n/2 down to 1; root of order 2h is w^(n/2h)
    std::size_t off = 0;
    for (std::size_t h = n_ >> 1; h >= 1; h >>= 1) {
        u64 wh = powmod(w, (n_ >> 1) / h, p_);
        u64 cw = 1;
        for (std::size_t i = 0; i < h; ++i) {
            w_[off + i] = cw;
            w_shoup_[off + i] = shoup_of(cw, p_);
            cw = mulmod(cw, wh, p_);
        }
        off += h;
    }
    // inverse: stage h = 1 up to n/2
    off = 0;
    for (std::size_t h = 1; h <= (n_ >> 1); h <<= 1) {
        u64 wh = powmod(iw, (n_ >> 1) / h, p_);
        u64 cw = 1;
        for (std::size_t i = 0; i < h; ++i) {
            iw_[off + i] = cw;
            iw_shoup_[off + i] = shoup_of(cw, p_);
            cw = mulmod(cw, wh, p_);
        }
        off += h;
    }
    ninv_ = invmod(n_ % p_, p_);
    ninv_shoup_ = shoup_of(ninv_, p_);
}

// Gentleman-Sande: natural order in, bit-reversed out.  Inputs < 2p.
void NttPlan::forward(u64* a) const {
    const u64 p = p_;
    const u64 two_p = 2 * p;
    std::size_t off = 0;
    for (std::size_t h = n_ >> 1; h >= 1; h >>= 1) {
        const u64* wt = w_.data() + off;
        const u64* wst = w_shoup_.data() + off;
        for (std::size_t s = 0; s < n_; s += 2 * h) {
            u64* lo = a + s;
            u64* hi = a + s + h;
            for (std::size_t i = 0; i < h; ++i) {
                u64 x = lo[i];
                u64 y = hi[i];
                u64 sum = x + y;
                if (sum >= two_p) sum -= two_p;
                lo[i] = sum;
                hi[i] = mul_shoup_lazy(x + two_p - y, wt[i], wst[i], p);
            }
        }
        off += h;
    }
}

// Cooley-Tukey: bit-reversed in, natural out, scaled by 1/n, outputs < p.
void NttPlan::inverse(u64* a) const {
    const u64 p = p_;
    const u64 two_p = 2 * p;
    std::size_t off = 0;
    for (std::size_t h = 1; h <= (n_ >> 1); h <<= 1) {
        const u64* wt = iw_.data() + off;
        const u64* wst = iw_shoup_.data() + off;
        for (std::size_t s = 0; s < n_; s += 2 * h) {
            u64* lo = a + s;
            u64* hi = a + s + h;
            for (std::size_t i = 0; i < h; ++i) {
                u64 x = lo[i];
                u64 t = mul_shoup_lazy(hi[i], wt[i], wst[i], p);
                u64 sum = x + t;
                if (sum >= two_p) sum -= two_p;
                u64 diff = x + two_p - t;
                if (diff >= two_p) diff -= two_p;
                lo[i] = sum;
                hi[i] = diff;
            }
        }
        off += h;
    }
    for (std::size_t i = 0; i < n_; ++i) {
        u64 v = mul_shoup_lazy(a[i], ninv_, ninv_shoup_, p);
        if (v >= p) v -= p;
        a[i] = v;
    }
}

void NttPlan::pointwise(const u64* a, const u64* b, u64* c) const {
    const u64 p = p_;
    for (std::size_t i = 0; i < n_; ++i)
        c[i] = mulmod(a[i], b[i], p);
}

}  // namespace qprog
