#pragma once

#include <vector>

#include "util.hpp"

namespace qprog {

// Number-theoretic transforms modulo word-size primes p = c*2^24 + 1.
// Forward transform is decimation-in-frequency (natural order in,
// bit-reversed out); the inverse is decimation-in-time (bit-reversed in,
// natural out), so no explicit bit-reversal pass is needed and pointwise
// products are taken in the bit-reversed domain.

struct NttPrime {
    u64 p;      // prime, < 2^62, p ≡ 1 (mod 2^24)
    u64 g;      // primitive root mod p
};

// The first `count` primes of the fixed pool (generated deterministically,
// descending from 2^62).
const std::vector<NttPrime>& ntt_prime_pool(std::size_t count);

u64 mulmod(u64 a, u64 b, u64 p);
u64 powmod(u64 a, u64 e, u64 p);
u64 invmod(u64 a, u64 p);

// Twiddle tables for one (prime, size) pair.  Shoup precomputation: each
// root w is stored with w' = floor(w * 2^64 / p) so butterfly
// multiplications avoid the 128-bit division.
class NttPlan {
public:
    NttPlan(const NttPrime& prime, int logn);

    u64 prime() const { return p_; }
    std::size_t size() const { return n_; }

    // in-place; natural -> bit-reversed
    void forward(u64* a) const;
    // in-place; bit-reversed -> natural, includes the 1/n scaling
    void inverse(u64* a) const;
    // c[i] = a[i] * b[i] mod p (bit-reversed domain)
    void pointwise(const u64* a, const u64* b, u64* c) const;

private:
    u64 p_;
    std::size_t n_;
    int logn_;
    u64 ninv_, ninv_shoup_;
    // roots in block order: stage s (half-size n>>s+1 ... ) concatenated
    std::vector<u64> w_, w_shoup_;    // forward
    std::vector<u64> iw_, iw_shoup_;  // inverse
};

}  // namespace qprog
