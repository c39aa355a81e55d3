#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qprog {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// Error taxonomy mirrored by the C API status codes.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RangeError : std::runtime_error {
    i64 required_nmax = 0;
    explicit RangeError(const std::string& msg, i64 required = 0)
        : std::runtime_error(msg), required_nmax(required) {}
};
struct IngestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic 64-bit generator (splitmix64).  We do not use std::
// distributions anywhere: sampling goes through the helpers below so
// sequences are identical across platforms and thread counts.
struct Rng {
    u64 state;
    explicit Rng(u64 seed) : state(seed) {}
    u64 next() {
        u64 z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    u64 below(u64 n) { return n ? next() % n : 0; }
    // uniform in [lo, hi] inclusive
    i64 range(i64 lo, i64 hi) { return lo + static_cast<i64>(below(static_cast<u64>(hi - lo + 1))); }
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// FNV-1a, used for cache-file integrity checksums.
u64 fnv1a64(const void* data, std::size_t len);
u64 fnv1a64(const std::string& s);

// Smallest-prime-factor sieve; grows on demand.  factorize() returns
// (prime, exponent) pairs in increasing prime order.
class FactorSieve {
public:
    void ensure(u64 n);
    std::vector<std::pair<u64, int>> factorize(u64 n) const;
    bool is_prime(u64 n) const;
    // primes p <= n only (the sieve itself may extend further)
    std::vector<u32> primes_upto(u64 n);

private:
    std::vector<u32> spf_;   // spf_[i] = smallest prime factor of i, i < spf_.size()
    std::vector<u32> primes_;
};

// Shared process-wide sieve (lazily grown, guarded by a mutex on growth).
FactorSieve& global_sieve();
std::vector<std::pair<u64, int>> factorize(u64 n);
std::vector<u32> primes_upto(u64 n);

// sigma_m(n) over u64 divisors; caller guarantees no overflow.
u64 divisor_count(u64 n);

// Deterministic block-parallel map: calls fn(begin, end) over fixed-size
// blocks.  The block layout depends only on `n` and `block`, never on the
// thread count, so any order-sensitive combine done per block stays
// reproducible.  With threads <= 1 this runs inline.
void parallel_blocks(i64 n, i64 block, int threads,
                     const std::function<void(i64, i64)>& fn);

// Compensated accumulator; ascending-index use keeps reports reproducible.
struct Kahan {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// Format a double with round-trip precision (used by report emitters so
// byte-identical output is a function of the value alone).
std::string fmt_double(double x);

}  // namespace qprog
