#include "util.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <mutex>
#include <thread>

namespace qprog {

u64 fnv1a64(const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    u64 h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

u64 fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

void FactorSieve::ensure(u64 n) {
    if (n < 2) n = 2;
    if (spf_.size() > n) return;
    u64 size = std::max<u64>(n + 1, 1024);
    spf_.assign(size, 0);
    primes_.clear();
    for (u64 i = 2; i < size; ++i) {
        if (spf_[i] == 0) {
            spf_[i] = static_cast<u32>(i);
            primes_.push_back(static_cast<u32>(i));
        }
        for (u32 p : primes_) {
            if (p > spf_[i] || i * p >= size) break;
            spf_[i * p] = p;
        }
    }
}

std::vector<std::pair<u64, int>> FactorSieve::factorize(u64 n) const {
    std::vector<std::pair<u64, int>> out;
    if (n < 2) return out;
    if (n < spf_.size()) {
        while (n > 1) {
            u64 p = spf_[n];
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.emplace_back(p, e);
        }
        return out;
    }
    // trial division fallback; fine for the 64-bit sizes this project meets
    for (u64 p = 2; p * p <= n; p += (p == 2) ? 1 : 2) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.emplace_back(p, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

bool FactorSieve::is_prime(u64 n) const {
    if (n < 2) return false;
    if (n < spf_.size()) return spf_[n] == n;
    auto f = factorize(n);
    return f.size() == 1 && f[0].second == 1;
}

std::vector<u32> FactorSieve::primes_upto(u64 n) {
    ensure(n);
    auto end = std::upper_bound(primes_.begin(), primes_.end(), static_cast<u32>(std::min<u64>(n, UINT32_MAX)));
    return std::vector<u32>(primes_.begin(), end);
}

FactorSieve& global_sieve() {
    static FactorSieve sieve;
    return sieve;
}

namespace {
std::mutex g_sieve_mutex;
}

std::vector<std::pair<u64, int>> factorize(u64 n) {
    {
        std::lock_guard<std::mutex> lock(g_sieve_mutex);
        global_sieve().ensure(std::min<u64>(n, 1u << 22));
    }
    return global_sieve().factorize(n);
}

std::vector<u32> primes_upto(u64 n) {
    std::lock_guard<std::mutex> lock(g_sieve_mutex);
    return global_sieve().primes_upto(n);
}

u64 divisor_count(u64 n) {
    u64 t = 1;
    for (auto& [p, e] : factorize(n)) {
        (void)p;
        t *= static_cast<u64>(e + 1);
    }
    return t;
}

void parallel_blocks(i64 n, i64 block, int threads,
                     const std::function<void(i64, i64)>& fn) {
    if (n <= 0) return;
    if (block <= 0) block = 1;
    i64 nblocks = (n + block - 1) / block;
    if (threads <= 1 || nblocks <= 1) {
        for (i64 b = 0; b < nblocks; ++b)
            fn(b * block, std::min(n, (b + 1) * block));
        return;
    }
    std::atomic<i64> next{0};
    auto worker = [&]() {
        for (;;) {
            i64 b = next.fetch_add(1);
            if (b >= nblocks) break;
            fn(b * block, std::min(n, (b + 1) * block));
        }
    };
    int nt = std::min<int>(threads, static_cast<int>(nblocks));
    std::vector<std::thread> pool;
    pool.reserve(nt - 1);
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace qprog
