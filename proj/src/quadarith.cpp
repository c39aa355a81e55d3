#include "quadarith.hpp"

#include <algorithm>

#include "ntt.hpp"  // mulmod/powmod

namespace qprog {

bool is_fundamental(i64 D) {
    if (D == 1 || D == 0) return false;
    auto squarefree = [](i64 m) {
        u64 a = static_cast<u64>(m < 0 ? -m : m);
        for (auto& [p, e] : factorize(a))
            if (e >= 2) { (void)p; return false; }
        return true;
    };
    i64 r = ((D % 4) + 4) % 4;
    if (r == 1) return squarefree(D);
    if (r == 0) {
        i64 m = D / 4;
        i64 rm = ((m % 4) + 4) % 4;
        if (rm != 2 && rm != 3) return false;
        return squarefree(m);
    }
    return false;
}

namespace {

// Jacobi symbol (a|n) for odd n > 0.
int jacobi(i64 a, u64 n) {
    a %= static_cast<i64>(n);
    if (a < 0) a += static_cast<i64>(n);
    u64 ua = static_cast<u64>(a);
    int t = 1;
    while (ua != 0) {
        while ((ua & 1) == 0) {
            ua >>= 1;
            u64 r = n % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(ua, n);
        if ((ua % 4 == 3) && (n % 4 == 3)) t = -t;
        ua %= n;
    }
    return n == 1 ? t : 0;
}

}  // namespace

int kronecker(i64 D, i64 n) {
    if (n == 0) return (D == 1 || D == -1) ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        if (D < 0) sign = -sign;
        n = -n;
    }
    u64 un = static_cast<u64>(n);
    int twos = 0;
    while ((un & 1) == 0) { un >>= 1; ++twos; }
    int t = sign;
    if (twos > 0) {
        if (D % 2 == 0) return 0;
        i64 r = ((D % 8) + 8) % 8;
        int two_symbol = (r == 1 || r == 7) ? 1 : -1;  // (D|2)
        if (twos % 2 == 1 && two_symbol == -1) t = -t;
    }
    return t * jacobi(D % static_cast<i64>(un == 1 ? 1 : un), un);
}

SplitType splitting(const QuadField& field, u64 p) {
    if (p == 0) throw ConfigError("splitting: p must be a prime");
    if (static_cast<u64>(field.D) % p == 0) return SplitType::Ramified;
    return kronecker(field.D, static_cast<i64>(p)) == 1 ? SplitType::Split : SplitType::Inert;
}

bool admissible_discriminant(i64 D, const std::vector<u64>& ram_set) {
    if (D <= 1 || !is_fundamental(D)) return false;  // D > 0: (chi_D)_infty trivial
    QuadField f(D);
    for (u64 p : ram_set)
        if (splitting(f, p) != SplitType::Inert) return false;
    return true;
}

bool od_parity_ok(i64 D, i64 n, i64 l) {
    if (D % 2 == 0) return n % 2 == 0;
    return ((n - l) % 2) == 0;
}

i64 QuadInteger::norm() const {
    __int128 v = static_cast<__int128>(n) * n - static_cast<__int128>(field.D) * l * l;
    if (v % 4 != 0) throw InternalError("QuadInteger::norm: non-integral norm");
    v /= 4;
    if (v > static_cast<__int128>(INT64_MAX) || v < static_cast<__int128>(INT64_MIN))
        throw RangeError("QuadInteger::norm overflows 64 bits");
    return static_cast<i64>(v);
}

QuadPoly::QuadPoly(const mpq_class& a_, const mpq_class& b_, const mpq_class& c_)
    : a(a_), b(b_), c(c_) {
    a.canonicalize();
    b.canonicalize();
    c.canonicalize();
    if (a == 0) throw ConfigError("QuadPoly: leading coefficient must be nonzero");
    mpq_class twoa = 2 * a, aplusb = a + b;
    if (c.get_den() != 1 || twoa.get_den() != 1 || aplusb.get_den() != 1)
        throw ConfigError("QuadPoly: not integer-valued (need c, a+b, 2a in Z)");
}

mpq_class QuadPoly::norm_inf() const {
    mpq_class m = abs(a);
    if (abs(b) > m) m = abs(b);
    if (abs(c) > m) m = abs(c);
    return m;
}

mpz_class QuadPoly::eval(i64 x) const {
    mpq_class v = a * mpq_class(x) * mpq_class(x) + b * mpq_class(x) + c;
    v.canonicalize();
    if (v.get_den() != 1) throw InternalError("QuadPoly::eval: non-integer value");
    return v.get_num();
}

bool QuadPoly::has_integer_coeffs() const {
    return a.get_den() == 1 && b.get_den() == 1 && c.get_den() == 1;
}

std::string QuadPoly::to_string() const {
    return a.get_str() + "," + b.get_str() + "," + c.get_str();
}

bool qp_is_irreducible(const QuadPoly& q) {
    mpq_class disc = q.b * q.b - 4 * q.a * q.c;
    disc.canonicalize();
    if (disc < 0) return true;
    // disc = num/den (den > 0): a rational square iff both parts are squares
    return !(mpz_perfect_square_p(disc.get_num().get_mpz_t()) &&
             mpz_perfect_square_p(disc.get_den().get_mpz_t()));
}

bool sqrt_mod(u64 a, u64 p, u64& root) {
    a %= p;
    if (p == 2) { root = a; return true; }
    if (a == 0) { root = 0; return true; }
    if (powmod(a, (p - 1) / 2, p) != 1) return false;
    if (p % 4 == 3) {
        root = powmod(a, (p + 1) / 4, p);
        return true;
    }
    // Tonelli-Shanks
    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) { q >>= 1; ++s; }
    u64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    u64 m = static_cast<u64>(s);
    u64 c = powmod(z, q, p);
    u64 t = powmod(a, q, p);
    u64 r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) { tt = mulmod(tt, tt, p); ++i; }
        u64 b = c;
        for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    root = r;
    return true;
}

namespace {

u64 count_roots_exhaustive(const mpz_class& a, const mpz_class& b, const mpz_class& c, u64 mod) {
    if (mod > (1u << 24))
        throw RangeError("root_count: exhaustive fallback modulus too large");
    u64 am = mpz_fdiv_ui(a.get_mpz_t(), mod);
    u64 bm = mpz_fdiv_ui(b.get_mpz_t(), mod);
    u64 cm = mpz_fdiv_ui(c.get_mpz_t(), mod);
    u64 count = 0;
    for (u64 x = 0; x < mod; ++x) {
        u64 v = (mulmod(mulmod(x, x, mod), am, mod) + mulmod(bm, x, mod) + cm) % mod;
        if (v == 0) ++count;
    }
    return count;
}

}  // namespace

u64 root_count(const QuadPoly& q, u64 n) {
    if (n == 0) throw ConfigError("root_count: modulus must be positive");
    if (!q.has_integer_coeffs())
        throw ConfigError("root_count: integer coefficients required");
    if (n == 1) return 1;
    const mpz_class a = q.a.get_num(), b = q.b.get_num(), c = q.c.get_num();
    mpz_class disc = b * b - 4 * a * c;

    u64 total = 1;
    for (auto& [p, e] : factorize(n)) {
        u64 pe = 1;
        for (int i = 0; i < e; ++i) pe *= p;
        u64 cnt;
        bool degenerate = (p <= 7) || mpz_fdiv_ui(a.get_mpz_t(), p) == 0 ||
                          mpz_fdiv_ui(disc.get_mpz_t(), p) == 0;
        if (degenerate) {
            cnt = count_roots_exhaustive(a, b, c, pe);
        } else {
            // p odd, p coprime to 2a and disc: roots mod p are simple, each
            // lifts uniquely (Hensel), so the count is stable in e.
            u64 d = mpz_fdiv_ui(disc.get_mpz_t(), p);
            u64 s;
            cnt = sqrt_mod(d, p, s) ? 2 : 0;
        }
        total *= cnt;
        if (total == 0) break;
    }
    return total;
}

u64 IdealFactorization::norm() const {
    u64 v = 1;
    for (const auto& f : factors) {
        int deg = (f.slot == PrimeSlot::Inert) ? 2 : 1;
        for (int i = 0; i < deg * f.e; ++i) {
            if (v > UINT64_MAX / f.p) throw RangeError("ideal norm overflows 64 bits");
            v *= f.p;
        }
    }
    return v;
}

u64 split_prime_root(const QuadField& field, u64 p) {
    // minimal polynomial of w = (D + sqrt(D))/2 is x^2 - D x + (D^2 - D)/4
    i64 D = field.D;
    u64 Dm = static_cast<u64>(((D % static_cast<i64>(p)) + static_cast<i64>(p))) % p;
    mpz_class norm_w = (mpz_class(D) * D - D) / 4;
    u64 nw = mpz_fdiv_ui(norm_w.get_mpz_t(), p);
    if (p == 2) {
        // x^2 + Dm x + nw over F_2; split requires two distinct roots
        for (u64 r : {0ULL, 1ULL})
            if ((r * r + Dm * r + nw) % 2 == 0) return r;
        throw InternalError("split_prime_root: no root at p=2");
    }
    // roots (D ± s)/2 mod p with s^2 ≡ D
    u64 s;
    if (!sqrt_mod(Dm, p, s))
        throw ConfigError("split_prime_root: p is not split");
    u64 inv2 = invmod(2, p);
    u64 r1 = mulmod((Dm + s) % p, inv2, p);
    u64 r2 = mulmod((Dm + p - s) % p, inv2, p);
    return std::min(r1, r2);
}

namespace {

// Residue of x = u + l*w modulo the prime (p, w - r): u + l*r mod p.
u64 residue_at_split_prime(const QuadInteger& x, u64 p, u64 r) {
    i64 D = x.field.D;
    i64 u2 = x.n - D * x.l;  // 2u
    if (u2 % 2 != 0) throw InternalError("residue_at_split_prime: parity");
    i64 u = u2 / 2;
    i64 pm = static_cast<i64>(p);
    i64 um = ((u % pm) + pm) % pm;
    i64 lm = ((x.l % pm) + pm) % pm;
    return (static_cast<u64>(um) + mulmod(static_cast<u64>(lm), r, p)) % p;
}

int elementwise_valuation(const QuadInteger& x, u64 p) {
    i64 D = x.field.D;
    i64 n = x.n, l = x.l;
    i64 pi = static_cast<i64>(p);
    int v = 0;
    while (n % pi == 0 && l % pi == 0 && od_parity_ok(D, n / pi, l / pi)) {
        n /= pi;
        l /= pi;
        ++v;
    }
    return v;
}

}  // namespace

IdealFactorization ideal_factor(const QuadInteger& x) {
    if (x.is_zero()) throw ConfigError("ideal_factor: x must be nonzero");
    i64 N = x.norm();
    u64 absN = static_cast<u64>(N < 0 ? -N : N);
    IdealFactorization out;
    for (auto& [p, E] : factorize(absN)) {
        SplitType st = splitting(x.field, p);
        if (st == SplitType::Ramified) {
            out.factors.push_back({p, PrimeSlot::Ramified, E});
        } else if (st == SplitType::Inert) {
            if (E % 2 != 0)
                throw InternalError("ideal_factor: odd norm valuation at inert prime");
            out.factors.push_back({p, PrimeSlot::Inert, E / 2});
        } else {
            int a = elementwise_valuation(x, p);
            int rem = E - 2 * a;
            if (rem < 0) throw InternalError("ideal_factor: valuation bookkeeping failed");
            int e1 = a, e2 = a;
            if (rem > 0) {
                // the primitive part lies in exactly one conjugate
                i64 pa = 1;
                for (int i = 0; i < a; ++i) pa *= static_cast<i64>(p);
                QuadInteger z(x.field, x.n / pa, x.l / pa);
                u64 r = split_prime_root(x.field, p);
                if (residue_at_split_prime(z, p, r) == 0)
                    e1 += rem;
                else
                    e2 += rem;
            }
            if (e1 > 0) out.factors.push_back({p, PrimeSlot::Split1, e1});
            if (e2 > 0) out.factors.push_back({p, PrimeSlot::Split2, e2});
        }
    }
    return out;
}

SplitInertParts split_inert_parts(const QuadInteger& x) {
    if (x.is_zero()) throw ConfigError("split_inert_parts: x must be nonzero");
    i64 N = x.norm();
    u64 absN = static_cast<u64>(N < 0 ? -N : N);
    u64 d1 = 1, d2 = 1;
    for (auto& [p, E] : factorize(absN)) {
        (void)E;
        SplitType st = splitting(x.field, p);
        if (st == SplitType::Ramified) continue;
        int v = elementwise_valuation(x, p);
        for (int i = 0; i < v; ++i) (st == SplitType::Split ? d1 : d2) *= p;
    }
    u64 den = d1 * d2 * d2;
    if (absN % den != 0)
        throw InternalError("split_inert_parts: residual not integral");
    return {d1, d2, absN / den};
}

std::vector<IdealFactorization> ideals_of_norm(const QuadField& field, u64 n) {
    if (n == 0) return {};
    std::vector<IdealFactorization> out;
    out.emplace_back();  // unit ideal
    for (auto& [p, E] : factorize(n)) {
        SplitType st = splitting(field, p);
        std::vector<std::vector<PrimeIdealPower>> choices;
        if (st == SplitType::Ramified) {
            choices.push_back({{p, PrimeSlot::Ramified, E}});
        } else if (st == SplitType::Inert) {
            if (E % 2 != 0) return {};
            choices.push_back({{p, PrimeSlot::Inert, E / 2}});
        } else {
            for (int i = 0; i <= E; ++i) {
                std::vector<PrimeIdealPower> ch;
                if (i > 0) ch.push_back({p, PrimeSlot::Split1, i});
                if (E - i > 0) ch.push_back({p, PrimeSlot::Split2, E - i});
                choices.push_back(std::move(ch));
            }
        }
        std::vector<IdealFactorization> next;
        next.reserve(out.size() * choices.size());
        for (const auto& base : out)
            for (const auto& ch : choices) {
                IdealFactorization f = base;
                f.factors.insert(f.factors.end(), ch.begin(), ch.end());
                next.push_back(std::move(f));
            }
        out.swap(next);
    }
    return out;
}

}  // namespace qprog
