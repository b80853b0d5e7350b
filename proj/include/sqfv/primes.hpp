#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <vector>

#include "sqfv/modular.hpp"
#include "sqfv/rng.hpp"

namespace sqfv {

// Deterministic Miller-Rabin: this witness set decides primality for every
// n < 2^64 (no probabilistic caveat in the native range).
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a % n, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

enum class Primality { composite, prime, probable_prime };

// Arbitrary-precision classification.  Below 2^64 the answer is exact; above
// that we run seeded Miller-Rabin rounds and can only certify "probable".
inline Primality classify_prime(const mpz_class& n, u64 seed = kDefaultSeed, int rounds = 40) {
    if (n < 2) return Primality::composite;
    if (n.fits_ulong_p()) return is_prime_u64(n.get_ui()) ? Primality::prime : Primality::composite;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull, 41ull, 43ull}) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return Primality::composite;
    }
    mpz_class d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    d >>= s;
    SplitMix64 rng(mix_seed(seed, mpz_fdiv_ui(n.get_mpz_t(), 0xffffffffffc5ULL)));
    size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    mpz_class nm1 = n - 1, nm3 = n - 3;
    for (int round = 0; round < rounds; ++round) {
        mpz_class a = 0;
        for (size_t have = 0; have < bits + 64; have += 64) {
            a <<= 64;
            a += mpz_class(rng.next());
        }
        a = 2 + a % nm3;  // base in [2, n-2]
        mpz_class x;
        mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == nm1) continue;
        bool composite = true;
        for (unsigned long r = 1; r < s; ++r) {
            x = x * x % n;
            if (x == nm1) { composite = false; break; }
        }
        if (composite) return Primality::composite;
    }
    return Primality::probable_prime;
}

// Plain sieve of Eratosthenes; used for base primes and small tables.
inline std::vector<u64> simple_sieve(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<bool> comp(limit + 1, false);
    for (u64 i = 2; i * i <= limit; ++i) {
        if (comp[i]) continue;
        for (u64 j = i * i; j <= limit; j += i) comp[j] = true;
    }
    for (u64 i = 2; i <= limit; ++i)
        if (!comp[i]) out.push_back(i);
    return out;
}

struct PrimeRange {
    u64 lo = 2, hi = 2;  // inclusive bounds; iteration yields primes in [lo, hi]
};

inline constexpr u64 kDefaultSegment = u64(1) << 16;

// Segmented sieve over [lo, hi] using an externally supplied base-prime table
// (must cover sqrt(hi)); calls f(p) for each prime in increasing order.
template <class F>
void for_each_prime_seg(u64 lo, u64 hi, const std::vector<u64>& base, F&& f,
                        u64 segment = kDefaultSegment) {
    if (hi < 2 || hi < lo) return;
    lo = std::max<u64>(lo, 2);
    if (segment == 0) segment = kDefaultSegment;
    std::vector<bool> comp;
    for (u64 start = lo; start <= hi; start += segment) {
        u64 end = (hi - start < segment) ? hi : start + segment - 1;
        comp.assign(end - start + 1, false);
        for (u64 p : base) {
            if (p > end / p) break;  // p^2 > end, without overflowing p * p
            u64 first = p * p;
            if (first < start) {
                u64 rem = start % p;
                if (rem == 0)
                    first = start;
                else if (p - rem > end - start)
                    continue;  // next multiple of p lies beyond the segment
                else
                    first = start + (p - rem);
            }
            for (u64 j = first;;) {
                comp[j - start] = true;
                if (end - j < p) break;  // j + p would pass end or wrap
                j += p;
            }
        }
        for (u64 v = start;; ++v) {
            if (!comp[v - start]) f(v);
            if (v == end) break;  // ++v would wrap when end = 2^64 - 1
        }
        if (end == hi) break;  // start += segment may wrap past hi
    }
}

template <class F>
void for_each_prime(u64 lo, u64 hi, F&& f, u64 segment = kDefaultSegment) {
    if (hi < 2 || hi < lo) return;
    std::vector<u64> base = simple_sieve(isqrt_u64(hi));
    for_each_prime_seg(lo, hi, base, std::forward<F>(f), segment);
}

inline std::vector<u64> primes_in(const PrimeRange& r, u64 segment = kDefaultSegment) {
    std::vector<u64> out;
    for_each_prime(r.lo, r.hi, [&](u64 p) { out.push_back(p); }, segment);
    return out;
}

inline u64 count_primes(u64 lo, u64 hi, u64 segment = kDefaultSegment) {
    u64 n = 0;
    for_each_prime(lo, hi, [&](u64) { ++n; }, segment);
    return n;
}

}  // namespace sqfv
