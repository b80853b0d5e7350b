#pragma once

#include <gmpxx.h>

#include <map>
#include <numeric>
#include <vector>

#include "sqfv/primes.hpp"

namespace sqfv {

inline constexpr u64 kTrialDivisionBound = 100000;  // trial division by primes <= 10^5

struct Factorization {
    mpz_class value;                                   // the factored integer (>= 1)
    std::vector<std::pair<mpz_class, unsigned>> factors;  // (prime, exponent), primes increasing
    bool certified = true;  // false iff some factor is only a probable prime (> 2^64)
};

inline bool is_perfect_square(const mpz_class& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

namespace detail {

inline const std::vector<u64>& trial_primes() {
    static const std::vector<u64> table = simple_sieve(kTrialDivisionBound);
    return table;
}

// Brent's cycle variant of the rho method; n must be odd, composite and not a
// prime power.  Always returns a nontrivial factor (retries internally).
inline u64 rho_brent_u64(u64 n, SplitMix64& rng) {
    while (true) {
        u64 c = 1 + rng.below(n - 1);
        u64 y = 1 + rng.below(n - 1);
        u64 g = 1, q = 1, x = 0, ys = 0;
        const u64 batch = 128;
        for (u64 r = 1; g == 1; r <<= 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = add_mod(mul_mod(y, y, n), c, n);
            for (u64 k = 0; k < r && g == 1; k += batch) {
                ys = y;
                u64 lim = std::min(batch, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = add_mod(mul_mod(y, y, n), c, n);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
            }
        }
        if (g == n) {
            do {
                ys = add_mod(mul_mod(ys, ys, n), c, n);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
        // cycle collapsed onto n itself: retry with a fresh polynomial
    }
}

inline mpz_class rho_brent_mpz(const mpz_class& n, SplitMix64& rng) {
    while (true) {
        mpz_class c = mpz_class(rng.next()) % (n - 1) + 1;
        mpz_class y = mpz_class(rng.next()) % (n - 1) + 1;
        mpz_class g = 1, q = 1, x, ys;
        const u64 batch = 128;
        for (u64 r = 1; g == 1; r <<= 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = (y * y + c) % n;
            for (u64 k = 0; k < r && g == 1; k += batch) {
                ys = y;
                u64 lim = std::min(batch, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * (x > y ? x - y : y - x) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (g == n) {
            do {
                ys = (ys * ys + c) % n;
                mpz_class diff = x > ys ? x - ys : ys - x;
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void factor_rec(const mpz_class& m, std::map<mpz_class, unsigned>& out, unsigned mult,
                       SplitMix64& rng, bool& certified, u64 seed) {
    if (m == 1) return;
    Primality kind = classify_prime(m, seed);
    if (kind != Primality::composite) {
        if (kind == Primality::probable_prime) certified = false;
        out[m] += mult;
        return;
    }
    // perfect-power preprocessing so rho never stalls on p^k
    if (mpz_perfect_power_p(m.get_mpz_t())) {
        size_t maxk = mpz_sizeinbase(m.get_mpz_t(), 2);
        for (unsigned k = 2; k <= maxk; ++k) {
            mpz_class root, rem;
            mpz_rootrem(root.get_mpz_t(), rem.get_mpz_t(), m.get_mpz_t(), k);
            if (rem == 0) {
                factor_rec(root, out, mult * k, rng, certified, seed);
                return;
            }
        }
    }
    mpz_class d;
    if (m.fits_ulong_p()) {
        d = rho_brent_u64(m.get_ui(), rng);
    } else {
        d = rho_brent_mpz(m, rng);
    }
    factor_rec(d, out, mult, rng, certified, seed);
    factor_rec(mpz_class(m / d), out, mult, rng, certified, seed);
}

}  // namespace detail

// Complete factorization: trial division by primes <= 10^5, then seeded
// Brent-rho splitting with primality certification of every factor.
inline Factorization factorize(const mpz_class& n, u64 seed = kDefaultSeed) {
    if (n < 1) throw std::invalid_argument("factorize: argument must be positive");
    Factorization out;
    out.value = n;
    mpz_class m = n;
    std::map<mpz_class, unsigned> acc;
    for (u64 p : detail::trial_primes()) {
        if (mpz_class(p) * p > m) break;
        unsigned e = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
            ++e;
        }
        if (e) acc[mpz_class(p)] = e;
        if (m == 1) break;
    }
    if (m > 1) {
        // seed the splitter from (global seed, n) so parallel callers get
        // reproducible results regardless of scheduling
        SplitMix64 rng(mix_seed(seed, mpz_fdiv_ui(n.get_mpz_t(), 0xfffffffffffffffbULL)));
        detail::factor_rec(m, acc, 1, rng, out.certified, seed);
    }
    out.factors.assign(acc.begin(), acc.end());
    return out;
}

inline bool is_squarefree(const Factorization& f) {
    for (const auto& [p, e] : f.factors)
        if (e >= 2) return false;
    return true;
}

// smallest prime whose square divides the value; 0 if square-free
inline mpz_class smallest_square_prime(const Factorization& f) {
    for (const auto& [p, e] : f.factors)
        if (e >= 2) return p;
    return 0;
}

}  // namespace sqfv
