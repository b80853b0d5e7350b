#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "sqfv/common.hpp"

namespace sqfv {

inline u64 add_mod(u64 a, u64 b, u64 m) {
    // works for any m: detect wraparound, then a+b < 2m guarantees one fixup
    u64 s = a + b;
    if (s < a || s >= m) s -= m;
    return s;
}

inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : m - (b - a); }

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

inline u64 pow_mod(u64 base, u64 exp, u64 mod) {
    if (mod == 0) throw std::invalid_argument("pow_mod: modulus must be positive");
    if (mod == 1) return 0;
    u64 r = 1;
    base %= mod;
    while (exp) {
        if (exp & 1) r = mul_mod(r, base, mod);
        base = mul_mod(base, base, mod);
        exp >>= 1;
    }
    return r;
}

// modular inverse via extended euclid; m >= 2, requires gcd(a, m) = 1
inline u64 inv_mod(u64 a, u64 m) {
    a %= m;
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(m), nr = static_cast<i64>(a);
    while (nr != 0) {
        i64 q = r / nr;
        t -= q * nt;
        std::swap(t, nt);
        r -= q * nr;
        std::swap(r, nr);
    }
    if (r != 1) throw std::invalid_argument("inv_mod: arguments are not coprime");
    return t < 0 ? static_cast<u64>(t + static_cast<i64>(m)) : static_cast<u64>(t);
}

inline u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

// Tonelli-Shanks square root modulo an odd prime p.
// Returns r with r*r = a (mod p), or p itself when a is a non-residue.
inline u64 sqrt_mod(u64 a, u64 p) {
    a %= p;
    if (p == 2 || a == 0) return a;
    if (pow_mod(a, (p - 1) / 2, p) != 1) return p;  // non-residue
    if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);
    u64 q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) { q >>= 1; ++s; }
    // smallest non-residue as the auxiliary generator: deterministic on purpose
    u64 z = 2;
    while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
    u64 m = s;
    u64 c = pow_mod(z, q, p);
    u64 t = pow_mod(a, q, p);
    u64 r = pow_mod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) { tt = mul_mod(tt, tt, p); ++i; }
        u64 b = pow_mod(c, u64(1) << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    return r;
}

// p^k with an overflow guard; all prime-power moduli must stay below 2^63 so
// the u64 hot paths (Horner, Hensel) remain exact.
inline u64 prime_power(u64 p, unsigned k) {
    u64 r = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (r > (u64(1) << 63) / p)
            throw std::overflow_error("prime_power: p^k exceeds the 63-bit working range");
        r *= p;
    }
    return r;
}

}  // namespace sqfv
