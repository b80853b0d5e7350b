#pragma once

#include <algorithm>
#include <optional>

#include "sqfv/polynomial.hpp"

namespace sqfv {

// Root set of f modulo a prime power p^k: every residue a in [0, modulus)
// with f(a) = 0 (mod modulus), strictly increasing, none omitted.
struct RootSet {
    u64 modulus = 1;
    std::vector<u64> residues;
    bool empty() const { return residues.empty(); }
    u64 size() const { return residues.size(); }
};

// Direct scan is used for p below this bound; above it only registered fast
// paths (degree <= 2 closed forms, cyclotomic order-finding) are accepted.
inline constexpr u64 kScanThreshold = u64(1) << 21;

// Brute-force root scan in [0, p); the oracle everything else is tested against.
inline RootSet roots_mod_p_scan(const IntPolynomial& f, u64 p) {
    RootSet rs;
    rs.modulus = p;
    std::vector<u64> cm = f.coeffs_mod(p);
    if (cm.empty()) {  // f = 0 (mod p): every residue is a root
        rs.residues.resize(p);
        for (u64 a = 0; a < p; ++a) rs.residues[a] = a;
        return rs;
    }
    for (u64 a = 0; a < p; ++a)
        if (IntPolynomial::eval_mod(cm, a, p) == 0) rs.residues.push_back(a);
    return rs;
}

namespace detail {

// closed form for a1*x + a0 = 0 (mod p), a1 != 0 (mod p)
inline RootSet roots_linear(u64 a0, u64 a1, u64 p) {
    RootSet rs;
    rs.modulus = p;
    rs.residues.push_back(mul_mod(a0 == 0 ? 0 : p - a0, inv_mod(a1, p), p));
    return rs;
}

// closed form for a2*x^2 + a1*x + a0 = 0 (mod p), odd p, a2 != 0 (mod p)
inline RootSet roots_quadratic(u64 a0, u64 a1, u64 a2, u64 p) {
    RootSet rs;
    rs.modulus = p;
    u64 disc = sub_mod(mul_mod(a1, a1, p), mul_mod(4 % p, mul_mod(a2, a0, p), p), p);
    u64 inv2a = inv_mod(mul_mod(2 % p, a2, p), p);
    u64 nb = a1 == 0 ? 0 : p - a1;
    if (disc == 0) {
        rs.residues.push_back(mul_mod(nb, inv2a, p));
        return rs;
    }
    u64 s = sqrt_mod(disc, p);
    if (s == p) return rs;  // non-residue: no roots
    u64 r1 = mul_mod(add_mod(nb, s, p), inv2a, p);
    u64 r2 = mul_mod(sub_mod(nb, s, p), inv2a, p);
    rs.residues = {std::min(r1, r2), std::max(r1, r2)};
    if (r1 == r2) rs.residues.pop_back();
    return rs;
}

}  // namespace detail

RootSet cyclotomic_roots(u64 ell, u64 p, unsigned k, u64 seed);

// Roots of f modulo a prime p.  Scan below the threshold; above it dispatch to
// the closed forms (degree <= 2) or the cyclotomic path, else refuse.
inline RootSet roots_mod_p(const IntPolynomial& f, u64 p, u64 seed = kDefaultSeed) {
    std::vector<u64> cm = f.coeffs_mod(p);
    if (!cm.empty() && cm.size() <= 3 && p > 2) {
        if (cm.size() == 1) return RootSet{p, {}};
        if (cm.size() == 2) return detail::roots_linear(cm[0], cm[1], p);
        return detail::roots_quadratic(cm[0], cm[1], cm[2], p);
    }
    if (p < kScanThreshold) return roots_mod_p_scan(f, p);
    if (u64 ell = f.cyclotomic_index()) return cyclotomic_roots(ell, p, 1, seed);
    if (cm.empty())
        throw std::domain_error("roots_mod_p: f vanishes mod p and p is too large to enumerate");
    throw std::domain_error(
        "roots_mod_p: p exceeds the scan threshold and f has no registered fast path");
}

// Hensel step: exact root set mod p^k from the exact root set mod p^(k-1).
// Simple roots (f'(a) != 0 mod p) lift uniquely; singular roots are expanded
// by checking all p candidates a + t*p^(k-1).
inline RootSet lift_roots(const IntPolynomial& f, u64 p, unsigned k, const RootSet& base) {
    if (k < 2) throw std::invalid_argument("lift_roots: k must be >= 2");
    u64 pkm1 = prime_power(p, k - 1);
    if (base.modulus != pkm1)
        throw std::invalid_argument("lift_roots: base modulus is not p^(k-1)");
    u64 pk = pkm1 * p;  // prime_power already guarded p^(k-1); guard the final step
    if (pkm1 > (u64(1) << 63) / p)
        throw std::overflow_error("lift_roots: p^k exceeds the 63-bit working range");
    RootSet out;
    out.modulus = pk;
    std::vector<u64> cm = f.coeffs_mod(pk);
    std::vector<u64> dm = f.derivative().coeffs_mod(p);
    for (u64 a : base.residues) {
        u64 fa = IntPolynomial::eval_mod(cm, a, pk);
        if (fa % pkm1 != 0)
            throw std::logic_error("lift_roots: base residue is not a root mod p^(k-1)");
        u64 da = IntPolynomial::eval_mod(dm, a % p, p);
        if (da != 0) {
            u64 q = (fa / pkm1) % p;
            u64 t = mul_mod(q == 0 ? 0 : p - q, inv_mod(da, p), p);
            out.residues.push_back(a + t * pkm1);
        } else {
            for (u64 t = 0; t < p; ++t) {
                u64 cand = a + t * pkm1;
                if (IntPolynomial::eval_mod(cm, cand, pk) == 0) out.residues.push_back(cand);
            }
        }
    }
    std::sort(out.residues.begin(), out.residues.end());
    return out;
}

inline RootSet roots_mod_prime_power(const IntPolynomial& f, u64 p, unsigned k,
                                     u64 seed = kDefaultSeed) {
    if (k == 0) throw std::invalid_argument("roots_mod_prime_power: k must be >= 1");
    if (u64 ell = f.cyclotomic_index(); ell != 0 && k <= 2 && p >= kScanThreshold)
        return cyclotomic_roots(ell, p, k, seed);
    RootSet rs = roots_mod_p(f, p, seed);
    for (unsigned i = 2; i <= k; ++i) rs = lift_roots(f, p, i, rs);
    return rs;
}

// delta_f(p^k): the number of roots of f modulo p^k
inline u64 delta(const IntPolynomial& f, u64 p, unsigned k, u64 seed = kDefaultSeed) {
    return roots_mod_prime_power(f, p, k, seed).size();
}

// Roots of the cyclotomic polynomial of prime index ell modulo p^k, k <= 2,
// without scanning: the roots mod p are exactly the elements of
// multiplicative order ell, i.e. the nontrivial ell-th roots of unity.
inline RootSet cyclotomic_roots(u64 ell, u64 p, unsigned k, u64 seed = kDefaultSeed) {
    IntPolynomial phi = IntPolynomial::cyclotomic(ell);  // validates ell (odd prime)
    if (k < 1 || k > 2) throw std::invalid_argument("cyclotomic_roots: k must be 1 or 2");
    if (!is_prime_u64(p)) throw std::invalid_argument("cyclotomic_roots: p must be prime");
    RootSet rs;
    rs.modulus = prime_power(p, k);
    if (p == ell) {
        // mod ell the only root is 1 (honest scan keeps this branch exact);
        // mod ell^2 none of its ell lifts work, so the set is empty
        RootSet base = roots_mod_p_scan(phi, p);
        if (k == 1) return base;
        return lift_roots(phi, p, 2, base);
    }
    if (p % ell != 1) return rs;  // elements of order ell exist iff ell | p-1
    // find one element of order ell: raise random bases to (p-1)/ell
    SplitMix64 rng(mix_seed(seed, p));
    u64 x = 1;
    while (x == 1) x = pow_mod(2 + rng.below(p - 3), (p - 1) / ell, p);
    std::vector<u64> roots;
    u64 g = x;
    for (u64 j = 1; j < ell; ++j) {
        roots.push_back(g);
        g = mul_mod(g, x, p);
    }
    std::sort(roots.begin(), roots.end());
    rs.residues = std::move(roots);
    if (k == 1) return rs;
    rs.modulus = p;
    return lift_roots(phi, p, 2, rs);  // p does not divide disc, so all roots are simple
}

// Companion bookkeeping for cyclotomic root counts modulo p^2: the number of
// solutions of x^ell = 1 (mod p^2) -- which includes x = 1, never a root of
// the cyclotomic polynomial itself -- with the ramified prime counted as the
// single class x = 1 (mod ell).  Reported side by side with delta so the two
// conventions are both visible; they intentionally differ.
inline u64 cyclotomic_unity_classes(u64 ell, u64 p) {
    if (p == ell) return 1;
    return p % ell == 1 ? ell : 0;
}

}  // namespace sqfv
