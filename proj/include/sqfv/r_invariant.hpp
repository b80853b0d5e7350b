#pragma once

#include "sqfv/roots_mod.hpp"

namespace sqfv {

// R_f(n) = min { d in {1, 2, 3, ...} : n | f(d) }.
//
// Three states: finite (value is the minimum), infinite (the root-set path
// proved no root exists mod n), exceeded (the brute scan ran out of budget --
// brute force can prove existence but never nonexistence).
enum class RKind { finite, infinite, exceeded };

struct RInvariantRecord {
    u64 n = 0;
    RKind kind = RKind::infinite;
    u64 value = 0;  // the minimum d when finite; the cap when exceeded
    bool finite() const { return kind == RKind::finite; }
};

// Positive arguments d = 1, 2, ...: residue 0 mod m corresponds to d = m.
inline RInvariantRecord r_from_roots(const RootSet& rs) {
    RInvariantRecord rec;
    rec.n = rs.modulus;
    if (rs.empty()) return rec;  // infinite
    rec.kind = RKind::finite;
    u64 best = rs.residues[0] == 0 ? rs.modulus : rs.residues[0];
    if (rs.residues[0] == 0 && rs.size() > 1) best = std::min(best, rs.residues[1]);
    rec.value = best;
    return rec;
}

inline RInvariantRecord r_of_prime_power(const IntPolynomial& f, u64 p, unsigned k,
                                         u64 seed = kDefaultSeed) {
    return r_from_roots(roots_mod_prime_power(f, p, k, seed));
}

// min over the records of f(X) and f(-X): the smallest |d| over nonzero
// integer arguments of either sign
inline RInvariantRecord r_of_prime_power_signed(const IntPolynomial& f, u64 p, unsigned k,
                                                u64 seed = kDefaultSeed) {
    std::vector<mpz_class> neg = f.coeffs();
    for (size_t i = 1; i < neg.size(); i += 2) neg[i] = -neg[i];
    RInvariantRecord pos = r_of_prime_power(f, p, k, seed);
    RInvariantRecord mir = r_of_prime_power(IntPolynomial(std::move(neg)), p, k, seed);
    if (!mir.finite()) return pos;
    if (!pos.finite()) return mir;
    return pos.value <= mir.value ? pos : mir;
}

// Direct transcription of the definition: scan d = 1, 2, ..., cap.
inline RInvariantRecord r_brute(const IntPolynomial& f, u64 n, u64 cap) {
    if (n == 0 || cap == 0) throw std::invalid_argument("r_brute: n and cap must be positive");
    RInvariantRecord rec;
    rec.n = n;
    std::vector<u64> cm = f.coeffs_mod(n);
    for (u64 d = 1; d <= cap; ++d) {
        if (IntPolynomial::eval_mod(cm, d % n, n) == 0) {
            rec.kind = RKind::finite;
            rec.value = d;
            return rec;
        }
    }
    rec.kind = RKind::exceeded;
    rec.value = cap;
    return rec;
}

// R(p^k) <= R(p^(k+1)) whenever the latter is finite; an infinite higher
// power is consistent with anything (and a root mod p^(k+1) reduces mod p^k,
// so finite above forces finite below).
inline bool r_monotonicity_check(const IntPolynomial& f, u64 p, unsigned k,
                                 u64 seed = kDefaultSeed) {
    RInvariantRecord lo = r_of_prime_power(f, p, k, seed);
    RInvariantRecord hi = r_of_prime_power(f, p, k + 1, seed);
    if (!hi.finite()) return true;
    if (!lo.finite()) return false;  // cannot happen for exact root sets
    return lo.value <= hi.value;
}

}  // namespace sqfv
