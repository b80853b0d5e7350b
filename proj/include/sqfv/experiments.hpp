#pragma once

#include <cstdlib>
#include <map>

#include "sqfv/density.hpp"

namespace sqfv {

// ---------------------------------------------------------------------------
// Quadratic exception experiment.
//
// For f = aX^2 + bX + c multiply by a: af(X) = (aX)^2 + b(aX) + ac, so the
// exceptional primes of f are among those of the monic g(Y) = Y^2 + bY + c'
// with c' = ac (extra primes dividing a aside, which are <= |a|).  We survey
// g directly and test the claim that every exception satisfies
// p <= max(8|b|, 8|c'|).
// ---------------------------------------------------------------------------

struct QuadraticSpec {
    long long a = 1, b = 0, c = 0;
    long long cprime() const { return a * c; }
    static QuadraticSpec monic(long long b, long long c) { return QuadraticSpec{1, b, c}; }
    IntPolynomial reduced_poly() const {
        return IntPolynomial({mpz_class(static_cast<long>(cprime())), mpz_class(static_cast<long>(b)), mpz_class(1)});
    }
};

struct QuadraticReport {
    QuadraticSpec spec;
    u64 T = 0;
    std::vector<u64> exceptions;
    u64 threshold8 = 0;  // max(8|b|, 8|c'|)
    bool within_threshold = true;
};

inline QuadraticReport quadratic_exceptions(const QuadraticSpec& spec, u64 T,
                                            const SurveyOptions& opt = {}) {
    mpz_class disc = mpz_class(static_cast<long>(spec.b)) * static_cast<long>(spec.b) -
                     4 * mpz_class(static_cast<long>(spec.cprime()));
    if (disc == 0)
        throw std::invalid_argument("quadratic_exceptions: discriminant is zero (not separable)");
    QuadraticReport rep;
    rep.spec = spec;
    rep.T = T;
    rep.threshold8 =
        std::max<u64>(8 * std::llabs(spec.b), 8 * std::llabs(spec.cprime()));
    SurveyReport sr = survey_general(spec.reduced_poly(), T, opt);
    rep.exceptions = sr.exceptions;
    for (u64 p : rep.exceptions)
        if (p > rep.threshold8) rep.within_threshold = false;
    return rep;
}

// ---------------------------------------------------------------------------
// abc-style census for T(a) = 1 - a^n (n odd) and H(a) = T(a)T(-a) = 1 - a^{2n}.
// ---------------------------------------------------------------------------

// number of residues b mod m with b^{2n} = 1 (multiplicative in m)
inline u64 rho_count(u64 n, u64 m) {
    if (m == 0) throw std::invalid_argument("rho_count: modulus must be positive");
    if (m == 1) return 1;
    if (m > (u64(1) << 24)) throw std::invalid_argument("rho_count: modulus too large for a scan");
    u64 count = 0;
    for (u64 b = 0; b < m; ++b)
        if (pow_mod(b, 2 * n, m) == 1) ++count;
    return count;
}

// closed form at an odd prime p: the 2n-th roots of unity in F_p* form a
// cyclic subgroup of order gcd(2n, p-1)
inline u64 rho_fast(u64 n, u64 p) { return std::gcd(2 * n, p - 1); }

struct AbcReport {
    u64 n = 0, A = 0;
    u64 log_threshold = 0;  // floor(ln A): primes <= this must avoid H(a) to enter M1
    u64 M1 = 0;  // a in [A,2A] by |a| with H(a) free of p^2 for all p <= ln A
    u64 M2 = 0;  // a in the same range with p^2 | H(a) for some ln A < p <= A
    std::map<mpz_class, u32> rd;  // square-free d = 1 - a^n and their solution counts
    u64 sum_R = 0;   // sum of R(d) over square-free d
    u64 sum_R2 = 0;  // sum of R(d)^2 (n odd makes a -> 1 - a^n injective, so equal to sum_R)
    u32 r_max = 0;
    bool inequality_ok = false;  // 2 * sum_R >= M1 - M2
};

inline AbcReport abc_census(u64 n, u64 A, u64 seed = kDefaultSeed) {
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("abc_census: n must be odd and >= 3");
    if (A < 16) throw std::invalid_argument("abc_census: A must be >= 16");
    AbcReport rep;
    rep.n = n;
    rep.A = A;
    rep.log_threshold = static_cast<u64>(std::floor(std::log(static_cast<double>(A))));

    auto handle = [&](long long a) {
        mpz_class apow;
        mpz_class base(static_cast<long>(a));
        mpz_pow_ui(apow.get_mpz_t(), base.get_mpz_t(), 2 * n);
        mpz_class h = 1 - apow;  // = T(a) T(-a)
        Factorization hf = factorize(abs(h), mix_seed(seed, static_cast<u64>(std::llabs(a))));
        bool small_clean = true, mid_hit = false;
        for (const auto& [p, e] : hf.factors) {
            if (e < 2) continue;
            if (p <= rep.log_threshold)
                small_clean = false;
            else if (p <= mpz_class(A))
                mid_hit = true;
        }
        if (small_clean) ++rep.M1;
        if (mid_hit) ++rep.M2;

        mpz_pow_ui(apow.get_mpz_t(), base.get_mpz_t(), n);
        mpz_class d = 1 - apow;  // = T(a)
        Factorization tf = factorize(abs(d), mix_seed(seed, static_cast<u64>(std::llabs(a)) + (a < 0 ? (u64(1) << 32) : 0)));
        if (d != 0 && smallest_square_prime(tf) == 0) ++rep.rd[d];
    };
    for (long long a = static_cast<long long>(A); a <= static_cast<long long>(2 * A); ++a) {
        handle(a);
        handle(-a);
    }

    for (const auto& [d, r] : rep.rd) {
        rep.sum_R += r;
        rep.sum_R2 += static_cast<u64>(r) * r;
        rep.r_max = std::max(rep.r_max, r);
    }
    rep.inequality_ok =
        2 * static_cast<i64>(rep.sum_R) >= static_cast<i64>(rep.M1) - static_cast<i64>(rep.M2);
    return rep;
}

// first/second moment comparison: sum_R should be >> A and sum_R2 close to
// sum_R when solutions rarely collide (for odd n they never do)
struct AbcMoments {
    double first_ratio = 0;   // sum_R / A
    double second_ratio = 0;  // sum_R2 / sum_R
    bool first_ok = false, second_ok = false;
};

inline AbcMoments abc_moment_check(const AbcReport& rep, double c1 = 0.5, double c2 = 10.0) {
    AbcMoments m;
    m.first_ratio = static_cast<double>(rep.sum_R) / static_cast<double>(rep.A);
    m.second_ratio =
        rep.sum_R ? static_cast<double>(rep.sum_R2) / static_cast<double>(rep.sum_R) : 0.0;
    m.first_ok = m.first_ratio >= c1;
    m.second_ok = m.second_ratio <= c2;
    return m;
}

}  // namespace sqfv
