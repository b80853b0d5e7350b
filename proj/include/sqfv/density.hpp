#pragma once

#include <cmath>
#include <fstream>
#include <optional>

#include "sqfv/parallel.hpp"
#include "sqfv/survey.hpp"

namespace sqfv {

// ---------------------------------------------------------------------------
// Truncated Euler product with a certified tail bracket.
//
// For separable f with square-free value content, the conjectured density of
// square-free values is prod_p (1 - delta_f(p^2)/p^2).  We compute the partial
// product over p <= M and bracket the tail: each omitted factor lies in
// [1 - g/p^2, 1] with g = deg f, and sum_{p>M} g/p^2 <= g/(M-1), so the tail
// factor is in [1 - g/(M-1), 1].
// ---------------------------------------------------------------------------

struct EulerProductOptions {
    u64 exact_cutoff = 10000;  // primes <= cutoff accumulate in exact rationals
    u64 seed = kDefaultSeed;
};

struct EulerProduct {
    std::string poly_id;
    u64 M = 0;
    unsigned degree = 0;
    bool exact = false;          // partial product is a single exact rational
    mpq_class trunc_lo, trunc_hi;  // bracket for prod_{p<=M} (1 - delta/p^2)
    mpq_class lo, hi;              // bracket for the full product C_f
    u64 contributing = 0;          // primes <= M with delta(p^2) > 0
    // companion product using the unity-class counts (cyclotomic shape only);
    // kept side by side with the delta-based product because the two
    // conventions genuinely differ at p = ell and at the class x = 1
    bool has_unity = false;
    mpq_class unity_trunc_lo, unity_trunc_hi, unity_lo, unity_hi;
};

namespace detail {

// directed-rounding fixed-point accumulator: value is acc / 10^40
struct Bracket {
    static const mpz_class& scale() {
        static const mpz_class s = [] {
            mpz_class v;
            mpz_ui_pow_ui(v.get_mpz_t(), 10, 40);
            return v;
        }();
        return s;
    }
    mpz_class lo, hi;
    explicit Bracket(const mpq_class& exact_start) {
        mpz_class n = exact_start.get_num() * scale();
        mpz_fdiv_q(lo.get_mpz_t(), n.get_mpz_t(), exact_start.get_den().get_mpz_t());
        mpz_cdiv_q(hi.get_mpz_t(), n.get_mpz_t(), exact_start.get_den().get_mpz_t());
    }
    // multiply by (num/den), rounding lo down and hi up
    void mul(const mpz_class& num, const mpz_class& den) {
        mpz_class t = lo * num;
        mpz_fdiv_q(lo.get_mpz_t(), t.get_mpz_t(), den.get_mpz_t());
        t = hi * num;
        mpz_cdiv_q(hi.get_mpz_t(), t.get_mpz_t(), den.get_mpz_t());
    }
    mpq_class lo_q() const { return canon(mpq_class(lo) / mpq_class(scale())); }
    mpq_class hi_q() const { return canon(mpq_class(hi) / mpq_class(scale())); }
    static mpq_class canon(mpq_class q) {
        q.canonicalize();
        return q;
    }
};

}  // namespace detail

inline EulerProduct euler_product(const IntPolynomial& f, u64 M,
                                  const EulerProductOptions& opt = {}) {
    if (f.degree() < 1) throw std::invalid_argument("euler_product: polynomial must be nonconstant");
    if (M < 2) throw std::invalid_argument("euler_product: M must be >= 2");
    if (!f.is_separable()) throw std::invalid_argument("euler_product: polynomial must be separable");
    Factorization content = factorize(f.content_gcd(), opt.seed);
    if (mpz_class sq = smallest_square_prime(content); sq != 0)
        throw SolubilityFailure(sq.get_ui());

    EulerProduct out;
    out.poly_id = f.id();
    out.M = M;
    out.degree = static_cast<unsigned>(f.degree());
    u64 ell = f.cyclotomic_index();
    out.has_unity = ell != 0;

    mpq_class exact(1);
    mpq_class unity_exact(1);
    bool fixed_mode = false;
    std::optional<detail::Bracket> fix, unity_fix;

    auto apply = [&](u64 dcount, u64 p, bool unity) {
        mpz_class p2 = mpz_class(p) * p;
        mpz_class num = p2 - dcount;
        if (!fixed_mode) {
            mpq_class factor(num, p2);
            factor.canonicalize();
            if (unity)
                unity_exact *= factor;
            else
                exact *= factor;
        } else {
            (unity ? *unity_fix : *fix).mul(num, p2);
        }
    };

    for_each_prime(2, M, [&](u64 p) {
        if (!fixed_mode && p > opt.exact_cutoff) {
            fix.emplace(exact);
            unity_fix.emplace(unity_exact);
            fixed_mode = true;
        }
        u64 d;
        if (ell) {
            if (p % ell != 1 && p != ell) {
                d = 0;
            } else {
                d = cyclotomic_roots(ell, p, 2, opt.seed).size();
            }
        } else {
            RootSet rs1 = roots_mod_p(f, p, opt.seed);
            d = rs1.empty() ? 0 : lift_roots(f, p, 2, rs1).size();
        }
        if (mpz_class(d) == mpz_class(p) * p) throw SolubilityFailure(p);
        if (d) {
            ++out.contributing;
            apply(d, p, false);
        }
        if (ell) {
            if (u64 a = cyclotomic_unity_classes(ell, p)) apply(a, p, true);
        }
    });

    if (fixed_mode) {
        out.exact = false;
        out.trunc_lo = fix->lo_q();
        out.trunc_hi = fix->hi_q();
        if (ell) {
            out.unity_trunc_lo = unity_fix->lo_q();
            out.unity_trunc_hi = unity_fix->hi_q();
        }
    } else {
        out.exact = true;
        out.trunc_lo = out.trunc_hi = exact;
        if (ell) out.unity_trunc_lo = out.unity_trunc_hi = unity_exact;
    }

    // tail: the full product lies in [trunc * (1 - g/(M-1)), trunc]
    auto tail_factor = [&](u64 g) {
        mpq_class t(g >= M - 1 ? 0 : mpz_class(M - 1 - g), mpz_class(M - 1));
        t.canonicalize();
        return t;
    };
    out.hi = out.trunc_hi;
    out.lo = out.trunc_lo * tail_factor(out.degree);
    if (ell) {
        out.unity_hi = out.unity_trunc_hi;
        out.unity_lo = out.unity_trunc_lo * tail_factor(ell);  // unity classes per prime <= ell
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exact square-free census of f(1), ..., f(X).
// ---------------------------------------------------------------------------

enum class Verdict { squarefree, has_square, zero };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::squarefree: return "SQUAREFREE";
        case Verdict::has_square: return "HAS_SQUARE";
        default: return "ZERO";
    }
}

struct CensusRow {
    u64 d = 0;
    mpz_class value;
    Verdict verdict = Verdict::squarefree;
    mpz_class witness;  // a prime with witness^2 | value; 0 when none
};

struct CensusOptions {
    u64 B = 0;  // sieve bound; 0 selects max(10^4, X)
    unsigned workers = 1;
    u64 seed = kDefaultSeed;
    std::string csv_path;  // verdict stream: d,value,verdict,witness_prime
};

struct CensusResult {
    std::string poly_id;
    u64 X = 0, B = 0;
    std::vector<CensusRow> rows;  // index 0 <-> d = 1
    u64 squarefree_count = 0, has_square_count = 0, zero_count = 0;
    u64 valid_count = 0;  // X minus the zero values
    // stage-2 squares of primes beyond the sieve bound: each (p, d) certifies
    // R_f(p^2) <= d, i.e. exactly the rare exceptional primes when B >= X
    std::vector<std::pair<mpz_class, u64>> large_square_links;
    double empirical() const {
        return valid_count ? static_cast<double>(squarefree_count) / static_cast<double>(valid_count)
                           : 0.0;
    }
};

inline CensusResult census(const IntPolynomial& f, u64 X, const CensusOptions& opt = {}) {
    if (X < 1) throw std::invalid_argument("census: X must be >= 1");
    if (f.degree() < 1) throw std::invalid_argument("census: polynomial must be nonconstant");
    if (!f.is_separable()) throw std::invalid_argument("census: polynomial must be separable");
    Factorization content = factorize(f.content_gcd(), opt.seed);
    if (mpz_class sq = smallest_square_prime(content); sq != 0)
        throw SolubilityFailure(sq.get_ui());

    CensusResult res;
    res.poly_id = f.id();
    res.X = X;
    res.B = opt.B ? opt.B : std::max<u64>(10000, X);
    const u64 B = res.B;
    u64 ell = f.cyclotomic_index();

    // stage 0: exact values, zero detection
    res.rows.resize(X);
    for (u64 d = 1; d <= X; ++d) {
        CensusRow& row = res.rows[d - 1];
        row.d = d;
        row.value = f(mpz_class(d));
        if (row.value == 0) {
            row.verdict = Verdict::zero;
            ++res.zero_count;
        }
    }

    // stage 1: for each prime p <= B mark d = root (mod p^2) as HAS_SQUARE(p),
    // ascending p so the recorded witness is the smallest such prime; the mod-p
    // roots feed the stage-2 division sieve
    std::vector<u64> witness1(X + 1, 0);
    std::vector<std::vector<u64>> small_divisors(X + 1);
    {
        std::vector<u64> primes = primes_in(PrimeRange{2, B});
        const u64 block = 512;
        u64 nblocks = (primes.size() + block - 1) / block;
        struct PrimeRoots {
            u64 p;
            std::vector<u64> r1, r2;
        };
        run_indexed<std::vector<PrimeRoots>>(
            nblocks, opt.workers,
            [&](u64 bi) {
                std::vector<PrimeRoots> out;
                u64 lo = bi * block, hi = std::min<u64>(primes.size(), lo + block);
                for (u64 i = lo; i < hi; ++i) {
                    u64 p = primes[i];
                    RootSet rs1;
                    if (ell) {
                        if (p % ell != 1 && p != ell) continue;
                        rs1 = cyclotomic_roots(ell, p, 1, opt.seed);
                    } else {
                        rs1 = roots_mod_p(f, p, opt.seed);
                    }
                    if (rs1.empty()) continue;
                    RootSet rs2 = lift_roots(f, p, 2, rs1);
                    out.push_back(PrimeRoots{p, std::move(rs1.residues), std::move(rs2.residues)});
                }
                return out;
            },
            [&](u64, std::vector<PrimeRoots>&& batch) {
                for (auto& pr : batch) {
                    u64 p2 = pr.p * pr.p;
                    for (u64 a : pr.r2)
                        for (u64 d = (a == 0 ? p2 : a); d <= X; d += p2)
                            if (!witness1[d]) witness1[d] = pr.p;
                    for (u64 a : pr.r1)
                        for (u64 d = (a == 0 ? pr.p : a); d <= X; d += pr.p)
                            small_divisors[d].push_back(pr.p);
                }
            });
    }

    // stage 2: decide every unmarked nonzero d exactly.  After dividing out
    // the sieved primes the cofactor has all prime factors > B; below B^2 it
    // is automatically square-free (it must be 1 or a single prime), otherwise
    // a perfect-square test, a primality test, and full factorization settle it.
    mpz_class b2 = mpz_class(B) * B;
    struct Stage2Out {
        std::vector<std::pair<mpz_class, u64>> links;
    };
    const u64 dblock = 1024;
    u64 ndblocks = (X + dblock - 1) / dblock;
    run_indexed<Stage2Out>(
        ndblocks, opt.workers,
        [&](u64 bi) {
            Stage2Out out;
            u64 lo = 1 + bi * dblock, hi = std::min(X, lo + dblock - 1);
            for (u64 d = lo; d <= hi; ++d) {
                CensusRow& row = res.rows[d - 1];
                if (row.verdict == Verdict::zero) continue;
                if (witness1[d]) {
                    row.verdict = Verdict::has_square;
                    row.witness = witness1[d];
                    continue;
                }
                mpz_class v = abs(row.value);
                bool marked = false;
                for (u64 p : small_divisors[d]) {
                    unsigned mult = 0;
                    while (mpz_divisible_ui_p(v.get_mpz_t(), p)) {
                        mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), p);
                        ++mult;
                    }
                    if (mult >= 2) {  // cannot happen after stage 1; kept as a guard
                        row.verdict = Verdict::has_square;
                        row.witness = p;
                        marked = true;
                        break;
                    }
                }
                if (marked) continue;
                // cofactor decision
                if (v == 1 || v < b2) {
                    row.verdict = Verdict::squarefree;
                    continue;
                }
                if (is_perfect_square(v)) {
                    mpz_class root;
                    mpz_sqrt(root.get_mpz_t(), v.get_mpz_t());
                    Factorization rf = factorize(root, mix_seed(opt.seed, d));
                    row.verdict = Verdict::has_square;
                    row.witness = rf.factors.front().first;
                    out.links.emplace_back(row.witness, d);
                    continue;
                }
                if (classify_prime(v, opt.seed) != Primality::composite) {
                    row.verdict = Verdict::squarefree;
                    continue;
                }
                Factorization vf = factorize(v, mix_seed(opt.seed, d));
                mpz_class sq = smallest_square_prime(vf);
                if (sq == 0) {
                    row.verdict = Verdict::squarefree;
                } else {
                    row.verdict = Verdict::has_square;
                    row.witness = sq;
                    out.links.emplace_back(sq, d);
                }
            }
            return out;
        },
        [&](u64, Stage2Out&& out) {
            for (auto& l : out.links) res.large_square_links.push_back(std::move(l));
        });

    for (const auto& row : res.rows) {
        if (row.verdict == Verdict::squarefree) ++res.squarefree_count;
        if (row.verdict == Verdict::has_square) ++res.has_square_count;
    }
    res.valid_count = X - res.zero_count;

    if (!opt.csv_path.empty()) {
        std::ofstream csv(opt.csv_path, std::ios::trunc);
        if (!csv) throw std::runtime_error("census: cannot write " + opt.csv_path);
        csv << "d,value,verdict,witness_prime\n";
        for (const auto& row : res.rows) {
            csv << row.d << "," << row.value.get_str() << "," << verdict_name(row.verdict) << ",";
            if (row.witness != 0) csv << row.witness.get_str();
            csv << "\n";
        }
    }
    return res;
}

// empirical vs. bracket midpoint; flagged when the deviation exceeds the
// bracket width plus the configured slack
struct DensityComparison {
    double empirical = 0, midpoint = 0, deviation = 0, bracket_width = 0, slack = 0;
    bool flagged = false;
};

inline DensityComparison compare_density(const EulerProduct& ep, const CensusResult& cs,
                                         double slack = 0.005) {
    DensityComparison c;
    c.empirical = cs.empirical();
    c.midpoint = (ep.lo.get_d() + ep.hi.get_d()) / 2;
    c.deviation = c.empirical - c.midpoint;
    c.bracket_width = ep.hi.get_d() - ep.lo.get_d();
    c.slack = slack;
    c.flagged = std::abs(c.deviation) > c.bracket_width + slack;
    return c;
}

}  // namespace sqfv
