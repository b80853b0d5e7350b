#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "oracle.hpp"
#include "sqfv/factor.hpp"
#include "sqfv/modular.hpp"
#include "sqfv/primes.hpp"

using namespace sqfv;

TEST_CASE("modular arithmetic basics", "[modular]") {
    // wraparound-safe: (m-1) + (m-2) = m-3 (mod m) at m = 2^64-1
    CHECK(add_mod(u64(-2), u64(-3), u64(-1)) == u64(-4));
    CHECK(sub_mod(2, 5, 7) == 4);
    CHECK(mul_mod(u64(1) << 62, 6, (u64(1) << 63) - 25) == ((u128(1) << 62) * 6) % ((u64(1) << 63) - 25));
    CHECK(pow_mod(2, 10, 1000) == 24);
    CHECK(pow_mod(0, 0, 5) == 1);
    CHECK(pow_mod(7, 3, 1) == 0);
}

TEST_CASE("modular arithmetic vs gmp on random values", "[modular]") {
    SplitMix64 rng{123};
    for (int i = 0; i < 2000; ++i) {
        u64 m = rng.next() | 1;
        u64 a = rng.next() % m, b = rng.next() % m, e = rng.next() % 1000;
        mpz_class am(static_cast<unsigned long>(a)), bm(static_cast<unsigned long>(b)),
            mm(static_cast<unsigned long>(m));
        CHECK(mul_mod(a, b, m) == mpz_class(am * bm % mm).get_ui());
        mpz_class pw;
        mpz_powm_ui(pw.get_mpz_t(), am.get_mpz_t(), e, mm.get_mpz_t());
        CHECK(pow_mod(a, e, m) == pw.get_ui());
        CHECK(add_mod(a, b, m) == mpz_class((am + bm) % mm).get_ui());
        CHECK(sub_mod(a, b, m) == mpz_class(((am - bm) % mm + mm) % mm).get_ui());
    }
}

TEST_CASE("inv_mod", "[modular]") {
    SplitMix64 rng{7};
    for (int i = 0; i < 500; ++i) {
        u64 m = 2 + rng.next() % 1000000;
        u64 a = 1 + rng.next() % (m - 1);
        if (std::gcd(a, m) != 1) {
            CHECK_THROWS_AS(inv_mod(a, m), std::invalid_argument);
        } else {
            u64 v = inv_mod(a, m);
            CHECK(v < m);
            CHECK(mul_mod(a, v, m) == 1 % m);
        }
    }
    CHECK(inv_mod(3, 11) == 4);
    CHECK_THROWS_AS(inv_mod(6, 9), std::invalid_argument);
}

TEST_CASE("sqrt_mod against residue scan", "[modular]") {
    for (u64 p : oracle::naive_primes(200)) {
        if (p == 2) continue;
        for (u64 a = 0; a < p; ++a) {
            u64 r = sqrt_mod(a, p);
            bool is_residue = false;
            for (u64 x = 0; x < p && !is_residue; ++x) is_residue = mul_mod(x, x, p) == a;
            if (is_residue) {
                REQUIRE(r < p);
                CHECK(mul_mod(r, r, p) == a);
            } else {
                CHECK(r == p);  // sentinel: no square root
            }
        }
    }
}

TEST_CASE("sqrt_mod on large primes", "[modular]") {
    // 2^61 - 1 is prime; p = 1 (mod 4) case via 1000003
    u64 p = (u64(1) << 61) - 1;
    SplitMix64 rng{99};
    for (int i = 0; i < 50; ++i) {
        u64 x = rng.next() % p;
        u64 a = mul_mod(x, x, p);
        u64 r = sqrt_mod(a, p);
        REQUIRE(r < p);
        CHECK(mul_mod(r, r, p) == a);
    }
}

TEST_CASE("isqrt and prime_power", "[modular]") {
    for (u64 n : {u64(0), u64(1), u64(2), u64(3), u64(4), u64(15), u64(16), u64(17),
                  u64(999999999999999999ULL)}) {
        u64 r = isqrt_u64(n);
        CHECK(r * r <= n);
        CHECK((r + 1) * (r + 1) > n);
    }
    CHECK(prime_power(2, 10) == 1024);
    CHECK(prime_power(11, 2) == 121);
    CHECK_THROWS_AS(prime_power(2, 64), std::overflow_error);
    CHECK_THROWS_AS(prime_power(3, 41), std::overflow_error);
}

TEST_CASE("is_prime_u64 vs trial division", "[primes]") {
    for (u64 n = 0; n < 20000; ++n) CHECK(is_prime_u64(n) == oracle::naive_is_prime(n));
    // strong pseudoprime traps and known primes
    CHECK_FALSE(is_prime_u64(3215031751ULL));
    CHECK_FALSE(is_prime_u64(341550071728321ULL));
    CHECK_FALSE(is_prime_u64(561));
    CHECK_FALSE(is_prime_u64(41041));
    CHECK(is_prime_u64((u64(1) << 61) - 1));
    CHECK(is_prime_u64(200003));
    CHECK(is_prime_u64(18446744073709551557ULL));  // largest prime < 2^64
}

TEST_CASE("classify_prime", "[primes]") {
    CHECK(classify_prime(mpz_class(97)) == Primality::prime);
    CHECK(classify_prime(mpz_class(100)) == Primality::composite);
    CHECK(classify_prime(mpz_class("2305843009213693951")) == Primality::prime);  // 2^61-1 < 2^64: exact
    // beyond 64 bits only probable
    mpz_class big = mpz_class("1000000000000000000000000000057");  // 10^30 + 57, prime
    CHECK(classify_prime(big) == Primality::probable_prime);
    mpz_class comp = mpz_class("1000000000000000000000000000001");  // divisible by 10^10+1's factors
    CHECK(classify_prime(comp) == Primality::composite);
    CHECK(classify_prime(mpz_class(0)) == Primality::composite);
    CHECK(classify_prime(mpz_class(1)) == Primality::composite);
    CHECK(classify_prime(mpz_class(2)) == Primality::prime);
}

TEST_CASE("sieves vs trial division", "[primes]") {
    CHECK(simple_sieve(10000) == oracle::naive_primes(10000));
    CHECK(simple_sieve(1) == std::vector<u64>{});
    CHECK(simple_sieve(2) == std::vector<u64>{2});

    std::vector<u64> seg;
    for_each_prime(1000000, 1010000, [&](u64 p) { seg.push_back(p); });
    std::vector<u64> ref;
    for (u64 n = 1000000; n <= 1010000; ++n)
        if (oracle::naive_is_prime(n)) ref.push_back(n);
    CHECK(seg == ref);

    CHECK(count_primes(2, 200000) == 17984);
    CHECK(primes_in(PrimeRange{10, 30}) == std::vector<u64>{11, 13, 17, 19, 23, 29});
}

TEST_CASE("segmented sieve terminates at the top of u64", "[primes]") {
    // segment advance must not wrap past hi = 2^64 - 1; with a bounded base
    // table the output is exactly the values free of factors <= 65536
    std::vector<u64> base = simple_sieve(65536);
    std::vector<u64> got;
    u64 hi = u64(-1);
    for_each_prime_seg(hi - 200, hi, base, [&](u64 v) { got.push_back(v); }, 64);
    REQUIRE(!got.empty());
    for (u64 v = hi - 200;; ++v) {
        bool rough = true;
        for (u64 p : base)
            if (v % p == 0) {
                rough = false;
                break;
            }
        CHECK(rough == (std::find(got.begin(), got.end(), v) != got.end()));
        if (v == hi) break;
    }
    CHECK(std::find(got.begin(), got.end(), 18446744073709551557ULL) != got.end());
}

TEST_CASE("factorize round-trips on random inputs", "[factor]") {
    SplitMix64 rng{2024};
    for (int i = 0; i < 10000; ++i) {
        u64 n = 1 + rng.next() % 1000000000000ULL;  // < 10^12
        Factorization f = factorize(mpz_class(static_cast<unsigned long>(n)));
        mpz_class prod = 1;
        for (const auto& [p, e] : f.factors) {
            CHECK(classify_prime(p) != Primality::composite);
            for (unsigned j = 0; j < e; ++j) prod *= p;
        }
        CHECK(prod == n);
        CHECK(f.certified);
    }
}

TEST_CASE("factorize vs trial division", "[factor]") {
    SplitMix64 rng{5};
    for (int i = 0; i < 300; ++i) {
        u64 n = 2 + rng.next() % 100000000;
        Factorization f = factorize(mpz_class(static_cast<unsigned long>(n)));
        auto ref = oracle::naive_factor(n);
        REQUIRE(f.factors.size() == ref.size());
        for (size_t j = 0; j < ref.size(); ++j) {
            CHECK(f.factors[j].first == ref[j].first);
            CHECK(f.factors[j].second == ref[j].second);
        }
    }
}

TEST_CASE("factorize structured inputs", "[factor]") {
    CHECK(factorize(mpz_class(1)).factors.empty());
    CHECK_THROWS_AS(factorize(mpz_class(0)), std::invalid_argument);
    CHECK_THROWS_AS(factorize(mpz_class(-12)), std::invalid_argument);
    CHECK(factorize(mpz_class(12)).factors ==
          std::vector<std::pair<mpz_class, unsigned>>{{2, 2}, {3, 1}});

    // perfect powers never stall the splitter
    mpz_class p9 = mpz_class("1000000007");
    Factorization f = factorize(p9 * p9 * p9);
    REQUIRE(f.factors.size() == 1);
    CHECK(f.factors[0] == std::pair<mpz_class, unsigned>{p9, 3});

    mpz_class two100;
    mpz_ui_pow_ui(two100.get_mpz_t(), 2, 100);
    f = factorize(two100);
    REQUIRE(f.factors.size() == 1);
    CHECK(f.factors[0] == std::pair<mpz_class, unsigned>{2, 100});

    // semiprime beyond 2^64 exercises the mpz rho path
    mpz_class a("10000000019"), b("10000000033");
    f = factorize(a * b);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0].first == a);
    CHECK(f.factors[1].first == b);

    // u64 rho path: semiprime of two ~10^9 primes
    f = factorize(mpz_class("1000000007") * mpz_class("1000000009"));
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0].first == mpz_class("1000000007"));
}

TEST_CASE("factorize determinism across seeds is not required, value is", "[factor]") {
    mpz_class n = mpz_class("10000000019") * mpz_class("10000000033") * 4;
    Factorization f1 = factorize(n, 1), f2 = factorize(n, 999);
    CHECK(f1.factors == f2.factors);  // canonical sorted output
}

TEST_CASE("square-freeness helpers", "[factor]") {
    CHECK(is_squarefree(factorize(mpz_class(30))));
    CHECK_FALSE(is_squarefree(factorize(mpz_class(12))));
    CHECK(smallest_square_prime(factorize(mpz_class(30))) == 0);
    CHECK(smallest_square_prime(factorize(mpz_class(12))) == 2);
    CHECK(smallest_square_prime(factorize(mpz_class(9 * 25))) == 3);
    CHECK(is_perfect_square(mpz_class(0)));
    CHECK(is_perfect_square(mpz_class(144)));
    CHECK_FALSE(is_perfect_square(mpz_class(145)));
    CHECK_FALSE(is_perfect_square(mpz_class(-4)));
}
