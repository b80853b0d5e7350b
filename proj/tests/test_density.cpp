#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracle.hpp"
#include "sqfv/density.hpp"

using namespace sqfv;
namespace fs = std::filesystem;

TEST_CASE("euler product exact values", "[density]") {
    IntPolynomial phi5 = IntPolynomial::cyclotomic(5);
    EulerProduct ep = euler_product(phi5, 11);
    CHECK(ep.exact);
    CHECK(ep.trunc_lo == mpq_class(117, 121));
    CHECK(ep.trunc_hi == mpq_class(117, 121));
    // tail factor 1 - 4/10 on the low side
    CHECK(ep.lo == mpq_class(117, 121) * mpq_class(3, 5));
    CHECK(ep.hi == mpq_class(117, 121));
    CHECK(ep.contributing == 1);  // only p = 11 contributes below 12
    REQUIRE(ep.has_unity);
    mpq_class unity_expect = mpq_class(24, 25) * mpq_class(116, 121);
    CHECK(ep.unity_trunc_lo == unity_expect);
    CHECK(ep.unity_lo == unity_expect * mpq_class(1, 2));  // tail with g = ell
    CHECK(ep.unity_hi == unity_expect);

    // X^2+X+1 is phi3: delta(4) = delta(9) = 0, so the truncated product at
    // M = 4 is 1, while the unity companion picks up A_3 = 1
    EulerProduct one = euler_product(IntPolynomial::parse("1,1,1"), 4);
    CHECK(one.exact);
    CHECK(one.trunc_lo == 1);
    CHECK(one.contributing == 0);
    CHECK(one.has_unity);
    CHECK(one.unity_trunc_hi == mpq_class(8, 9));

    // X^2+1 is outside the odd-prime cyclotomic registry: no companion product
    EulerProduct plain = euler_product(IntPolynomial::parse("1,0,1"), 4);
    CHECK(plain.exact);
    CHECK(plain.trunc_lo == 1);
    CHECK_FALSE(plain.has_unity);
}

TEST_CASE("euler product brackets nest as M grows", "[density]") {
    IntPolynomial x21 = IntPolynomial::parse("1,0,1");
    EulerProduct a = euler_product(x21, 100);
    EulerProduct b = euler_product(x21, 1000);
    EulerProduct c = euler_product(x21, 5000);
    CHECK(a.lo <= b.lo);
    CHECK(b.lo <= c.lo);
    CHECK(c.hi <= b.hi);
    CHECK(b.hi <= a.hi);
    CHECK(c.lo < c.hi);
    // bracket width shrinks like g/M
    CHECK(c.hi - c.lo < mpq_class(3, 1000));
}

TEST_CASE("fixed-point accumulation brackets the exact product", "[density]") {
    IntPolynomial x21 = IntPolynomial::parse("1,0,1");
    EulerProductOptions all_exact;
    all_exact.exact_cutoff = 1u << 30;
    EulerProductOptions fixed;
    fixed.exact_cutoff = 50;  // fixed-point beyond p = 50
    EulerProduct ex = euler_product(x21, 2000, all_exact);
    EulerProduct fx = euler_product(x21, 2000, fixed);
    CHECK(ex.exact);
    CHECK_FALSE(fx.exact);
    CHECK(fx.trunc_lo <= ex.trunc_lo);
    CHECK(ex.trunc_hi <= fx.trunc_hi);
    // 40 decimal digits of head-room: the directed-rounding gap is tiny
    mpq_class gap = fx.trunc_hi - fx.trunc_lo;
    CHECK(gap >= 0);
    CHECK(gap < mpq_class(mpz_class(1), mpz_class("1000000000000000000000000000000")));
}

TEST_CASE("euler product validates input", "[density]") {
    CHECK_THROWS_AS(euler_product(IntPolynomial::parse("1,2,1"), 100), std::invalid_argument);
    CHECK_THROWS_AS(euler_product(IntPolynomial::parse("7"), 100), std::invalid_argument);
    CHECK_THROWS_AS(euler_product(IntPolynomial::cyclotomic(5), 1), std::invalid_argument);
    CHECK_THROWS_AS(euler_product(IntPolynomial::parse("4,4"), 100), SolubilityFailure);
}

TEST_CASE("census frozen verdicts for x^2+1", "[census]") {
    CensusOptions opt;
    opt.B = 10;
    CensusResult cs = census(IntPolynomial::parse("1,0,1"), 20, opt);
    CHECK(cs.B == 10);
    CHECK(cs.valid_count == 20);
    CHECK(cs.zero_count == 0);
    CHECK(cs.has_square_count == 2);  // d = 7 (50) and d = 18 (325)
    CHECK(cs.squarefree_count == 18);
    CHECK(cs.rows[6].verdict == Verdict::has_square);
    CHECK(cs.rows[6].witness == 5);
    CHECK(cs.rows[17].verdict == Verdict::has_square);
    CHECK(cs.rows[17].witness == 5);
    CHECK(cs.rows[0].value == 2);
    CHECK(cs.rows[0].verdict == Verdict::squarefree);
    CHECK(cs.large_square_links.empty());
}

TEST_CASE("census csv stream", "[census]") {
    fs::path dir = fs::temp_directory_path() / "sqfv_census_tests";
    fs::create_directories(dir);
    fs::path csv = dir / "x2p1.csv";
    CensusOptions opt;
    opt.B = 10;
    opt.csv_path = csv.string();
    census(IntPolynomial::parse("1,0,1"), 8, opt);
    std::ifstream in(csv);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() ==
          "d,value,verdict,witness_prime\n"
          "1,2,SQUAREFREE,\n"
          "2,5,SQUAREFREE,\n"
          "3,10,SQUAREFREE,\n"
          "4,17,SQUAREFREE,\n"
          "5,26,SQUAREFREE,\n"
          "6,37,SQUAREFREE,\n"
          "7,50,HAS_SQUARE,5\n"
          "8,65,SQUAREFREE,\n");
}

TEST_CASE("census links square primes beyond the sieve bound", "[census]") {
    // phi5(58) = 11 * 61 * 131^2 with B = 100: stage 2 must find 131
    CensusOptions opt;
    opt.B = 100;
    CensusResult cs = census(IntPolynomial::cyclotomic(5), 200, opt);
    REQUIRE(cs.large_square_links.size() == 1);
    CHECK(cs.large_square_links[0].first == 131);
    CHECK(cs.large_square_links[0].second == 58);
    CHECK(cs.rows[57].verdict == Verdict::has_square);
    CHECK(cs.rows[57].witness == 131);

    // x^2+1 at d = 38: 1445 = 5 * 17^2, witness 17 > B = 10
    CensusOptions o2;
    o2.B = 10;
    CensusResult c2 = census(IntPolynomial::parse("1,0,1"), 60, o2);
    bool found = false;
    for (const auto& [p, d] : c2.large_square_links) found |= (p == 17 && d == 38);
    CHECK(found);
    CHECK(c2.rows[37].witness == 17);
}

TEST_CASE("census zero values and negative values", "[census]") {
    // f = X^2 - 4: f(2) = 0
    CensusResult cs = census(IntPolynomial::parse("-4,0,1"), 10, {});
    CHECK(cs.zero_count == 1);
    CHECK(cs.valid_count == 9);
    CHECK(cs.rows[1].verdict == Verdict::zero);
    CHECK(cs.rows[1].witness == 0);
    // f(1) = -3 square-free; f(6) = 32 has 2^5
    CHECK(cs.rows[0].verdict == Verdict::squarefree);
    CHECK(cs.rows[5].verdict == Verdict::has_square);
    CHECK(cs.rows[5].witness == 2);

    // f = X - 10: negative values factor by absolute value
    CensusResult neg = census(IntPolynomial::parse("-10,1"), 12, {});
    CHECK(neg.rows[1].value == -8);
    CHECK(neg.rows[1].verdict == Verdict::has_square);
    CHECK(neg.rows[9].verdict == Verdict::zero);
    CHECK(neg.rows[3].verdict == Verdict::squarefree);  // -6
}

TEST_CASE("census equals full factorization", "[census][oracle]") {
    for (const char* poly : {"cyclotomic:5", "1,0,1"}) {
        IntPolynomial f = IntPolynomial::parse(poly);
        CensusResult cs = census(f, 500, {});
        for (u64 d = 1; d <= 500; ++d) {
            const CensusRow& row = cs.rows[d - 1];
            mpz_class v = f(mpz_class(d));
            REQUIRE(row.value == v);
            if (v == 0) {
                CHECK(row.verdict == Verdict::zero);
                continue;
            }
            Factorization fact = factorize(abs(v));
            mpz_class w = smallest_square_prime(fact);
            INFO("poly=" << poly << " d=" << d << " value=" << v.get_str());
            if (w == 0) {
                CHECK(row.verdict == Verdict::squarefree);
            } else {
                CHECK(row.verdict == Verdict::has_square);
                CHECK(row.witness == w);
            }
        }
    }
}

TEST_CASE("census of the identity matches the classical square-free count", "[census]") {
    CensusResult cs = census(IntPolynomial::parse("0,1"), 100000, {});
    CHECK(cs.squarefree_count == 60794);
    CHECK(cs.valid_count == 100000);
    // 6/pi^2 = 0.6079...
    CHECK(cs.empirical() == Catch::Approx(0.60794).margin(1e-9));
}

TEST_CASE("census validates input", "[census]") {
    CHECK_THROWS_AS(census(IntPolynomial::parse("1,2,1"), 100, {}), std::invalid_argument);
    CHECK_THROWS_AS(census(IntPolynomial::parse("4,4"), 100, {}), SolubilityFailure);
    CHECK_THROWS_AS(census(IntPolynomial::parse("7"), 100, {}), std::invalid_argument);
    CensusResult cs = census(IntPolynomial::parse("2,2"), 50, {});  // content 2 is fine
    CHECK(cs.valid_count == 50);
}

TEST_CASE("census is deterministic across worker counts", "[census]") {
    CensusOptions o1, o4;
    o1.workers = 1;
    o4.workers = 4;
    CensusResult a = census(IntPolynomial::cyclotomic(5), 400, o1);
    CensusResult b = census(IntPolynomial::cyclotomic(5), 400, o4);
    REQUIRE(a.rows.size() == b.rows.size());
    for (size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].verdict == b.rows[i].verdict);
        CHECK(a.rows[i].witness == b.rows[i].witness);
    }
    CHECK(a.large_square_links == b.large_square_links);
}

TEST_CASE("compare_density flags only real deviations", "[density]") {
    EulerProduct ep;
    ep.lo = mpq_class(1, 2);
    ep.hi = mpq_class(51, 100);
    CensusResult cs;
    cs.valid_count = 1000;
    cs.squarefree_count = 505;  // empirical 0.505, midpoint 0.505
    DensityComparison ok = compare_density(ep, cs, 0.005);
    CHECK_FALSE(ok.flagged);
    CHECK(ok.midpoint == Catch::Approx(0.505));
    cs.squarefree_count = 700;  // way outside
    DensityComparison bad = compare_density(ep, cs, 0.005);
    CHECK(bad.flagged);
    CHECK(bad.deviation == Catch::Approx(0.195));
}

TEST_CASE("euler product and census agree at desk scale", "[density]") {
    // small but real: phi3 over X = 20000 with M = 2000
    IntPolynomial phi3 = IntPolynomial::cyclotomic(3);
    EulerProduct ep = euler_product(phi3, 2000);
    CensusOptions opt;
    opt.workers = 2;
    CensusResult cs = census(phi3, 20000, opt);
    DensityComparison cmp = compare_density(ep, cs, 0.01);
    CHECK_FALSE(cmp.flagged);
}
