// sqfv: square-free values of integer polynomials
//
// Every operation of the library is exposed as a subcommand; `repro <name>`
// runs the canned experiment presets.  Exit codes: 0 success, 1 validation
// error, 2 local solubility failure (some p^2 divides every value).

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>

#include "sqfv/sqfv.hpp"

namespace {

using namespace sqfv;
using ordered_json = nlohmann::ordered_json;

ordered_json q_json(const mpq_class& q) {
    return ordered_json{{"num", q.get_num().get_str()},
                        {"den", q.get_den().get_str()},
                        {"approx", q.get_d()}};
}

std::string join_u64(const std::vector<u64>& v) {
    std::string s;
    for (u64 x : v) {
        if (!s.empty()) s += ",";
        s += std::to_string(x);
    }
    return s.empty() ? "(none)" : s;
}

std::string r_display(const RInvariantRecord& r) {
    switch (r.kind) {
        case RKind::finite: return std::to_string(r.value);
        case RKind::infinite: return "inf";
        default: return "exceeded";
    }
}

void print_survey_line(const std::string& tag, const SurveyReport& rep) {
    std::cout << tag << ": poly=" << rep.poly_id << " T=" << rep.T << " rows=" << rep.rows.size()
              << " s1=" << rep.s1_count << " s2=" << rep.s2_count
              << " exceptions=" << join_u64(rep.exceptions) << "\n";
}

ordered_json survey_json(const SurveyReport& rep, const SurveyOptions& opt) {
    ordered_json j;
    j["config"] = {{"poly", rep.poly_id},
                   {"limit", rep.T},
                   {"chunk", opt.chunk_size},
                   {"seed", opt.seed},
                   {"workers", opt.workers},
                   {"out", opt.csv_path},
                   {"journal", opt.journal_path}};
    j["rows"] = rep.rows.size();
    j["s1"] = rep.s1_count;
    j["s2"] = rep.s2_count;
    j["exceptions"] = rep.exceptions;
    return j;
}

SurveyReport dispatch_survey(const IntPolynomial& f, u64 T, const SurveyOptions& opt) {
    if (u64 ell = f.cyclotomic_index()) return survey_cyclotomic(ell, T, opt);
    return survey_general(f, T, opt);
}

void write_abc_csv(const AbcReport& rep, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("abc: cannot write " + path);
    out << "d,R\n";
    for (const auto& [d, r] : rep.rd) out << d.get_str() << "," << r << "\n";
}

ordered_json abc_json(const AbcReport& rep, u64 seed) {
    AbcMoments m = abc_moment_check(rep);
    return ordered_json{{"config", {{"n", rep.n}, {"a", rep.A}, {"seed", seed}}},
                        {"log_threshold", rep.log_threshold},
                        {"m1", rep.M1},
                        {"m2", rep.M2},
                        {"distinct_d", rep.rd.size()},
                        {"sum_r", rep.sum_R},
                        {"sum_r2", rep.sum_R2},
                        {"r_max", rep.r_max},
                        {"inequality_ok", rep.inequality_ok},
                        {"first_ratio", m.first_ratio},
                        {"second_ratio", m.second_ratio}};
}

int run(int argc, char** argv) {
    CLI::App app{"square-free values of integer polynomials"};
    app.set_config("--config", "", "key=value file; flags take precedence");
    app.require_subcommand(1);

    // defaults shared across subcommands
    u64 seed = kDefaultSeed;
    unsigned workers = default_workers();

    // poly ------------------------------------------------------------------
    auto* sc_poly = app.add_subcommand("poly", "parse a polynomial and print basic invariants");
    std::string poly_arg;
    sc_poly->add_option("--poly", poly_arg, "coefficients ascending, e.g. 2,0,0,0,1, or cyclotomic:5")
        ->required();
    sc_poly->callback([&] {
        IntPolynomial f = IntPolynomial::parse(poly_arg);
        std::cout << "poly=" << f.id() << " degree=" << f.degree()
                  << " content=" << f.content_gcd().get_str()
                  << " separable=" << (f.degree() >= 1 && f.is_separable() ? "yes" : "no");
        if (u64 ell = f.cyclotomic_index()) std::cout << " cyclotomic_index=" << ell;
        std::cout << "\n";
    });

    // prime -----------------------------------------------------------------
    auto* sc_prime = app.add_subcommand("prime", "primality classification");
    std::string prime_n;
    sc_prime->add_option("n", prime_n, "integer to classify")->required();
    sc_prime->add_option("--seed", seed, "PRNG seed");
    sc_prime->callback([&] {
        mpz_class n(prime_n);
        switch (classify_prime(n, seed)) {
            case Primality::prime: std::cout << "prime\n"; break;
            case Primality::probable_prime: std::cout << "probable-prime\n"; break;
            default: std::cout << "composite\n"; break;
        }
    });

    // primes ----------------------------------------------------------------
    auto* sc_primes = app.add_subcommand("primes", "count (or list) primes in a range");
    u64 pr_from = 2, pr_to = 100;
    bool pr_list = false;
    sc_primes->add_option("--from", pr_from, "lower bound (inclusive)");
    sc_primes->add_option("--to", pr_to, "upper bound (inclusive)")->required();
    sc_primes->add_flag("--list", pr_list, "print every prime, one per line");
    sc_primes->callback([&] {
        if (pr_list) {
            for_each_prime(pr_from, pr_to, [](u64 p) { std::cout << p << "\n"; });
        } else {
            std::cout << count_primes(pr_from, pr_to) << "\n";
        }
    });

    // factor ----------------------------------------------------------------
    auto* sc_factor = app.add_subcommand("factor", "factor an integer, report square-freeness");
    std::string factor_n;
    sc_factor->add_option("n", factor_n, "integer to factor")->required();
    sc_factor->add_option("--seed", seed, "PRNG seed");
    sc_factor->callback([&] {
        Factorization f = factorize(mpz_class(factor_n), seed);
        std::cout << f.value.get_str() << " =";
        if (f.factors.empty()) std::cout << " " << f.value.get_str();
        for (const auto& [p, e] : f.factors) {
            std::cout << " " << p.get_str();
            if (e > 1) std::cout << "^" << e;
        }
        mpz_class w = smallest_square_prime(f);
        std::cout << " squarefree=" << (w == 0 ? "yes" : "no");
        if (w != 0) std::cout << " witness=" << w.get_str();
        if (!f.certified) std::cout << " certified=no";
        std::cout << "\n";
    });

    // modpow ----------------------------------------------------------------
    auto* sc_modpow = app.add_subcommand("modpow", "b^e mod m");
    u64 mp_b = 0, mp_e = 0, mp_m = 1;
    sc_modpow->add_option("base", mp_b)->required();
    sc_modpow->add_option("exp", mp_e)->required();
    sc_modpow->add_option("mod", mp_m)->required();
    sc_modpow->callback([&] { std::cout << pow_mod(mp_b, mp_e, mp_m) << "\n"; });

    // roots -----------------------------------------------------------------
    auto* sc_roots = app.add_subcommand("roots", "roots of f mod p^k");
    u64 rt_p = 0;
    unsigned rt_k = 1;
    sc_roots->add_option("--poly", poly_arg, "polynomial")->required();
    sc_roots->add_option("--prime", rt_p, "prime p")->required();
    sc_roots->add_option("--power", rt_k, "exponent k");
    sc_roots->add_option("--seed", seed, "PRNG seed");
    sc_roots->callback([&] {
        IntPolynomial f = IntPolynomial::parse(poly_arg);
        if (!is_prime_u64(rt_p)) throw std::invalid_argument("roots: --prime must be prime");
        RootSet rs = roots_mod_prime_power(f, rt_p, rt_k, seed);
        std::cout << "modulus=" << rs.modulus << " count=" << rs.size()
                  << " roots=" << join_u64(rs.residues) << "\n";
    });

    // delta -----------------------------------------------------------------
    auto* sc_delta = app.add_subcommand("delta", "root count of f mod p^k");
    u64 dl_p = 0;
    unsigned dl_k = 2;
    sc_delta->add_option("--poly", poly_arg, "polynomial")->required();
    sc_delta->add_option("--prime", dl_p, "prime p")->required();
    sc_delta->add_option("--power", dl_k, "exponent k");
    sc_delta->add_option("--seed", seed, "PRNG seed");
    sc_delta->callback([&] {
        IntPolynomial f = IntPolynomial::parse(poly_arg);
        if (!is_prime_u64(dl_p)) throw std::invalid_argument("delta: --prime must be prime");
        u64 d = delta(f, dl_p, dl_k, seed);
        std::cout << "poly=" << f.id() << " p=" << dl_p << " k=" << dl_k << " delta=" << d;
        if (u64 ell = f.cyclotomic_index()) {
            u64 a = cyclotomic_unity_classes(ell, dl_p);
            std::cout << " unity_classes=" << a;
            if (dl_k == 2 && a != d)
                std::cout << " note=conventions-differ (delta counts residues mod p^2;"
                             " unity classes count order-ell elements mod p plus x=1)";
        }
        std::cout << "\n";
    });

    // rinv ------------------------------------------------------------------
    auto* sc_rinv = app.add_subcommand("rinv", "R_f(p^k): least d >= 1 with p^k | f(d)");
    u64 rv_p = 0, rv_n = 0, rv_cap = 1000000;
    unsigned rv_k = 1;
    bool rv_signed = false, rv_brute = false;
    sc_rinv->add_option("--poly", poly_arg, "polynomial")->required();
    sc_rinv->add_option("--prime", rv_p, "prime p");
    sc_rinv->add_option("--power", rv_k, "exponent k");
    sc_rinv->add_option("--n", rv_n, "arbitrary modulus (forces --brute)");
    sc_rinv->add_flag("--signed", rv_signed, "minimize over f(d) and f(-d)");
    sc_rinv->add_flag("--brute", rv_brute, "scan d = 1, 2, ... directly");
    sc_rinv->add_option("--cap", rv_cap, "brute-force scan limit");
    sc_rinv->add_option("--seed", seed, "PRNG seed");
    sc_rinv->callback([&] {
        IntPolynomial f = IntPolynomial::parse(poly_arg);
        RInvariantRecord rec;
        if (rv_n) {
            rec = r_brute(f, rv_n, rv_cap);
        } else {
            if (!is_prime_u64(rv_p)) throw std::invalid_argument("rinv: --prime must be prime");
            if (rv_brute)
                rec = r_brute(f, prime_power(rv_p, rv_k), rv_cap);
            else if (rv_signed)
                rec = r_of_prime_power_signed(f, rv_p, rv_k, seed);
            else
                rec = r_of_prime_power(f, rv_p, rv_k, seed);
        }
        std::cout << r_display(rec) << "\n";
    });

    // dioph -----------------------------------------------------------------
    auto* sc_dioph = app.add_subcommand("dioph", "is there x < p with p^2 | Phi_ell(x)?");
    u64 di_ell = 5, di_p = 0;
    sc_dioph->add_option("--ell", di_ell, "odd prime index of the cyclotomic polynomial")->required();
    sc_dioph->add_option("--prime", di_p, "prime p = 1 (mod ell)")->required();
    sc_dioph->callback([&] {
        if (!is_prime_u64(di_p)) throw std::invalid_argument("dioph: --prime must be prime");
        bool clean = diophantine_check(di_ell, di_p);
        std::cout << "ell=" << di_ell << " p=" << di_p << " solution=" << (clean ? "no" : "yes")
                  << "\n";
    });

    // survey ----------------------------------------------------------------
    auto* sc_survey = app.add_subcommand("survey", "R(p), R(p^2) for all primes p <= limit");
    u64 sv_T = 0;
    SurveyOptions sv_opt;
    std::string sv_format = "text";
    sc_survey->add_option("--poly", poly_arg, "polynomial")->required();
    sc_survey->add_option("--limit", sv_T, "scan primes up to this bound")->required();
    sc_survey->add_option("--out", sv_opt.csv_path, "CSV output path");
    sc_survey->add_option("--journal", sv_opt.journal_path, "chunk journal path (enables resume)");
    sc_survey->add_flag("--resume", sv_opt.resume, "continue an interrupted run");
    sc_survey->add_option("--chunk", sv_opt.chunk_size, "primes chunk size");
    sc_survey->add_option("--workers", workers, "worker threads");
    sc_survey->add_option("--seed", seed, "PRNG seed");
    sc_survey->add_option("--format", sv_format, "summary format: text|json")
        ->check(CLI::IsMember({"text", "json"}));
    sc_survey->callback([&] {
        IntPolynomial f = IntPolynomial::parse(poly_arg);
        sv_opt.workers = workers;
        sv_opt.seed = seed;
        SurveyReport rep = dispatch_survey(f, sv_T, sv_opt);
        if (sv_format == "json")
            std::cout << survey_json(rep, sv_opt).dump(2) << "\n";
        else
            print_survey_line("survey", rep);
    });

    // density ---------------------------------------------------------------
    auto* sc_density = app.add_subcommand(
        "density", "truncated Euler product bracket vs. exact census of f(1..X)");
    u64 de_X = 0, de_M = 0, de_B = 0, de_cutoff = 10000;
    double de_slack = 0.005;
    std::string de_out, de_csv;
    sc_density->add_option("--poly", poly_arg, "polynomial")->required();
    sc_density->add_option("--x", de_X, "census range: d = 1..X")->required();
    sc_density->add_option("--trunc", de_M, "Euler product truncation M")->required();
    sc_density->add_option("--sieve-bound", de_B, "census sieve bound B (default max(10^4, X))");
    sc_density->add_option("--exact-cutoff", de_cutoff, "exact rationals for primes <= this");
    sc_density->add_option("--slack", de_slack, "comparison slack");
    sc_density->add_option("--out", de_out, "JSON report path (default stdout)");
    sc_density->add_option("--csv", de_csv, "per-d verdict CSV path");
    sc_density->add_option("--workers", workers, "worker threads");
    sc_density->add_option("--seed", seed, "PRNG seed");
    sc_density->callback([&] {
        IntPolynomial f = IntPolynomial::parse(poly_arg);
        EulerProductOptions eopt;
        eopt.exact_cutoff = de_cutoff;
        eopt.seed = seed;
        EulerProduct ep = euler_product(f, de_M, eopt);
        CensusOptions copt;
        copt.B = de_B;
        copt.workers = workers;
        copt.seed = seed;
        copt.csv_path = de_csv;
        CensusResult cs = census(f, de_X, copt);
        DensityComparison cmp = compare_density(ep, cs, de_slack);

        ordered_json j;
        j["config"] = {{"poly", f.id()},     {"x", de_X},
                       {"trunc_m", de_M},    {"sieve_bound", cs.B},
                       {"exact_cutoff", de_cutoff}, {"slack", de_slack},
                       {"seed", seed},       {"workers", workers}};
        ordered_json prod{{"exact", ep.exact},
                          {"contributing", ep.contributing},
                          {"trunc_lo", q_json(ep.trunc_lo)},
                          {"trunc_hi", q_json(ep.trunc_hi)},
                          {"lo", q_json(ep.lo)},
                          {"hi", q_json(ep.hi)}};
        if (ep.has_unity)
            prod["unity"] = ordered_json{{"trunc_lo", q_json(ep.unity_trunc_lo)},
                                         {"trunc_hi", q_json(ep.unity_trunc_hi)},
                                         {"lo", q_json(ep.unity_lo)},
                                         {"hi", q_json(ep.unity_hi)}};
        j["product"] = prod;
        ordered_json links = ordered_json::array();
        for (const auto& [p, d] : cs.large_square_links)
            links.push_back(ordered_json{{"p", p.get_str()}, {"d", d}});
        j["census"] = {{"valid", cs.valid_count},
                       {"squarefree", cs.squarefree_count},
                       {"has_square", cs.has_square_count},
                       {"zero", cs.zero_count},
                       {"empirical", cs.empirical()},
                       {"large_square_links", links}};
        j["comparison"] = {{"empirical", cmp.empirical},
                           {"midpoint", cmp.midpoint},
                           {"deviation", cmp.deviation},
                           {"bracket_width", cmp.bracket_width},
                           {"slack", cmp.slack},
                           {"flagged", cmp.flagged}};
        if (de_out.empty()) {
            std::cout << j.dump(2) << "\n";
        } else {
            std::ofstream out(de_out, std::ios::trunc);
            if (!out) throw std::runtime_error("density: cannot write " + de_out);
            out << j.dump(2) << "\n";
            std::cout << "density: poly=" << f.id() << " empirical=" << cmp.empirical
                      << " bracket=[" << ep.lo.get_d() << "," << ep.hi.get_d() << "]"
                      << " flagged=" << (cmp.flagged ? "yes" : "no") << " out=" << de_out << "\n";
        }
    });

    // quad ------------------------------------------------------------------
    auto* sc_quad = app.add_subcommand("quad", "exception primes of a quadratic aX^2+bX+c");
    long long q_a = 1, q_b = 0, q_c = 0;
    u64 q_T = 0;
    SurveyOptions q_opt;
    sc_quad->add_option("--a", q_a, "leading coefficient");
    sc_quad->add_option("--b", q_b, "linear coefficient")->required();
    sc_quad->add_option("--c", q_c, "constant coefficient")->required();
    sc_quad->add_option("--limit", q_T, "scan primes up to this bound")->required();
    sc_quad->add_option("--out", q_opt.csv_path, "survey CSV path");
    sc_quad->add_option("--workers", workers, "worker threads");
    sc_quad->add_option("--seed", seed, "PRNG seed");
    sc_quad->callback([&] {
        q_opt.workers = workers;
        q_opt.seed = seed;
        QuadraticSpec spec{q_a, q_b, q_c};
        QuadraticReport rep = quadratic_exceptions(spec, q_T, q_opt);
        std::cout << "quad: g=Y^2+" << spec.b << "Y+" << spec.cprime() << " T=" << rep.T
                  << " exceptions=" << join_u64(rep.exceptions)
                  << " threshold8=" << rep.threshold8
                  << " within=" << (rep.within_threshold ? "yes" : "no") << "\n";
    });

    // rho -------------------------------------------------------------------
    auto* sc_rho = app.add_subcommand("rho", "count residues b mod m with b^(2n) = 1");
    u64 rh_n = 0, rh_m = 0;
    bool rh_fast = false;
    sc_rho->add_option("--n", rh_n, "exponent parameter n")->required();
    sc_rho->add_option("--m", rh_m, "modulus")->required();
    sc_rho->add_flag("--fast", rh_fast, "use gcd(2n, m-1) (m must be an odd prime)");
    sc_rho->callback([&] {
        if (rh_fast) {
            if (!is_prime_u64(rh_m) || rh_m == 2)
                throw std::invalid_argument("rho: --fast requires an odd prime modulus");
            std::cout << rho_fast(rh_n, rh_m) << "\n";
        } else {
            std::cout << rho_count(rh_n, rh_m) << "\n";
        }
    });

    // abc -------------------------------------------------------------------
    auto* sc_abc = app.add_subcommand("abc", "square-free statistics of 1-a^n over A <= |a| <= 2A");
    u64 ab_n = 3, ab_A = 0;
    std::string ab_out, ab_csv;
    sc_abc->add_option("--n", ab_n, "odd exponent n >= 3");
    sc_abc->add_option("--a", ab_A, "range parameter A")->required();
    sc_abc->add_option("--out", ab_out, "JSON report path (default stdout)");
    sc_abc->add_option("--csv", ab_csv, "d,R table path");
    sc_abc->add_option("--seed", seed, "PRNG seed");
    sc_abc->callback([&] {
        AbcReport rep = abc_census(ab_n, ab_A, seed);
        if (!ab_csv.empty()) write_abc_csv(rep, ab_csv);
        ordered_json j = abc_json(rep, seed);
        if (ab_out.empty()) {
            std::cout << j.dump(2) << "\n";
        } else {
            std::ofstream out(ab_out, std::ios::trunc);
            if (!out) throw std::runtime_error("abc: cannot write " + ab_out);
            out << j.dump(2) << "\n";
            std::cout << "abc: n=" << rep.n << " A=" << rep.A << " m1=" << rep.M1
                      << " m2=" << rep.M2 << " sum_r=" << rep.sum_R
                      << " inequality=" << (rep.inequality_ok ? "ok" : "VIOLATED") << "\n";
        }
    });

    // repro -----------------------------------------------------------------
    auto* sc_repro = app.add_subcommand("repro", "run a canned experiment preset");
    std::string rp_name, rp_dir = ".";
    sc_repro->add_option("name", rp_name,
                         "ell5-200k | ell7-100k | ell11-10k | x4plus2-survey | quad-x2plus1 | abc-n3")
        ->required();
    sc_repro->add_option("--out-dir", rp_dir, "artifact directory");
    sc_repro->add_option("--workers", workers, "worker threads");
    sc_repro->add_option("--seed", seed, "PRNG seed");
    sc_repro->callback([&] {
        std::filesystem::create_directories(rp_dir);
        auto path = [&](const std::string& base) { return rp_dir + "/" + base; };
        auto run_survey = [&](const std::string& tag, const std::string& poly, u64 T) {
            SurveyOptions opt;
            opt.workers = workers;
            opt.seed = seed;
            opt.csv_path = path(tag + ".csv");
            opt.journal_path = path(tag + ".journal");
            SurveyReport rep = dispatch_survey(IntPolynomial::parse(poly), T, opt);
            print_survey_line(tag, rep);
        };
        if (rp_name == "ell5-200k") {
            run_survey("ell5-200k", "cyclotomic:5", 200000);
        } else if (rp_name == "ell7-100k") {
            run_survey("ell7-100k", "cyclotomic:7", 100000);
        } else if (rp_name == "ell11-10k") {
            run_survey("ell11-10k", "cyclotomic:11", 10000);
        } else if (rp_name == "x4plus2-survey") {
            run_survey("x4plus2-survey", "2,0,0,0,1", 10000);
        } else if (rp_name == "quad-x2plus1") {
            SurveyOptions opt;
            opt.workers = workers;
            opt.seed = seed;
            opt.csv_path = path("quad-x2plus1.csv");
            QuadraticReport rep = quadratic_exceptions(QuadraticSpec::monic(0, 1), 1000000, opt);
            std::cout << "quad-x2plus1: T=" << rep.T << " exceptions=" << join_u64(rep.exceptions)
                      << " threshold8=" << rep.threshold8
                      << " within=" << (rep.within_threshold ? "yes" : "no") << "\n";
        } else if (rp_name == "abc-n3") {
            for (u64 A : {u64(16), u64(64), u64(128)}) {
                AbcReport rep = abc_census(3, A, seed);
                write_abc_csv(rep, path("abc-n3-A" + std::to_string(A) + ".csv"));
                std::ofstream out(path("abc-n3-A" + std::to_string(A) + ".json"), std::ios::trunc);
                out << abc_json(rep, seed).dump(2) << "\n";
                std::cout << "abc-n3 A=" << A << ": m1=" << rep.M1 << " m2=" << rep.M2
                          << " sum_r=" << rep.sum_R
                          << " inequality=" << (rep.inequality_ok ? "ok" : "VIOLATED") << "\n";
            }
        } else {
            throw std::invalid_argument("repro: unknown preset '" + rp_name + "'");
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const sqfv::SolubilityFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
