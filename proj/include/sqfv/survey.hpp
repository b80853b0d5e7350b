#pragma once

#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "sqfv/parallel.hpp"
#include "sqfv/r_invariant.hpp"

namespace sqfv {

// Per-prime record behind the sets S^1 and S^2: R(p), R(p^2) and the
// exception flag R(p^2) <= p.
struct SurveyRow {
    u64 p = 0;
    RInvariantRecord r1, r2;
    bool exception = false;
};

struct SurveyOptions {
    unsigned workers = 1;
    u64 chunk_size = u64(1) << 16;
    u64 seed = kDefaultSeed;
    std::string csv_path;      // write rows here when nonempty
    std::string journal_path;  // chunk journal; enables resume
    bool resume = false;       // continue a run recorded in journal_path
};

struct SurveyReport {
    std::string poly_id;
    u64 T = 0;
    std::vector<SurveyRow> rows;  // sorted by p
    u64 s1_count = 0;             // |{p : R(p) finite and <= T}|
    u64 s2_count = 0;             // |{p : R(p^2) finite and <= T}|
    std::vector<u64> exceptions;  // ascending
};

namespace detail {

inline std::string r_to_csv(const RInvariantRecord& r) {
    switch (r.kind) {
        case RKind::finite: return std::to_string(r.value);
        case RKind::infinite: return "inf";
        default: throw std::logic_error("r_to_csv: exceeded records never reach CSV");
    }
}

inline std::string row_to_csv(const SurveyRow& row) {
    return std::to_string(row.p) + "," + r_to_csv(row.r1) + "," + r_to_csv(row.r2) + "," +
           (row.exception ? "1" : "0");
}

inline RInvariantRecord r_from_csv(const std::string& field, u64 n) {
    RInvariantRecord r;
    r.n = n;
    if (field == "inf") return r;
    r.kind = RKind::finite;
    r.value = std::stoull(field);
    return r;
}

inline SurveyRow row_from_csv(const std::string& line) {
    std::stringstream ss(line);
    std::string f[4];
    for (int i = 0; i < 4; ++i)
        if (!std::getline(ss, f[i], ','))
            throw std::runtime_error("survey csv: malformed row '" + line + "'");
    SurveyRow row;
    row.p = std::stoull(f[0]);
    row.r1 = r_from_csv(f[1], row.p);
    row.r2 = r_from_csv(f[2], row.p * row.p);
    row.exception = f[3] == "1";
    return row;
}

inline constexpr const char* kSurveyCsvHeader = "p,r1,r2,exception";

struct JournalState {
    u64 next_chunk = 0;   // first chunk that still needs computing
    u64 rows_done = 0;    // CSV data rows certified by the journal
};

inline std::string journal_header(const std::string& poly_id, u64 T, u64 chunk, u64 seed) {
    return "# poly=" + poly_id + " T=" + std::to_string(T) + " chunk=" + std::to_string(chunk) +
           " seed=" + std::to_string(seed);
}

// Parse and validate an existing journal: header key must match, chunk lines
// must be consecutive from 0.
inline JournalState read_journal(const std::string& path, const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("survey: cannot read journal " + path);
    std::string line;
    if (!std::getline(in, line) || line != expected_header)
        throw std::runtime_error("survey: journal key mismatch in " + path +
                                 " (expected '" + expected_header + "', found '" + line + "')");
    JournalState st;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string f[4];
        for (int i = 0; i < 4; ++i)
            if (!std::getline(ss, f[i], ','))
                throw std::runtime_error("survey: malformed journal line '" + line + "'");
        u64 idx = std::stoull(f[0]);
        if (idx != st.next_chunk)
            throw std::runtime_error("survey: journal chunks are not consecutive at '" + line + "'");
        st.rows_done += std::stoull(f[3]);
        ++st.next_chunk;
    }
    return st;
}

// Load the first `keep` data rows from an existing CSV; rewrite the file so it
// contains exactly the header plus those rows (rows written after the last
// journal entry are discarded -- the journal is the source of truth).
inline std::vector<SurveyRow> reload_csv(const std::string& path, u64 keep) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("survey: resume requested but CSV missing: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kSurveyCsvHeader)
        throw std::runtime_error("survey: unexpected CSV header in " + path);
    std::vector<SurveyRow> rows;
    rows.reserve(keep);
    while (rows.size() < keep && std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(row_from_csv(line));
    }
    if (rows.size() < keep)
        throw std::runtime_error("survey: CSV has fewer rows than the journal certifies");
    in.close();
    std::ofstream out(path, std::ios::trunc);
    out << kSurveyCsvHeader << "\n";
    for (const auto& r : rows) out << row_to_csv(r) << "\n";
    return rows;
}

// Shared scan driver: enumerate primes in [2, T] chunk by chunk, compute rows
// via row_fn (empty optional = prime not in the survey), merge and persist in
// chunk order.  Deterministic for any worker count.
inline SurveyReport survey_run(const std::string& poly_id, u64 T, const SurveyOptions& opt,
                               const std::function<std::optional<SurveyRow>(u64)>& row_fn) {
    if (T < 2) throw std::invalid_argument("survey: T must be >= 2");
    u64 chunk = opt.chunk_size ? opt.chunk_size : (u64(1) << 16);
    u64 nchunks = (T - 2) / chunk + 1;

    SurveyReport rep;
    rep.poly_id = poly_id;
    rep.T = T;

    std::string header = journal_header(poly_id, T, chunk, opt.seed);
    u64 start_chunk = 0;
    bool fresh = true;
    if (opt.resume && !opt.journal_path.empty() && std::ifstream(opt.journal_path).good()) {
        JournalState st = read_journal(opt.journal_path, header);
        start_chunk = st.next_chunk;
        fresh = false;
        if (!opt.csv_path.empty())
            rep.rows = reload_csv(opt.csv_path, st.rows_done);
        else
            throw std::runtime_error("survey: resume requires the CSV output as well");
    }

    std::ofstream csv, journal;
    if (!opt.csv_path.empty()) {
        csv.open(opt.csv_path, fresh ? std::ios::trunc : std::ios::app);
        if (!csv) throw std::runtime_error("survey: cannot write " + opt.csv_path);
        if (fresh) csv << kSurveyCsvHeader << "\n";
        csv.flush();
    }
    if (!opt.journal_path.empty()) {
        journal.open(opt.journal_path, fresh ? std::ios::trunc : std::ios::app);
        if (!journal) throw std::runtime_error("survey: cannot write " + opt.journal_path);
        if (fresh) journal << header << "\n";
        journal.flush();
    }

    std::vector<u64> base = simple_sieve(isqrt_u64(T));
    run_indexed<std::vector<SurveyRow>>(
        nchunks - start_chunk, opt.workers,
        [&](u64 j) {
            u64 c = start_chunk + j;
            u64 lo = 2 + c * chunk;
            u64 hi = std::min(T, lo + chunk - 1);
            std::vector<SurveyRow> rows;
            for_each_prime_seg(lo, hi, base, [&](u64 p) {
                if (auto row = row_fn(p)) rows.push_back(*row);
            });
            return rows;
        },
        [&](u64 j, std::vector<SurveyRow>&& rows) {
            // CSV is flushed before the journal line: on a crash the journal
            // never certifies rows that were not fully written
            if (csv.is_open()) {
                for (const auto& r : rows) csv << row_to_csv(r) << "\n";
                csv.flush();
            }
            if (journal.is_open()) {
                u64 first = rows.empty() ? 0 : rows.front().p;
                u64 last = rows.empty() ? 0 : rows.back().p;
                journal << (start_chunk + j) << "," << first << "," << last << ","
                        << rows.size() << "\n";
                journal.flush();
            }
            for (auto& r : rows) rep.rows.push_back(std::move(r));
        });

    for (const auto& r : rep.rows) {
        if (r.r1.finite() && r.r1.value <= T) ++rep.s1_count;
        if (r.r2.finite() && r.r2.value <= T) ++rep.s2_count;
        if (r.exception) rep.exceptions.push_back(r.p);
    }
    return rep;
}

inline SurveyRow make_row(u64 p, const RootSet& rs1, const RootSet& rs2) {
    SurveyRow row;
    row.p = p;
    row.r1 = r_from_roots(rs1);
    row.r2 = r_from_roots(rs2);
    row.exception = row.r2.finite() && row.r2.value <= p;
    return row;
}

}  // namespace detail

// Scan all primes p <= T with p = 1 (mod ell) or p = ell via the cyclotomic
// fast path; rows record R(p), R(p^2) and the exception flag R(p^2) <= p.
inline SurveyReport survey_cyclotomic(u64 ell, u64 T, const SurveyOptions& opt = {}) {
    IntPolynomial::cyclotomic(ell);  // validate
    std::string id = "cyclotomic:" + std::to_string(ell);
    return detail::survey_run(id, T, opt, [ell, &opt](u64 p) -> std::optional<SurveyRow> {
        if (p % ell != 1 && p != ell) return std::nullopt;
        RootSet rs1 = cyclotomic_roots(ell, p, 1, opt.seed);
        RootSet rs2 = cyclotomic_roots(ell, p, 2, opt.seed);
        return detail::make_row(p, rs1, rs2);
    });
}

// Same scan for a general polynomial: membership is decided by a nonempty
// root set mod p (scan / closed forms, per roots_mod_p dispatch).
inline SurveyReport survey_general(const IntPolynomial& f, u64 T, const SurveyOptions& opt = {}) {
    if (f.degree() < 1) throw std::invalid_argument("survey: polynomial must be nonconstant");
    if (!f.is_separable()) throw std::invalid_argument("survey: polynomial must be separable");
    Factorization content = factorize(f.content_gcd(), opt.seed);
    if (mpz_class sq = smallest_square_prime(content); sq != 0)
        throw SolubilityFailure(sq.get_ui());
    return detail::survey_run(f.id(), T, opt, [&f, &opt](u64 p) -> std::optional<SurveyRow> {
        RootSet rs1 = roots_mod_p(f, p, opt.seed);
        if (rs1.empty()) return std::nullopt;
        RootSet rs2 = lift_roots(f, p, 2, rs1);
        return detail::make_row(p, rs1, rs2);
    });
}

// Regression guard for the S^1 cardinality bound: |S^1(ell,T)| <= 2*ell*T.
inline bool s1_bound_check(const SurveyReport& rep, u64 ell) {
    return rep.s1_count <= 2 * ell * rep.T;
}

// Direct check of the reformulation "no x < p with p^2 | Phi_ell(x)";
// must equal NOT exception(p) row by row.
inline bool diophantine_check(u64 ell, u64 p) {
    IntPolynomial phi = IntPolynomial::cyclotomic(ell);
    if (p % ell != 1) throw std::invalid_argument("diophantine_check: requires p = 1 (mod ell)");
    u64 p2 = prime_power(p, 2);
    std::vector<u64> cm = phi.coeffs_mod(p2);
    for (u64 x = 1; x < p; ++x)
        if (IntPolynomial::eval_mod(cm, x, p2) == 0) return false;
    return true;
}

}  // namespace sqfv
