#pragma once

#include <gmpxx.h>

#include <sstream>
#include <string>
#include <vector>

#include "sqfv/factor.hpp"

namespace sqfv {

// Exact integer polynomial, coefficients ascending (coeffs[0] = constant
// term).  Normalized: no trailing zero coefficients; empty vector = zero.
class IntPolynomial {
  public:
    IntPolynomial() = default;

    explicit IntPolynomial(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    // For a prime ell this is 1 + X + ... + X^(ell-1): ell ones, degree ell-1.
    static IntPolynomial cyclotomic(u64 ell) {
        if (ell < 3 || ell % 2 == 0 || !is_prime_u64(ell))
            throw std::invalid_argument("cyclotomic: index must be an odd prime");
        return IntPolynomial(std::vector<mpz_class>(ell, 1));
    }

    // Accepts "2,0,0,0,1" (ascending coefficients, = X^4+2) or "cyclotomic:5".
    static IntPolynomial parse(const std::string& text) {
        std::string s = strip(text);
        if (s.rfind("cyclotomic:", 0) == 0) {
            std::string num = strip(s.substr(11));
            try {
                size_t pos = 0;
                unsigned long long ell = std::stoull(num, &pos);
                if (pos != num.size()) throw std::invalid_argument("");
                return cyclotomic(ell);
            } catch (const std::invalid_argument&) {
                throw std::invalid_argument("parse: bad cyclotomic index '" + num + "'");
            } catch (const std::out_of_range&) {
                throw std::invalid_argument("parse: cyclotomic index out of range");
            }
        }
        std::vector<mpz_class> coeffs;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = strip(tok);
            if (tok.empty()) throw std::invalid_argument("parse: empty coefficient");
            try {
                coeffs.emplace_back(tok);
            } catch (const std::invalid_argument&) {
                throw std::invalid_argument("parse: bad coefficient '" + tok + "'");
            }
        }
        if (coeffs.empty()) throw std::invalid_argument("parse: no coefficients");
        return IntPolynomial(std::move(coeffs));
    }

    const std::vector<mpz_class>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for the zero polynomial

    const mpz_class& leading() const {
        if (c_.empty()) throw std::logic_error("leading: zero polynomial");
        return c_.back();
    }

    mpz_class operator()(const mpz_class& x) const {  // Horner
        mpz_class acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    IntPolynomial derivative() const {
        std::vector<mpz_class> d;
        for (size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<unsigned long>(i));
        return IntPolynomial(std::move(d));
    }

    // coefficients reduced into [0, m); used by the u64 evaluation hot paths
    std::vector<u64> coeffs_mod(u64 m) const {
        std::vector<u64> out(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) out[i] = mpz_fdiv_ui(c_[i].get_mpz_t(), m);
        while (!out.empty() && out.back() == 0) out.pop_back();
        return out;
    }

    static u64 eval_mod(const std::vector<u64>& cm, u64 x, u64 m) {
        u64 acc = 0;
        for (auto it = cm.rbegin(); it != cm.rend(); ++it) acc = add_mod(mul_mod(acc, x, m), *it, m);
        return acc;
    }

    // gcd of all values f(n), n in Z.  By finite differences every value is an
    // integer combination of f(0), ..., f(deg), so that gcd suffices.
    mpz_class content_gcd() const {
        if (c_.empty()) throw std::invalid_argument("content_gcd: zero polynomial");
        mpz_class g = 0;
        for (int n = 0; n <= degree(); ++n) {
            mpz_class v = (*this)(n);
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
            if (g == 1) break;
        }
        return g;  // g = 0 only for the zero polynomial, excluded above
    }

    // true iff gcd(f, f') is constant, via a primitive (fraction-free)
    // pseudo-remainder sequence over Z
    bool is_separable() const {
        if (degree() < 1) throw std::invalid_argument("is_separable: degree must be >= 1");
        IntPolynomial a = primitive_part(*this);
        IntPolynomial b = primitive_part(derivative());
        while (!b.is_zero()) {
            IntPolynomial r = primitive_part(pseudo_rem(a, b));
            a = std::move(b);
            b = std::move(r);
        }
        return a.degree() == 0;
    }

    // ell when the coefficients are exactly ell ones with ell an odd prime
    // (the shape produced by cyclotomic()), else 0
    u64 cyclotomic_index() const {
        u64 ell = c_.size();
        if (ell < 3 || ell % 2 == 0 || !is_prime_u64(ell)) return 0;
        for (const auto& v : c_)
            if (v != 1) return 0;
        return ell;
    }

    // canonical text form, reused as report/journal key
    std::string id() const {
        if (u64 ell = cyclotomic_index()) return "cyclotomic:" + std::to_string(ell);
        std::string s;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (i) s += ',';
            s += c_[i].get_str();
        }
        return s.empty() ? "0" : s;
    }

    bool operator==(const IntPolynomial& o) const { return c_ == o.c_; }

  private:
    static std::string strip(const std::string& s) {
        size_t b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        size_t e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    static mpz_class coeff_gcd(const IntPolynomial& f) {
        mpz_class g = 0;
        for (const auto& v : f.c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        return g;
    }

    static IntPolynomial primitive_part(const IntPolynomial& f) {
        if (f.is_zero()) return f;
        mpz_class g = coeff_gcd(f);
        std::vector<mpz_class> out(f.c_.size());
        for (size_t i = 0; i < f.c_.size(); ++i) out[i] = f.c_[i] / g;
        return IntPolynomial(std::move(out));
    }

    // pseudo-remainder: the remainder of lc(b)^(deg a - deg b + 1) * a by b,
    // computed without fractions
    static IntPolynomial pseudo_rem(IntPolynomial a, const IntPolynomial& b) {
        if (b.is_zero()) throw std::logic_error("pseudo_rem: division by zero polynomial");
        const mpz_class& lb = b.leading();
        int db = b.degree();
        while (!a.is_zero() && a.degree() >= db) {
            mpz_class la = a.leading();
            int shift = a.degree() - db;
            std::vector<mpz_class> next(a.c_.size() - 1, 0);
            // next = lb*a - la*X^shift*b, with the leading terms cancelling
            for (int i = 0; i < a.degree(); ++i) next[i] = lb * a.c_[i];
            for (int i = 0; i < db; ++i) next[i + shift] -= la * b.c_[i];
            a = IntPolynomial(std::move(next));
        }
        return a;
    }

    std::vector<mpz_class> c_;
};

}  // namespace sqfv
