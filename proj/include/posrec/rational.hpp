#pragma once

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>

namespace posrec {

using Int = mpz_class;
using Rational = mpq_class;

/// Exact mathematical floor (toward -infinity) of a rational.
inline Int floor_rational(const Rational& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

/// Parse "a" or "a/b" with optional leading '-'. Decimals are rejected so
/// exactness stays explicit at every input boundary.
inline Rational parse_rational(const std::string& s) {
    auto bad = [&](const std::string& why) {
        return std::invalid_argument("invalid rational '" + s + "': " + why);
    };
    if (s.empty()) throw bad("empty string");
    std::size_t i = 0;
    auto scan_int = [&](bool sign_ok) {
        if (sign_ok && i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) throw bad("expected digits");
    };
    scan_int(true);
    if (i < s.size()) {
        if (s[i] == '.') throw bad("decimal notation not accepted, use a/b");
        if (s[i] != '/') throw bad("unexpected character");
        ++i;
        scan_int(false);
        if (i != s.size()) throw bad("unexpected trailing characters");
    }
    Rational r;
    if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0) throw bad("gmp parse failure");
    if (sgn(Rational(r.get_den())) == 0) throw bad("zero denominator");
    r.canonicalize();
    return r;
}

/// Canonical string form: "a" when the denominator is 1, else "a/b".
inline std::string rational_to_string(const Rational& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

/// True iff stored in lowest terms with positive denominator.
inline bool is_canonical(const Rational& x) {
    Rational c = x;
    c.canonicalize();
    return sgn(x.get_den()) > 0 && cmp(c.get_num(), x.get_num()) == 0 &&
           cmp(c.get_den(), x.get_den()) == 0;
}

}  // namespace posrec
