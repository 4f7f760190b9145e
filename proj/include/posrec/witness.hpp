#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "posrec/recurrence.hpp"
#include "posrec/spectrum.hpp"

namespace posrec {

struct WitnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The full proof parameter set: 0 < p < q bracketing the dominant root,
/// the positive constants p0, q0, the guard polynomials f, g whose leading
/// coefficients are p0 and q0, and the threshold r past which everything
/// relevant is provably positive.
struct Witness {
    Rational p;
    Rational q;
    Rational p0;
    Rational q0;
    Poly f;
    Poly g;
    long r = 0;
    std::vector<Rational> lower_sel;  // l_j: p when omega_j = -1, q when +1
    std::vector<Rational> upper_sel;  // h_j: the opposite
};

namespace detail {

inline void selectors(const NormalizedRecurrence& nr, const Rational& p, const Rational& q,
                      std::vector<Rational>& l, std::vector<Rational>& h) {
    l.clear();
    h.clear();
    for (int j = 0; j < nr.order; ++j) {
        bool neg = nr.signs[j] < 0;
        l.push_back(neg ? p : q);
        h.push_back(neg ? q : p);
    }
}

inline Rational pow_rational(const Rational& x, int e) {
    Rational acc{1};
    for (int i = 0; i < e; ++i) acc *= x;
    return acc;
}

}  // namespace detail

/// The constants p0 and q0. Negative or zero results are returned as-is;
/// the caller decides whether the candidate (p, q) is usable.
inline std::pair<Rational, Rational> compute_constants(const NormalizedRecurrence& nr,
                                                       const Rational& p, const Rational& q) {
    if (sgn(p) <= 0 || cmp(p, q) >= 0)
        throw WitnessError("require 0 < p < q, got p=" + rational_to_string(p) +
                           ", q=" + rational_to_string(q));
    std::vector<Rational> l, h;
    detail::selectors(nr, p, q, l, h);

    Rational den_prod{1};
    for (int j = 0; j < nr.order; ++j) den_prod *= nr.den_lead(j);

    Rational low_sum{0}, high_sum{0};
    for (int j = 0; j < nr.order; ++j) {
        if (nr.signs[j] == 0) continue;
        Rational companion = den_prod / nr.den_lead(j);  // A_j
        Rational base = nr.limit_num_coeff(j) * companion;
        if (nr.signs[j] < 0) base = -base;
        low_sum += base / detail::pow_rational(l[j], j);
        high_sum += base / detail::pow_rational(h[j], j);
    }
    return {low_sum - p * den_prod, q * den_prod - high_sum};
}

/// The guard polynomials f and g; every coefficient polynomial is evaluated
/// at n + 1. Leading coefficients equal p0 and q0 respectively.
inline std::pair<Poly, Poly> compute_guards(const NormalizedRecurrence& nr, const Rational& p,
                                            const Rational& q) {
    if (sgn(p) <= 0 || cmp(p, q) >= 0)
        throw WitnessError("require 0 < p < q, got p=" + rational_to_string(p) +
                           ", q=" + rational_to_string(q));
    std::vector<Rational> l, h;
    detail::selectors(nr, p, q, l, h);

    std::vector<Poly> den_shift;
    den_shift.reserve(nr.order);
    for (int j = 0; j < nr.order; ++j) den_shift.push_back(nr.den_polys[j].shift(Rational(1)));
    Poly den_prod = Poly::constant(Rational(1));
    for (const auto& s : den_shift) den_prod = den_prod * s;

    Poly low_sum, high_sum;
    for (int j = 0; j < nr.order; ++j) {
        if (nr.signs[j] == 0) continue;
        Poly companion = Poly::constant(Rational(1));  // A_j(n+1)
        for (int i = 0; i < nr.order; ++i)
            if (i != j) companion = companion * den_shift[i];
        Poly base = nr.q_polys[j].shift(Rational(1)) * companion;
        if (nr.signs[j] < 0) base = -base;
        low_sum = low_sum + base * (Rational(1) / detail::pow_rational(l[j], j));
        high_sum = high_sum + base * (Rational(1) / detail::pow_rational(h[j], j));
    }
    return {low_sum - den_prod * p, den_prod * q - high_sum};
}

/// Threshold r: one plus the max of the floors of L(f)/p0, L(g)/q0, and
/// L(Q_1j)/lead(Q_1j), L(P_2j)/lead(P_2j) over the lags actually present.
inline long compute_r(const NormalizedRecurrence& nr, const Poly& f, const Poly& g,
                      const Rational& p0, const Rational& q0) {
    if (sgn(p0) <= 0) throw WitnessError("p0 must be positive, got " + rational_to_string(p0));
    if (sgn(q0) <= 0) throw WitnessError("q0 must be positive, got " + rational_to_string(q0));

    Int best{0};
    auto consider = [&](const Rational& numer, const Rational& denom) {
        Int fl = floor_rational(numer / denom);
        if (cmp(fl, best) > 0) best = fl;
    };
    consider(f.l_bound(), p0);
    consider(g.l_bound(), q0);
    for (int j = 0; j < nr.order; ++j) {
        consider(nr.den_polys[j].l_bound(), nr.den_lead(j));
        if (nr.signs[j] == 0) continue;
        consider(nr.q_polys[j].l_bound(), nr.q_polys[j].leading());
    }
    best += 1;
    if (!best.fits_slong_p())
        throw WitnessError("threshold r = " + best.get_str() +
                           " exceeds the native integer range");
    return best.get_si();
}

inline Witness make_witness(const NormalizedRecurrence& nr, const Rational& p, const Rational& q) {
    auto [p0, q0] = compute_constants(nr, p, q);
    if (sgn(p0) <= 0)
        throw WitnessError("p0 = " + rational_to_string(p0) + " is not positive for p=" +
                           rational_to_string(p) + ", q=" + rational_to_string(q));
    if (sgn(q0) <= 0)
        throw WitnessError("q0 = " + rational_to_string(q0) + " is not positive for p=" +
                           rational_to_string(p) + ", q=" + rational_to_string(q));
    Witness w;
    w.p = p;
    w.q = q;
    w.p0 = p0;
    w.q0 = q0;
    std::tie(w.f, w.g) = compute_guards(nr, p, q);
    w.r = compute_r(nr, w.f, w.g, p0, q0);
    detail::selectors(nr, p, q, w.lower_sel, w.upper_sel);
    return w;
}

/// The exact inequalities behind the positivity-threshold lemma: every guard
/// and coefficient polynomial is strictly positive from r onward because
/// lead * r strictly exceeds its L value. Always true for r from compute_r.
inline bool lemma_guard(const Witness& w, const NormalizedRecurrence& nr) {
    Rational r{w.r};
    auto holds = [&](const Poly& h, const Rational& lead) {
        return cmp(lead * r, h.l_bound()) > 0;
    };
    if (!holds(w.f, w.p0) || !holds(w.g, w.q0)) return false;
    for (int j = 0; j < nr.order; ++j) {
        if (!holds(nr.den_polys[j], nr.den_lead(j))) return false;
        if (nr.signs[j] == 0) continue;
        if (!holds(nr.q_polys[j], nr.q_polys[j].leading())) return false;
    }
    return true;
}

namespace detail {

/// Largest rational <= x with denominator at most max_den.
inline Rational best_rational_below(const Rational& x, long max_den) {
    Rational best;
    bool have = false;
    for (long den = 1; den <= max_den; ++den) {
        Int num = floor_rational(x * Rational(den));
        Rational cand(num, den);
        cand.canonicalize();
        if (!have || cmp(cand, best) > 0) {
            best = cand;
            have = true;
        }
    }
    return best;
}

/// Smallest rational >= x with denominator at most max_den.
inline Rational best_rational_above(const Rational& x, long max_den) {
    return -best_rational_below(-x, max_den);
}

}  // namespace detail

/// Deterministic search for a small-denominator (p, q) around the isolating
/// interval of the dominant root. Tries widening relative margins, keeps
/// candidates with p0 > 0 and q0 > 0, and returns the one minimizing r
/// (ties: smaller q - p, then smaller denominators).
inline Witness auto_select_pq(const NormalizedRecurrence& nr, const RootInterval& mu) {
    static const std::vector<std::pair<long, long>> margins = {
        {1, 2}, {3, 10}, {1, 5}, {1, 10}, {1, 20}, {1, 50}, {1, 100}};
    const long den_cap = 64;

    std::optional<Witness> best;
    std::string last_failure;
    for (const auto& [mn, md] : margins) {
        Rational delta(mn, md);
        Rational lo_target = mu.lo * (Rational(1) - delta);
        Rational hi_target = (mu.exact ? mu.lo : mu.hi) * (Rational(1) + delta);
        Rational p = detail::best_rational_below(lo_target, den_cap);
        Rational q = detail::best_rational_above(hi_target, den_cap);
        if (sgn(p) <= 0 || cmp(p, q) >= 0) continue;
        try {
            Witness w = make_witness(nr, p, q);
            bool better = false;
            if (!best) {
                better = true;
            } else if (w.r != best->r) {
                better = w.r < best->r;
            } else if (cmp(w.q - w.p, best->q - best->p) != 0) {
                better = cmp(w.q - w.p, best->q - best->p) < 0;
            } else {
                better = cmp(Rational(w.p.get_den()) + Rational(w.q.get_den()),
                             Rational(best->p.get_den()) + Rational(best->q.get_den())) < 0;
            }
            if (better) best = std::move(w);
        } catch (const WitnessError& ex) {
            last_failure = ex.what();
        }
    }
    if (!best)
        throw WitnessError("no valid (p,q) found around the dominant root" +
                           (last_failure.empty() ? std::string()
                                                 : "; last failure: " + last_failure));
    return *best;
}

}  // namespace posrec
