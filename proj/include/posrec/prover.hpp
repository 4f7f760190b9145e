#pragma once

#include <string>
#include <vector>

#include "posrec/recurrence.hpp"
#include "posrec/witness.hpp"

namespace posrec {

enum class VerdictKind { Positive, UltimatelyPositive, Inconclusive };

inline std::string verdict_name(VerdictKind k) {
    switch (k) {
        case VerdictKind::Positive: return "positive";
        case VerdictKind::UltimatelyPositive: return "ultimately-positive";
        default: return "inconclusive";
    }
}

struct ProofResult {
    Witness witness;
    long u = -1;
    std::vector<Rational> window_ratios;  // a_n / a_{n-1} for n = u .. u+d-1
    long prefix_checked_through = -1;
    VerdictKind kind = VerdictKind::Inconclusive;
    long claim_from = 0;  // N0 for Positive, u for UltimatelyPositive
    std::string reason;
    long scanned_through = -1;
};

namespace detail {

/// Strict p < a_n / a_{n-1} < q by cross-multiplication; no division, and
/// correct for negative a_{n-1} (the inequalities flip).
inline bool ratio_in_open_interval(const Rational& prev, const Rational& cur, const Rational& p,
                                   const Rational& q) {
    int s = sgn(prev);
    if (s == 0) return false;
    Rational lo = p * prev, hi = q * prev;
    if (s > 0) return cmp(lo, cur) < 0 && cmp(cur, hi) < 0;
    return cmp(hi, cur) < 0 && cmp(cur, lo) < 0;
}

}  // namespace detail

struct WindowCheck {
    bool ok = false;
    std::vector<Rational> ratios;
    std::string diagnostic;
};

/// Admissibility of u: the d consecutive ratios a_n / a_{n-1} for
/// n = u .. u+d-1 all lie strictly in (p, q).
inline WindowCheck check_window(const NormalizedRecurrence& nr, const Witness& w, long u) {
    WindowCheck res;
    TermGenerator gen(nr);
    Rational prev = gen.term(u - 1);
    for (long n = u; n < u + nr.order; ++n) {
        Rational cur = gen.term(n);
        if (sgn(prev) == 0) {
            res.diagnostic = "zero term at index " + std::to_string(n - 1) +
                             "; ratio undefined, window not admissible";
            return res;
        }
        if (!detail::ratio_in_open_interval(prev, cur, w.p, w.q)) {
            res.diagnostic = "ratio at n = " + std::to_string(n) + " outside (p, q)";
            return res;
        }
        res.ratios.push_back(cur / prev);
        prev = cur;
    }
    res.ok = true;
    return res;
}

struct AdmissibleScan {
    long u = -1;  // -1: none found within budget
    std::vector<Rational> ratios;
    long scanned_through = -1;
    std::string reason;
};

namespace detail {

/// Streaming scan for the minimal admissible u in [r, r + budget]. Advances
/// one index per failed ratio; each skipped u had a bad ratio inside its
/// window, so minimality holds by construction. Optionally tracks the first
/// nonpositive term at or after prefix_from on the way.
inline AdmissibleScan scan_admissible(const NormalizedRecurrence& nr, const Witness& w,
                                      long scan_budget, TermGenerator& gen,
                                      long* first_nonpositive, long prefix_from) {
    AdmissibleScan res;
    const int d = nr.order;
    // Ratios need a_{u-1}, so u cannot start below first_index + 1.
    const long ratio_start = std::max(w.r, nr.first_index() + 1);
    long candidate = ratio_start;
    const long limit = w.r + scan_budget;

    Rational prev;
    bool have_prev = false;
    std::vector<Rational> recent;  // ratios since the current candidate
    long from = std::max(nr.first_index(), std::min(prefix_from, ratio_start - 1));
    for (long n = from;; ++n) {
        const Rational& cur = gen.term(n);
        if (first_nonpositive && *first_nonpositive < 0 && n >= prefix_from && sgn(cur) <= 0)
            *first_nonpositive = n;
        res.scanned_through = n;
        if (n >= ratio_start && have_prev) {
            if (detail::ratio_in_open_interval(prev, cur, w.p, w.q)) {
                recent.push_back(cur / prev);
                if (n - candidate + 1 == d) {
                    res.u = candidate;
                    res.ratios = recent;
                    return res;
                }
            } else {
                candidate = n + 1;
                recent.clear();
                if (candidate > limit) {
                    res.reason = "no admissible u within budget (scanned up to n = " +
                                 std::to_string(n) + ")";
                    return res;
                }
            }
        }
        prev = cur;
        have_prev = true;
    }
}

}  // namespace detail

inline long default_scan_budget(long r) { return 10 * r + 1000000; }

/// Smallest admissible u in [r, r + scan_budget], or -1 with a reason.
inline AdmissibleScan find_min_admissible_u(const NormalizedRecurrence& nr, const Witness& w,
                                            long scan_budget) {
    TermGenerator gen(nr);
    return detail::scan_admissible(nr, w, scan_budget, gen, nullptr, nr.first_index());
}

struct PrefixCheck {
    bool ok = false;
    long first_failure = -1;
};

/// Exact positivity of every term on [from, through].
inline PrefixCheck check_prefix(const NormalizedRecurrence& nr, long from, long through) {
    PrefixCheck res;
    TermGenerator gen(nr);
    for (long n = from; n <= through; ++n) {
        if (sgn(gen.term(n)) <= 0) {
            res.first_failure = n;
            return res;
        }
    }
    res.ok = true;
    return res;
}

/// Full decision procedure: find the minimal admissible u, require a_u > 0,
/// and combine with prefix positivity on [claim_start, u]. A single forward
/// pass covers both the prefix and the window search.
inline ProofResult prove(const NormalizedRecurrence& nr, const Witness& w, long scan_budget = -1) {
    if (scan_budget < 0) scan_budget = default_scan_budget(w.r);
    ProofResult pr;
    pr.witness = w;

    TermGenerator gen(nr);
    long first_nonpositive = -1;
    auto scan = detail::scan_admissible(nr, w, scan_budget, gen, &first_nonpositive,
                                        nr.claim_start);
    pr.scanned_through = scan.scanned_through;
    if (scan.u < 0) {
        pr.kind = VerdictKind::Inconclusive;
        pr.reason = scan.reason;
        return pr;
    }
    pr.u = scan.u;
    pr.window_ratios = scan.ratios;

    if (sgn(gen.term(pr.u)) <= 0) {
        pr.kind = VerdictKind::Inconclusive;
        pr.reason = "a_u is not positive at u = " + std::to_string(pr.u);
        return pr;
    }

    if (first_nonpositive < 0 || first_nonpositive > pr.u) {
        pr.kind = VerdictKind::Positive;
        pr.claim_from = nr.claim_start;
        pr.prefix_checked_through = pr.u;
    } else {
        pr.kind = VerdictKind::UltimatelyPositive;
        pr.claim_from = pr.u;
        pr.reason = "term at index " + std::to_string(first_nonpositive) + " is not positive";
    }
    return pr;
}

}  // namespace posrec
