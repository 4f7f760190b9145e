#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "posrec/recurrence.hpp"

namespace posrec {

/// Monic characteristic polynomial in t: coefficient of t^{d-j} is
/// -omega_j * b_1j^(k) / a_2j^(k).
struct CharPoly {
    Poly poly;
};

inline CharPoly char_poly(const NormalizedRecurrence& nr) {
    int d = nr.order;
    std::vector<Rational> cs(d + 1, Rational(0));
    cs[d] = 1;
    for (int j = 1; j <= d; ++j) {
        Rational ratio = nr.limit_num_coeff(j - 1) / nr.den_lead(j - 1);
        if (nr.signs[j - 1] < 0) ratio = -ratio;
        cs[d - j] = -ratio;
    }
    return CharPoly{Poly(std::move(cs))};
}

/// Isolating interval for one real root. When exact is set the root itself
/// is lo (== hi); otherwise lo < hi with a sign change across the interval.
struct RootInterval {
    Rational lo;
    Rational hi;
    bool exact = false;

    Rational width() const { return exact ? Rational(0) : hi - lo; }
    Rational midpoint() const { return exact ? lo : (lo + hi) / 2; }
};

namespace detail {

/// Remainder of exact polynomial division.
inline Poly poly_rem(Poly a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    while (!a.is_zero() && *a.degree() >= *b.degree()) {
        std::size_t shift = *a.degree() - *b.degree();
        Rational factor = a.leading() / b.leading();
        std::vector<Rational> mono(shift + 1, Rational(0));
        mono[shift] = factor;
        a = a - b * Poly(std::move(mono));
    }
    return a;
}

inline Poly poly_quot(Poly a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Rational> q(a.is_zero() || *a.degree() < *b.degree()
                                ? 0
                                : *a.degree() - *b.degree() + 1,
                            Rational(0));
    while (!a.is_zero() && *a.degree() >= *b.degree()) {
        std::size_t shift = *a.degree() - *b.degree();
        Rational factor = a.leading() / b.leading();
        q[shift] = factor;
        std::vector<Rational> mono(shift + 1, Rational(0));
        mono[shift] = factor;
        a = a - b * Poly(std::move(mono));
    }
    return Poly(std::move(q));
}

inline Poly derivative(const Poly& h) {
    if (h.is_zero() || *h.degree() == 0) return Poly();
    std::vector<Rational> out(*h.degree());
    for (std::size_t i = 1; i < h.coeffs().size(); ++i)
        out[i - 1] = h.coeffs()[i] * Rational(static_cast<long>(i));
    return Poly(std::move(out));
}

inline Poly poly_gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = poly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero()) a = a * (Rational(1) / a.leading());
    return a;
}

/// Square-free part: h / gcd(h, h').
inline Poly square_free_part(const Poly& h) {
    if (h.is_zero() || *h.degree() == 0) return h;
    Poly g = poly_gcd(h, derivative(h));
    if (g.is_zero() || *g.degree() == 0) return h;
    return poly_quot(h, g);
}

inline std::vector<Poly> sturm_chain(const Poly& h) {
    std::vector<Poly> chain;
    chain.push_back(h);
    Poly d = derivative(h);
    if (d.is_zero()) return chain;
    chain.push_back(d);
    while (true) {
        Poly r = poly_rem(chain[chain.size() - 2], chain.back());
        if (r.is_zero()) break;
        chain.push_back(-r);
    }
    return chain;
}

inline int sign_variations(const std::vector<Poly>& chain, const Rational& x) {
    int vars = 0, prev = 0;
    for (const auto& s : chain) {
        int sg = sgn(s.eval(x));
        if (sg == 0) continue;
        if (prev != 0 && sg != prev) ++vars;
        prev = sg;
    }
    return vars;
}

/// Cauchy bound: every root has modulus < 1 + max |c_i| / |lead|.
inline Rational cauchy_bound(const Poly& h) {
    Rational bound{1};
    for (std::size_t i = 0; i + 1 < h.coeffs().size(); ++i) {
        Rational ratio = abs(h.coeffs()[i]) / abs(h.leading());
        if (cmp(ratio + 1, bound) > 0) bound = ratio + 1;
    }
    return bound;
}

/// Smallest-denominator rational in the closed interval [a, b].
inline Rational simplest_between(const Rational& a, const Rational& b) {
    Int fa = floor_rational(a);
    if (cmp(Rational(fa), a) == 0) return a;
    if (cmp(Rational(fa + 1), b) <= 0) return Rational(fa + 1);
    Rational fr{fa};
    return fr + Rational(1) / simplest_between(Rational(1) / (b - fr), Rational(1) / (a - fr));
}

inline void isolate_rec(const Poly& sf, const std::vector<Poly>& chain, const Rational& lo,
                        const Rational& hi, int count, std::vector<RootInterval>& out) {
    if (count <= 0) return;
    if (count == 1) {
        out.push_back({lo, hi, false});
        return;
    }
    Rational mid = (lo + hi) / 2;
    if (sgn(sf.eval(mid)) == 0) {
        out.push_back({mid, mid, true});
        // Shrink a symmetric gap around the exact root until the root is
        // alone inside it, then recurse on the two remaining pieces.
        Rational delta = (hi - lo) / 4;
        while (true) {
            Rational a = mid - delta, b = mid + delta;
            if (sgn(sf.eval(a)) != 0 && sgn(sf.eval(b)) != 0 &&
                sign_variations(chain, a) - sign_variations(chain, b) == 1) {
                int left = sign_variations(chain, lo) - sign_variations(chain, a);
                int right = sign_variations(chain, b) - sign_variations(chain, hi);
                isolate_rec(sf, chain, lo, a, left, out);
                isolate_rec(sf, chain, b, hi, right, out);
                return;
            }
            delta /= 2;
        }
    }
    int left = sign_variations(chain, lo) - sign_variations(chain, mid);
    isolate_rec(sf, chain, lo, mid, left, out);
    isolate_rec(sf, chain, mid, hi, count - left, out);
}

}  // namespace detail

/// Disjoint isolating intervals for every distinct positive real root,
/// via exact Sturm sequences on the square-free part and bisection.
/// Sorted by increasing root.
inline std::vector<RootInterval> isolate_positive_roots(const CharPoly& cp) {
    if (cp.poly.is_zero()) throw std::domain_error("cannot isolate roots of zero polynomial");
    Poly sf = detail::square_free_part(cp.poly);
    // 0 is not a positive root; divide out the factor t if present.
    while (!sf.is_zero() && *sf.degree() > 0 && sgn(sf.coeff(0)) == 0) {
        std::vector<Rational> shifted(sf.coeffs().begin() + 1, sf.coeffs().end());
        sf = Poly(std::move(shifted));
    }
    if (*sf.degree() == 0) return {};
    auto chain = detail::sturm_chain(sf);
    Rational lo{0};
    Rational hi = detail::cauchy_bound(sf);
    while (sgn(sf.eval(hi)) == 0) hi += 1;

    std::vector<RootInterval> out;
    int count = detail::sign_variations(chain, lo) - detail::sign_variations(chain, hi);
    detail::isolate_rec(sf, chain, lo, hi, count, out);
    std::sort(out.begin(), out.end(),
              [](const RootInterval& a, const RootInterval& b) { return cmp(a.lo, b.lo) < 0; });
    return out;
}

/// Bisect iv down to the requested width, preserving the sign change of the
/// square-free part; collapses to an exact marker when an endpoint hits the
/// root. A width not smaller than the current interval is a no-op.
inline RootInterval refine(const CharPoly& cp, RootInterval iv, const Rational& width) {
    if (sgn(width) <= 0) throw std::invalid_argument("refinement width must be positive");
    if (iv.exact) return iv;
    Poly sf = detail::square_free_part(cp.poly);
    int sign_lo = sgn(sf.eval(iv.lo));
    if (sign_lo == 0) return {iv.lo, iv.lo, true};
    if (sgn(sf.eval(iv.hi)) == 0) return {iv.hi, iv.hi, true};
    while (cmp(iv.hi - iv.lo, width) > 0) {
        // A rational root is the simplest rational in the interval once the
        // interval is tight enough; probing it collapses to an exact marker.
        Rational probe = detail::simplest_between(iv.lo, iv.hi);
        if (sgn(sf.eval(probe)) == 0) return {probe, probe, true};
        Rational mid = (iv.lo + iv.hi) / 2;
        int sm = sgn(sf.eval(mid));
        if (sm == 0) return {mid, mid, true};
        if (sm == sign_lo)
            iv.lo = mid;
        else
            iv.hi = mid;
    }
    return iv;
}

/// Floating-point survey of all complex roots. Advisory only: never feeds
/// certificate validation.
struct DominanceReport {
    std::vector<std::complex<double>> root_estimates;
    double dominant_modulus = 0.0;
    double second_modulus = 0.0;
    bool unique_dominant = false;
    double margin = 0.0;
    bool converged = false;
    std::string diagnostic;
};

/// Aberth-Ehrlich simultaneous iteration in double precision. The dominant
/// root is declared unique when the top modulus beats the runner-up by more
/// than the relative margin and the top root is real positive.
inline DominanceReport dominance_report(const CharPoly& cp, double rel_margin = 1e-6) {
    DominanceReport rep;
    rep.margin = rel_margin;
    std::size_t deg = cp.poly.is_zero() ? 0 : *cp.poly.degree();
    if (deg == 0) {
        rep.diagnostic = "constant polynomial has no roots";
        return rep;
    }

    std::vector<double> c(deg + 1);
    for (std::size_t i = 0; i <= deg; ++i) c[i] = cp.poly.coeff(i).get_d();
    auto eval_both = [&](std::complex<double> z) {
        std::complex<double> v{0.0, 0.0}, dv{0.0, 0.0};
        for (std::size_t i = deg + 1; i-- > 0;) {
            dv = dv * z + v;
            v = v * z + c[i];
        }
        return std::pair{v, dv};
    };

    double radius = detail::cauchy_bound(cp.poly).get_d();
    std::vector<std::complex<double>> z(deg);
    for (std::size_t i = 0; i < deg; ++i) {
        double angle = 2.0 * M_PI * (static_cast<double>(i) + 0.25) / static_cast<double>(deg) + 0.4;
        z[i] = std::polar(0.5 * radius, angle);
    }

    const int max_iter = 600;
    bool converged = false;
    for (int iter = 0; iter < max_iter && !converged; ++iter) {
        converged = true;
        for (std::size_t i = 0; i < deg; ++i) {
            auto [v, dv] = eval_both(z[i]);
            if (std::abs(v) == 0.0) continue;
            std::complex<double> newton = (dv == std::complex<double>{0.0, 0.0}) ? v : v / dv;
            std::complex<double> repulsion{0.0, 0.0};
            for (std::size_t j = 0; j < deg; ++j)
                if (j != i) repulsion += 1.0 / (z[i] - z[j]);
            std::complex<double> denom = 1.0 - newton * repulsion;
            std::complex<double> delta = (std::abs(denom) == 0.0) ? newton : newton / denom;
            z[i] -= delta;
            if (std::abs(delta) > 1e-12 * (1.0 + std::abs(z[i]))) converged = false;
        }
    }
    rep.converged = converged;
    rep.root_estimates = z;

    std::vector<double> mods(deg);
    for (std::size_t i = 0; i < deg; ++i) mods[i] = std::abs(z[i]);
    std::vector<std::size_t> order(deg);
    for (std::size_t i = 0; i < deg; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return mods[a] > mods[b]; });
    rep.dominant_modulus = mods[order[0]];
    rep.second_modulus = deg > 1 ? mods[order[1]] : 0.0;

    if (!converged) {
        rep.diagnostic = "root iteration did not converge";
        return rep;
    }
    const std::complex<double>& top = z[order[0]];
    bool real_positive =
        top.real() > 0.0 && std::abs(top.imag()) <= 1e-9 * (1.0 + std::abs(top.real()));
    bool separated = deg == 1 || rep.dominant_modulus - rep.second_modulus >
                                     rel_margin * rep.dominant_modulus;
    rep.unique_dominant = real_positive && separated;
    if (!real_positive)
        rep.diagnostic = "largest-modulus root is not real positive";
    else if (!separated)
        rep.diagnostic = "dominant modulus not separated from runner-up";
    return rep;
}

}  // namespace posrec
