#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "posrec/rational.hpp"

namespace posrec {

/// Dense univariate polynomial over exact rationals, coefficients stored in
/// ascending powers. Canonical form: the highest stored coefficient is
/// nonzero; the zero polynomial stores nothing and its degree is nullopt
/// rather than a number.
class Poly {
public:
    Poly() = default;

    explicit Poly(std::vector<Rational> ascending) : coeffs_(std::move(ascending)) {
        trim();
    }

    static Poly constant(const Rational& c) { return Poly(std::vector<Rational>{c}); }

    static Poly from_strings(const std::vector<std::string>& parts) {
        std::vector<Rational> cs;
        cs.reserve(parts.size());
        for (const auto& p : parts) cs.push_back(parse_rational(p));
        return Poly(std::move(cs));
    }

    bool is_zero() const { return coeffs_.empty(); }

    std::optional<std::size_t> degree() const {
        if (coeffs_.empty()) return std::nullopt;
        return coeffs_.size() - 1;
    }

    const std::vector<Rational>& coeffs() const { return coeffs_; }

    /// Coefficient of n^i; zero past the degree.
    Rational coeff(std::size_t i) const {
        static const Rational zero{0};
        return i < coeffs_.size() ? coeffs_[i] : zero;
    }

    const Rational& leading() const {
        if (coeffs_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
        return coeffs_.back();
    }

    Poly operator+(const Poly& o) const {
        std::vector<Rational> out(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) out[i] += o.coeffs_[i];
        return Poly(std::move(out));
    }

    Poly operator-() const {
        std::vector<Rational> out = coeffs_;
        for (auto& c : out) c = -c;
        return Poly(std::move(out));
    }

    Poly operator-(const Poly& o) const { return *this + (-o); }

    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly();
        std::vector<Rational> out(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
                out[i + j] += coeffs_[i] * o.coeffs_[j];
        return Poly(std::move(out));
    }

    Poly operator*(const Rational& s) const {
        if (sgn(s) == 0) return Poly();
        std::vector<Rational> out = coeffs_;
        for (auto& c : out) c *= s;
        return Poly(std::move(out));
    }

    bool operator==(const Poly& o) const {
        if (coeffs_.size() != o.coeffs_.size()) return false;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (cmp(coeffs_[i], o.coeffs_[i]) != 0) return false;
        return true;
    }

    /// The polynomial n -> h(n + c), expanded exactly (Horner on n + c).
    Poly shift(const Rational& c) const {
        Poly result;
        Poly x_plus_c(std::vector<Rational>{c, Rational(1)});
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            result = result * x_plus_c + Poly::constant(coeffs_[i]);
        }
        return result;
    }

    /// Exact Horner evaluation.
    Rational eval(const Rational& x) const {
        Rational acc{0};
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            acc = acc * x + coeffs_[i];
        }
        return acc;
    }

    /// Sum of absolute values of the strictly negative non-leading
    /// coefficients. The leading coefficient is never included; a nonzero
    /// constant has no non-leading coefficients, so the sum is 0.
    Rational l_bound() const {
        if (coeffs_.empty()) throw std::domain_error("L undefined for zero polynomial");
        Rational acc{0};
        for (std::size_t i = 0; i + 1 < coeffs_.size(); ++i)
            if (sgn(coeffs_[i]) < 0) acc -= coeffs_[i];
        return acc;
    }

    std::vector<std::string> to_strings() const {
        std::vector<std::string> out;
        out.reserve(coeffs_.size());
        for (const auto& c : coeffs_) out.push_back(rational_to_string(c));
        return out;
    }

    std::string pretty(const std::string& var = "n") const {
        if (is_zero()) return "0";
        std::string out;
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            if (sgn(coeffs_[i]) == 0) continue;
            Rational a = coeffs_[i];
            if (out.empty()) {
                if (sgn(a) < 0) out += "-", a = -a;
            } else {
                out += sgn(a) < 0 ? " - " : " + ";
                if (sgn(a) < 0) a = -a;
            }
            bool unit = cmp(a, Rational(1)) == 0;
            if (!unit || i == 0) out += rational_to_string(a);
            if (i > 0) {
                if (!unit) out += "*";
                out += var;
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out;
    }

private:
    void trim() {
        while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
        for (auto& c : coeffs_) c.canonicalize();
    }

    std::vector<Rational> coeffs_;
};

inline Poly operator*(const Rational& s, const Poly& h) { return h * s; }

}  // namespace posrec
