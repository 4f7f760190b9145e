#pragma once

#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "posrec/poly.hpp"

namespace posrec {

struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A P-recursive recurrence a_n = sum_j (num_polys[j-1](n)/den_polys[j-1](n)) a_{n-j},
/// asserted for n >= recurrence_start, with the d terms immediately before
/// recurrence_start given explicitly. Positivity is claimed from claim_start.
struct RecurrenceSpec {
    std::string name;
    int order = 0;
    long recurrence_start = 0;  // n0
    long claim_start = 0;       // N0
    std::vector<Poly> num_polys;
    std::vector<Poly> den_polys;
    std::map<long, Rational> initial_terms;

    long first_index() const { return initial_terms.begin()->first; }
};

/// Sign-normalized form: every denominator has positive leading coefficient
/// and degree exactly common_degree; q_polys[j] = signs[j] * num_polys[j]
/// has positive leading coefficient when signs[j] != 0, and is zero when
/// signs[j] == 0.
struct NormalizedRecurrence {
    std::string name;
    int order = 0;
    long recurrence_start = 0;
    long claim_start = 0;
    std::vector<int> signs;     // omega_j in {-1, 0, +1}
    std::vector<Poly> q_polys;  // Q_1j
    std::vector<Poly> den_polys;
    std::size_t common_degree = 0;  // k
    std::map<long, Rational> initial_terms;
    std::vector<std::string> relaxations;

    long first_index() const { return initial_terms.begin()->first; }

    /// Coefficient of n^k in Q_1j (zero under degree relaxation).
    Rational limit_num_coeff(int j) const { return q_polys[j].coeff(common_degree); }

    /// Leading coefficient of P_2j, always positive.
    const Rational& den_lead(int j) const { return den_polys[j].leading(); }
};

namespace detail {

inline Poly poly_from_json(const nlohmann::json& arr, const std::string& where) {
    if (!arr.is_array()) throw SpecError(where + ": expected array of coefficient strings");
    std::vector<Rational> cs;
    for (const auto& e : arr) {
        if (!e.is_string()) throw SpecError(where + ": coefficients must be rational strings");
        try {
            cs.push_back(parse_rational(e.get<std::string>()));
        } catch (const std::invalid_argument& ex) {
            throw SpecError(where + ": " + ex.what());
        }
    }
    return Poly(std::move(cs));
}

inline nlohmann::json poly_to_json(const Poly& h) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : h.to_strings()) arr.push_back(s);
    return arr;
}

}  // namespace detail

inline RecurrenceSpec parse_spec(const nlohmann::json& doc) {
    if (!doc.is_object()) throw SpecError("spec: top-level value must be an object");
    for (const char* key : {"name", "order", "recurrence_start", "claim_start",
                            "numerators", "denominators", "initial_terms"})
        if (!doc.contains(key)) throw SpecError(std::string("spec: missing field '") + key + "'");

    RecurrenceSpec spec;
    spec.name = doc.at("name").get<std::string>();
    if (!doc.at("order").is_number_integer() || doc.at("order").get<long>() <= 0)
        throw SpecError("order: must be a positive integer");
    spec.order = doc.at("order").get<int>();
    spec.recurrence_start = doc.at("recurrence_start").get<long>();
    spec.claim_start = doc.at("claim_start").get<long>();

    const auto& nums = doc.at("numerators");
    const auto& dens = doc.at("denominators");
    if (!nums.is_array() || static_cast<int>(nums.size()) != spec.order)
        throw SpecError("numerators: expected exactly " + std::to_string(spec.order) + " polynomials");
    if (!dens.is_array() || static_cast<int>(dens.size()) != spec.order)
        throw SpecError("denominators: expected exactly " + std::to_string(spec.order) + " polynomials");
    for (int j = 0; j < spec.order; ++j) {
        spec.num_polys.push_back(detail::poly_from_json(nums[j], "numerators[" + std::to_string(j) + "]"));
        spec.den_polys.push_back(detail::poly_from_json(dens[j], "denominators[" + std::to_string(j) + "]"));
        if (spec.den_polys.back().is_zero())
            throw SpecError("denominators[" + std::to_string(j) + "]: zero polynomial");
    }

    const auto& init = doc.at("initial_terms");
    if (!init.is_object()) throw SpecError("initial_terms: expected an object");
    for (auto it = init.begin(); it != init.end(); ++it) {
        long idx;
        try {
            std::size_t pos = 0;
            idx = std::stol(it.key(), &pos);
            if (pos != it.key().size()) throw std::invalid_argument("");
        } catch (...) {
            throw SpecError("initial_terms: bad index '" + it.key() + "'");
        }
        try {
            spec.initial_terms[idx] = parse_rational(it.value().get<std::string>());
        } catch (const std::invalid_argument& ex) {
            throw SpecError("initial_terms[" + it.key() + "]: " + ex.what());
        }
    }

    // Exactly the d indices immediately before the recurrence applies.
    for (long idx = spec.recurrence_start - spec.order; idx < spec.recurrence_start; ++idx)
        if (!spec.initial_terms.count(idx))
            throw SpecError("initial_terms: missing term at index " + std::to_string(idx));
    if (static_cast<int>(spec.initial_terms.size()) != spec.order)
        throw SpecError("initial_terms: expected exactly indices " +
                        std::to_string(spec.recurrence_start - spec.order) + ".." +
                        std::to_string(spec.recurrence_start - 1));
    if (spec.claim_start < spec.first_index())
        throw SpecError("claim_start: below the first known index " +
                        std::to_string(spec.first_index()));
    return spec;
}

inline RecurrenceSpec parse_spec_string(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw SpecError(std::string("spec: invalid JSON: ") + ex.what());
    }
    return parse_spec(doc);
}

inline RecurrenceSpec parse_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open spec file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec_string(ss.str());
}

inline nlohmann::json to_json(const RecurrenceSpec& spec) {
    nlohmann::json doc;
    doc["name"] = spec.name;
    doc["order"] = spec.order;
    doc["recurrence_start"] = spec.recurrence_start;
    doc["claim_start"] = spec.claim_start;
    doc["numerators"] = nlohmann::json::array();
    doc["denominators"] = nlohmann::json::array();
    for (const auto& h : spec.num_polys) doc["numerators"].push_back(detail::poly_to_json(h));
    for (const auto& h : spec.den_polys) doc["denominators"].push_back(detail::poly_to_json(h));
    nlohmann::json init = nlohmann::json::object();
    for (const auto& [idx, val] : spec.initial_terms)
        init[std::to_string(idx)] = rational_to_string(val);
    doc["initial_terms"] = init;
    return doc;
}

/// Sign normalization: flip each denominator (and its numerator) so the
/// denominator's leading coefficient is positive, then pull the numerator's
/// sign out into omega_j. The common degree k is the shared denominator
/// degree; numerators of lower degree are allowed unless strict is set.
inline NormalizedRecurrence normalize(const RecurrenceSpec& spec, bool strict = false) {
    NormalizedRecurrence nr;
    nr.name = spec.name;
    nr.order = spec.order;
    nr.recurrence_start = spec.recurrence_start;
    nr.claim_start = spec.claim_start;
    nr.initial_terms = spec.initial_terms;

    std::size_t k = 0;
    for (const auto& den : spec.den_polys) k = std::max(k, *den.degree());

    for (int j = 0; j < spec.order; ++j) {
        Poly num = spec.num_polys[j];
        Poly den = spec.den_polys[j];
        if (sgn(den.leading()) < 0) {
            num = -num;
            den = -den;
        }
        if (*den.degree() != k)
            throw SpecError("denominators[" + std::to_string(j) +
                            "]: degree " + std::to_string(*den.degree()) +
                            " differs from common degree " + std::to_string(k));
        int omega = num.is_zero() ? 0 : sgn(num.leading());
        Poly q = omega < 0 ? -num : num;
        if (!q.is_zero() && *q.degree() > *den.degree())
            throw SpecError("numerators[" + std::to_string(j) +
                            "]: numerator dominates denominator (degree " +
                            std::to_string(*q.degree()) + " > " + std::to_string(*den.degree()) + ")");
        if (omega == 0) {
            nr.relaxations.push_back("zero-numerator term at lag " + std::to_string(j + 1));
            if (strict)
                throw SpecError("numerators[" + std::to_string(j) +
                                "]: zero numerator, degree mismatch with strict mode");
        } else if (*q.degree() < k) {
            nr.relaxations.push_back("degree-relaxed numerator at lag " + std::to_string(j + 1));
            if (strict)
                throw SpecError("numerators[" + std::to_string(j) +
                                "]: degree " + std::to_string(*q.degree()) +
                                " below common degree " + std::to_string(k) +
                                ", degree mismatch with strict mode");
        }
        nr.signs.push_back(omega);
        nr.q_polys.push_back(std::move(q));
        nr.den_polys.push_back(std::move(den));
    }
    nr.common_degree = k;
    return nr;
}

/// Integer roots of any denominator in [recurrence_start, +inf), found by
/// scanning integer candidates up to the Cauchy root bound. Empty means the
/// recurrence is well defined everywhere it is asserted.
inline std::vector<long> validate_denominators(const NormalizedRecurrence& nr) {
    std::vector<long> roots;
    for (const auto& den : nr.den_polys) {
        Rational bound{1};
        for (std::size_t i = 0; i + 1 < den.coeffs().size(); ++i) {
            Rational ratio = abs(den.coeffs()[i]) / den.leading();
            if (cmp(ratio, bound - 1) > 0) bound = ratio + 1;
        }
        Int hi = floor_rational(bound);
        for (Int m{nr.recurrence_start}; cmp(m, hi) <= 0; ++m) {
            if (sgn(den.eval(Rational(m))) == 0) roots.push_back(m.get_si());
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

/// Forward term evaluator. Keeps a sliding window of the last d terms, so
/// sequential access costs one recurrence step per index and memory stays
/// bounded even when individual terms run to tens of thousands of digits.
/// Random access behind the window restarts from the initial terms. With
/// keep_all set, every computed term is retained.
class TermGenerator {
public:
    explicit TermGenerator(const NormalizedRecurrence& nr, bool keep_all = false)
        : nr_(&nr), keep_all_(keep_all) {
        reset();
    }

    const Rational& term(long n) {
        if (n < nr_->first_index())
            throw std::out_of_range("term index " + std::to_string(n) +
                                    " below first known index " +
                                    std::to_string(nr_->first_index()));
        if (keep_all_) {
            while (static_cast<long>(history_.size()) + nr_->first_index() <= n) step();
            return history_[n - nr_->first_index()];
        }
        if (n < window_front_) reset();
        while (window_front_ + static_cast<long>(window_.size()) <= n) step();
        return window_[n - window_front_];
    }

private:
    void reset() {
        window_.clear();
        history_.clear();
        for (const auto& [idx, val] : nr_->initial_terms) {
            window_.push_back(val);
            if (keep_all_) history_.push_back(val);
        }
        window_front_ = nr_->first_index();
        next_ = nr_->recurrence_start;
    }

    void step() {
        long m = next_++;
        Rational acc{0};
        for (int j = 1; j <= nr_->order; ++j) {
            if (nr_->signs[j - 1] == 0) continue;
            Rational den = nr_->den_polys[j - 1].eval(Rational(m));
            if (sgn(den) == 0)
                throw std::domain_error("denominator " + std::to_string(j) +
                                        " vanishes at n = " + std::to_string(m));
            Rational coeff = nr_->q_polys[j - 1].eval(Rational(m)) / den;
            if (nr_->signs[j - 1] < 0) coeff = -coeff;
            acc += coeff * window_[window_.size() - j];
        }
        window_.push_back(acc);
        if (keep_all_) history_.push_back(acc);
        if (static_cast<int>(window_.size()) > nr_->order) {
            window_.pop_front();
            ++window_front_;
        }
    }

    const NormalizedRecurrence* nr_;
    bool keep_all_;
    std::deque<Rational> window_;
    std::vector<Rational> history_;
    long window_front_ = 0;
    long next_ = 0;
};

}  // namespace posrec
