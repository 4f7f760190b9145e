#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "posrec/prover.hpp"

namespace posrec {

struct CertificateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr int kCertificateFormatVersion = 1;

/// Self-contained positivity proof: the recurrence itself, its
/// normalization, the witness (p, q, p0, q0, f, g, r), the admissible u with
/// its window ratios, and the claim. Every numeric field is an exact
/// rational string; checking needs nothing beyond this object.
struct Certificate {
    int format_version = kCertificateFormatVersion;
    RecurrenceSpec spec;
    std::vector<int> signs;
    std::vector<Poly> q_polys;
    std::vector<Poly> den_polys;
    std::size_t common_degree = 0;
    Rational p, q, p0, q0;
    Poly f, g;
    long r = 0;
    long u = 0;
    std::vector<Rational> window_ratios;
    std::string verdict;  // "positive" or "ultimately-positive"
    long claim_from = 0;
    std::vector<std::string> relaxations;
};

inline Certificate emit(const ProofResult& pr, const NormalizedRecurrence& nr,
                        const RecurrenceSpec& spec) {
    if (pr.kind == VerdictKind::Inconclusive)
        throw CertificateError("cannot emit a certificate for an inconclusive result: " +
                               pr.reason);
    Certificate cert;
    cert.spec = spec;
    cert.signs = nr.signs;
    cert.q_polys = nr.q_polys;
    cert.den_polys = nr.den_polys;
    cert.common_degree = nr.common_degree;
    cert.p = pr.witness.p;
    cert.q = pr.witness.q;
    cert.p0 = pr.witness.p0;
    cert.q0 = pr.witness.q0;
    cert.f = pr.witness.f;
    cert.g = pr.witness.g;
    cert.r = pr.witness.r;
    cert.u = pr.u;
    cert.window_ratios = pr.window_ratios;
    cert.verdict = verdict_name(pr.kind);
    cert.claim_from = pr.claim_from;
    cert.relaxations = nr.relaxations;
    return cert;
}

inline nlohmann::json to_json(const Certificate& cert) {
    nlohmann::json doc;
    doc["format_version"] = cert.format_version;
    doc["spec"] = to_json(cert.spec);
    nlohmann::json norm;
    norm["signs"] = cert.signs;
    norm["common_degree"] = cert.common_degree;
    norm["q_polys"] = nlohmann::json::array();
    norm["den_polys"] = nlohmann::json::array();
    for (const auto& h : cert.q_polys) norm["q_polys"].push_back(detail::poly_to_json(h));
    for (const auto& h : cert.den_polys) norm["den_polys"].push_back(detail::poly_to_json(h));
    doc["normalization"] = norm;
    doc["p"] = rational_to_string(cert.p);
    doc["q"] = rational_to_string(cert.q);
    doc["p0"] = rational_to_string(cert.p0);
    doc["q0"] = rational_to_string(cert.q0);
    doc["f"] = detail::poly_to_json(cert.f);
    doc["g"] = detail::poly_to_json(cert.g);
    doc["r"] = cert.r;
    doc["u"] = cert.u;
    nlohmann::json ratios = nlohmann::json::array();
    for (const auto& x : cert.window_ratios) ratios.push_back(rational_to_string(x));
    doc["window_ratios"] = ratios;
    doc["claim"] = {{"verdict", cert.verdict}, {"from", cert.claim_from}};
    doc["relaxations"] = cert.relaxations;
    return doc;
}

/// Canonical bytes: sorted keys, two-space indent, trailing newline.
inline std::string serialize(const Certificate& cert) { return to_json(cert).dump(2) + "\n"; }

inline Certificate certificate_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw CertificateError("certificate: expected a JSON object");
    if (!doc.contains("format_version") || !doc.at("format_version").is_number_integer())
        throw CertificateError("certificate: missing format_version");
    Certificate cert;
    cert.format_version = doc.at("format_version").get<int>();
    if (cert.format_version != kCertificateFormatVersion)
        throw CertificateError("certificate: unknown format version " +
                               std::to_string(cert.format_version));
    try {
        cert.spec = parse_spec(doc.at("spec"));
        const auto& norm = doc.at("normalization");
        cert.signs = norm.at("signs").get<std::vector<int>>();
        cert.common_degree = norm.at("common_degree").get<std::size_t>();
        for (const auto& arr : norm.at("q_polys"))
            cert.q_polys.push_back(detail::poly_from_json(arr, "normalization.q_polys"));
        for (const auto& arr : norm.at("den_polys"))
            cert.den_polys.push_back(detail::poly_from_json(arr, "normalization.den_polys"));
        cert.p = parse_rational(doc.at("p").get<std::string>());
        cert.q = parse_rational(doc.at("q").get<std::string>());
        cert.p0 = parse_rational(doc.at("p0").get<std::string>());
        cert.q0 = parse_rational(doc.at("q0").get<std::string>());
        cert.f = detail::poly_from_json(doc.at("f"), "f");
        cert.g = detail::poly_from_json(doc.at("g"), "g");
        cert.r = doc.at("r").get<long>();
        cert.u = doc.at("u").get<long>();
        for (const auto& s : doc.at("window_ratios"))
            cert.window_ratios.push_back(parse_rational(s.get<std::string>()));
        cert.verdict = doc.at("claim").at("verdict").get<std::string>();
        cert.claim_from = doc.at("claim").at("from").get<long>();
        if (doc.contains("relaxations"))
            cert.relaxations = doc.at("relaxations").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& ex) {
        throw CertificateError(std::string("certificate: malformed field: ") + ex.what());
    } catch (const std::invalid_argument& ex) {
        throw CertificateError(std::string("certificate: ") + ex.what());
    } catch (const SpecError& ex) {
        throw CertificateError(std::string("certificate: embedded spec: ") + ex.what());
    }
    return cert;
}

inline Certificate parse_certificate(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw CertificateError(std::string("certificate: invalid JSON: ") + ex.what());
    }
    return certificate_from_json(doc);
}

inline Certificate read_certificate_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CertificateError("cannot open certificate file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_certificate(ss.str());
}

struct CheckResult {
    bool accepted = false;
    std::string reason;  // set on rejection
};

/// Independent re-verification from scratch. Everything is recomputed from
/// the embedded spec: the normalization, the constants and guard
/// polynomials (which must match the stored values exactly), the threshold
/// (the stored r may be larger but not smaller), the window ratios at u, and
/// for positivity claims the whole prefix. Fresh term generation; no state
/// is shared with the prover.
inline CheckResult check(const Certificate& cert) {
    auto reject = [](const std::string& why) { return CheckResult{false, why}; };

    if (cert.verdict != "positive" && cert.verdict != "ultimately-positive")
        return reject("unknown verdict '" + cert.verdict + "'");

    NormalizedRecurrence nr;
    try {
        nr = normalize(cert.spec);
    } catch (const SpecError& ex) {
        return reject(std::string("normalization failed: ") + ex.what());
    }
    if (nr.signs != cert.signs || nr.common_degree != cert.common_degree ||
        nr.q_polys != cert.q_polys || nr.den_polys != cert.den_polys)
        return reject("normalization record mismatch");

    auto bad_roots = validate_denominators(nr);
    if (!bad_roots.empty())
        return reject("denominator vanishes at n = " + std::to_string(bad_roots.front()));

    if (sgn(cert.p) <= 0 || cmp(cert.p, cert.q) >= 0) return reject("require 0 < p < q");

    Rational p0, q0;
    try {
        std::tie(p0, q0) = compute_constants(nr, cert.p, cert.q);
    } catch (const WitnessError& ex) {
        return reject(std::string("constant recomputation failed: ") + ex.what());
    }
    if (cmp(p0, cert.p0) != 0 || cmp(q0, cert.q0) != 0) return reject("constant mismatch");
    if (sgn(p0) <= 0 || sgn(q0) <= 0) return reject("constants are not positive");

    auto [f, g] = compute_guards(nr, cert.p, cert.q);
    if (!(f == cert.f) || !(g == cert.g)) return reject("guard-polynomial mismatch");

    long r_min;
    try {
        r_min = compute_r(nr, f, g, p0, q0);
    } catch (const WitnessError& ex) {
        return reject(std::string("threshold recomputation failed: ") + ex.what());
    }
    if (cert.r < r_min) return reject("r below recomputed threshold");
    if (cert.u < cert.r) return reject("u below r");
    if (cert.u - 1 < nr.first_index()) return reject("window extends below the first known index");
    if (static_cast<int>(cert.window_ratios.size()) != nr.order)
        return reject("window ratio count differs from the order");

    TermGenerator gen(nr);
    bool need_prefix = cert.verdict == "positive";
    if (need_prefix && cert.claim_from != cert.spec.claim_start)
        return reject("claim start differs from the spec");
    long scan_from = need_prefix ? std::min(cert.spec.claim_start, cert.u - 1) : cert.u - 1;

    Rational prev;
    bool have_prev = false;
    for (long n = scan_from; n < cert.u + nr.order; ++n) {
        const Rational& cur = gen.term(n);
        if (need_prefix && n >= cert.spec.claim_start && n <= cert.u && sgn(cur) <= 0)
            return reject("prefix failure at index " + std::to_string(n));
        if (n == cert.u && sgn(cur) <= 0)
            return reject("a_u is not positive at u = " + std::to_string(cert.u));
        if (n >= cert.u) {
            if (!have_prev || sgn(prev) == 0)
                return reject("window ratio undefined at index " + std::to_string(n));
            if (!detail::ratio_in_open_interval(prev, cur, cert.p, cert.q))
                return reject("window failure at index " + std::to_string(n));
            Rational ratio = cur / prev;
            if (cmp(ratio, cert.window_ratios[n - cert.u]) != 0)
                return reject("stored window ratio differs at index " + std::to_string(n));
        }
        prev = cur;
        have_prev = true;
    }
    return CheckResult{true, ""};
}

}  // namespace posrec
