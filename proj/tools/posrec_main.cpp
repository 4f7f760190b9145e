#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "posrec/certificate.hpp"
#include "posrec/prover.hpp"
#include "posrec/spectrum.hpp"
#include "posrec/witness.hpp"

namespace {

using namespace posrec;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

struct Options {
    std::string spec_path;
    std::string cert_path;
    std::string p_str, q_str;
    long scan_budget = -1;
    bool strict = false;
    std::string output;
    bool full = false;
    bool json_output = false;
    long terms_upto = 0;
};

std::pair<std::optional<Rational>, std::optional<Rational>> parse_pq(const Options& opt) {
    std::optional<Rational> p, q;
    if (!opt.p_str.empty()) p = parse_rational(opt.p_str);
    if (!opt.q_str.empty()) q = parse_rational(opt.q_str);
    if (p.has_value() != q.has_value())
        throw WitnessError("--p and --q must be given together");
    if (p && cmp(*p, *q) >= 0)
        throw WitnessError("--p must be strictly less than --q");
    return {p, q};
}

std::string approx_decimal(const Rational& x, int digits) {
    mpf_class f(0, 64 + 4 * digits);
    f = Rational(x);
    mp_exp_t exp;
    std::string mant = f.get_str(exp, 10, digits);
    if (mant.empty()) return "0";
    bool neg = mant[0] == '-';
    std::string body = neg ? mant.substr(1) : mant;
    std::ostringstream out;
    if (neg) out << "-";
    if (exp <= 0) {
        out << "0." << std::string(-exp, '0') << body;
    } else if (static_cast<std::size_t>(exp) >= body.size()) {
        out << body << std::string(exp - body.size(), '0');
    } else {
        out << body.substr(0, exp) << "." << body.substr(exp);
    }
    return out.str();
}

/// Terms above 200 digits print as a digit count plus the leading digits
/// unless --full is passed.
std::string render_term(const Rational& x, bool full) {
    std::string s = rational_to_string(x);
    if (full || s.size() <= 200) return s;
    std::string num = x.get_num().get_str();
    std::string lead = num.substr(0, num[0] == '-' ? 13 : 12);
    return "<" + std::to_string(s.size()) + " digits, leading " + lead + "...>";
}

struct Analysis {
    RecurrenceSpec spec;
    NormalizedRecurrence nr;
    CharPoly cp;
    RootInterval mu;
    DominanceReport dom;
};

Analysis analyze_spec(const Options& opt) {
    Analysis a;
    a.spec = parse_spec_file(opt.spec_path);
    a.nr = normalize(a.spec, opt.strict);
    auto bad = validate_denominators(a.nr);
    if (!bad.empty())
        throw SpecError("denominator vanishes at n = " + std::to_string(bad.front()) +
                        " within the recurrence range");
    a.cp = char_poly(a.nr);
    auto roots = isolate_positive_roots(a.cp);
    if (roots.empty())
        throw SpecError("characteristic polynomial has no positive real root");
    a.mu = refine(a.cp, roots.back(), Rational(1, 1000000));
    a.dom = dominance_report(a.cp);
    return a;
}

nlohmann::json interval_json(const RootInterval& iv) {
    nlohmann::json j;
    j["lo"] = rational_to_string(iv.lo);
    j["hi"] = rational_to_string(iv.exact ? iv.lo : iv.hi);
    j["exact"] = iv.exact;
    return j;
}

nlohmann::json witness_json(const Witness& w) {
    nlohmann::json j;
    j["p"] = rational_to_string(w.p);
    j["q"] = rational_to_string(w.q);
    j["p0"] = rational_to_string(w.p0);
    j["q0"] = rational_to_string(w.q0);
    j["r"] = w.r;
    j["f"] = posrec::detail::poly_to_json(w.f);
    j["g"] = posrec::detail::poly_to_json(w.g);
    return j;
}

void print_guard_summary(std::ostream& os, const char* name, const Poly& h) {
    const auto& cs = h.coeffs();
    os << "  " << name << ": degree " << (h.is_zero() ? -1 : static_cast<long>(*h.degree()))
       << ", coefficients ";
    std::size_t n = cs.size();
    auto show = [&](std::size_t i) { os << "n^" << i << ": " << rational_to_string(cs[i]); };
    if (n <= 6) {
        for (std::size_t i = n; i-- > 0;) {
            show(i);
            if (i) os << ", ";
        }
    } else {
        for (std::size_t i = n; i-- > n - 3;) {
            show(i);
            os << ", ";
        }
        os << "..., ";
        for (std::size_t i = 3; i-- > 0;) {
            show(i);
            if (i) os << ", ";
        }
    }
    os << "\n";
}

int cmd_analyze(const Options& opt) {
    auto [p_opt, q_opt] = parse_pq(opt);
    Analysis a = analyze_spec(opt);

    Witness w = p_opt ? make_witness(a.nr, *p_opt, *q_opt) : auto_select_pq(a.nr, a.mu);

    if (opt.json_output) {
        nlohmann::json out;
        out["name"] = a.spec.name;
        out["order"] = a.spec.order;
        out["characteristic_polynomial"] = posrec::detail::poly_to_json(a.cp.poly);
        out["dominant_root_interval"] = interval_json(a.mu);
        nlohmann::json dom;
        dom["unique_dominant"] = a.dom.unique_dominant;
        dom["dominant_modulus"] = a.dom.dominant_modulus;
        dom["second_modulus"] = a.dom.second_modulus;
        dom["margin"] = a.dom.margin;
        dom["converged"] = a.dom.converged;
        if (!a.dom.diagnostic.empty()) dom["diagnostic"] = a.dom.diagnostic;
        nlohmann::json ests = nlohmann::json::array();
        for (const auto& z : a.dom.root_estimates)
            ests.push_back({{"re", z.real()}, {"im", z.imag()}});
        dom["root_estimates"] = ests;
        out["dominance_report"] = dom;
        out["witness"] = witness_json(w);
        std::cout << out.dump(2) << "\n";
        return kExitOk;
    }

    std::cout << "recurrence: " << a.spec.name << " (order " << a.spec.order << ")\n";
    std::cout << "characteristic polynomial: " << a.cp.poly.pretty("t") << "\n";
    if (a.mu.exact) {
        std::cout << "dominant positive root: mu = " << rational_to_string(a.mu.lo)
                  << " (exact)\n";
    } else {
        std::cout << "dominant positive root: mu in (" << approx_decimal(a.mu.lo, 12) << ", "
                  << approx_decimal(a.mu.hi, 12) << ")\n";
    }
    std::cout << "dominance (heuristic, non-certifying): "
              << (a.dom.unique_dominant ? "unique dominant root" : "NOT confirmed unique")
              << ", |mu1| ~ " << a.dom.dominant_modulus << ", |mu2| ~ " << a.dom.second_modulus;
    if (!a.dom.diagnostic.empty()) std::cout << " (" << a.dom.diagnostic << ")";
    std::cout << "\n";
    std::cout << "witness: p = " << rational_to_string(w.p) << ", q = " << rational_to_string(w.q)
              << (p_opt ? "" : " (auto-selected)") << "\n";
    std::cout << "  p0 = " << rational_to_string(w.p0) << "\n";
    std::cout << "  q0 = " << rational_to_string(w.q0) << "\n";
    std::cout << "  r  = " << w.r << "\n";
    print_guard_summary(std::cout, "f", w.f);
    print_guard_summary(std::cout, "g", w.g);
    for (const auto& note : a.nr.relaxations) std::cout << "note: " << note << "\n";
    return kExitOk;
}

int cmd_certify(const Options& opt) {
    auto started = std::chrono::steady_clock::now();
    auto [p_opt, q_opt] = parse_pq(opt);
    Analysis a = analyze_spec(opt);
    Witness w = p_opt ? make_witness(a.nr, *p_opt, *q_opt) : auto_select_pq(a.nr, a.mu);

    ProofResult pr = prove(a.nr, w, opt.scan_budget);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();

    if (pr.kind == VerdictKind::Inconclusive) {
        std::cerr << "inconclusive: " << pr.reason << "\n";
        std::cerr << "largest n scanned: " << pr.scanned_through << "\n";
        return kExitInconclusive;
    }

    Certificate cert = emit(pr, a.nr, a.spec);
    std::string path = opt.output;
    if (path.empty()) {
        path = opt.spec_path;
        auto slash = path.find_last_of('/');
        auto dot = path.find_last_of('.');
        if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
            path = path.substr(0, dot);
        path += ".poscert.json";
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        return kExitError;
    }
    out << serialize(cert);
    out.close();

    std::cout << "verdict: " << cert.verdict << " from n = " << cert.claim_from << "\n";
    std::cout << "p = " << rational_to_string(w.p) << ", q = " << rational_to_string(w.q)
              << ", r = " << w.r << ", u = " << pr.u << "\n";
    std::cout << "certificate: " << path << "\n";
    std::cout << "wall time: " << elapsed << " ms\n";
    return kExitOk;
}

int cmd_check(const Options& opt) {
    Certificate cert = read_certificate_file(opt.cert_path);
    CheckResult res = check(cert);
    if (res.accepted) {
        std::cout << "accept: " << cert.spec.name << " is " << cert.verdict << " from n = "
                  << cert.claim_from << "\n";
        return kExitOk;
    }
    std::cerr << "reject: " << res.reason << "\n";
    return kExitError;
}

int cmd_terms(const Options& opt) {
    RecurrenceSpec spec = parse_spec_file(opt.spec_path);
    NormalizedRecurrence nr = normalize(spec, opt.strict);
    auto bad = validate_denominators(nr);
    if (!bad.empty())
        throw SpecError("denominator vanishes at n = " + std::to_string(bad.front()) +
                        " within the recurrence range");
    if (opt.terms_upto < nr.first_index())
        throw SpecError("requested index " + std::to_string(opt.terms_upto) +
                        " is below the first known index " + std::to_string(nr.first_index()));
    TermGenerator gen(nr, /*keep_all=*/true);
    for (long n = nr.first_index(); n <= opt.terms_upto; ++n)
        std::cout << n << ": " << render_term(gen.term(n), opt.full) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact positivity prover for P-recursive sequences"};
    app.require_subcommand(1);
    Options opt;

    auto add_witness_flags = [&](CLI::App* sub) {
        sub->add_option("--p", opt.p_str, "lower ratio bound (rational, e.g. 30 or 7/2)");
        sub->add_option("--q", opt.q_str, "upper ratio bound (rational)");
        sub->add_flag("--strict", opt.strict,
                      "require all coefficient polynomials to share the common degree");
    };

    auto* analyze = app.add_subcommand("analyze", "characteristic polynomial, dominant root, witness");
    analyze->add_option("spec", opt.spec_path, "recurrence spec file (JSON)")->required();
    add_witness_flags(analyze);
    analyze->add_flag("--json", opt.json_output, "machine-readable JSON report");

    auto* certify = app.add_subcommand("certify", "prove positivity and write a certificate");
    certify->add_option("spec", opt.spec_path, "recurrence spec file (JSON)")->required();
    add_witness_flags(certify);
    certify->add_option("--scan-budget", opt.scan_budget, "max offsets above r to try for u");
    certify->add_option("--output", opt.output, "certificate output path (.poscert.json)");

    auto* checkc = app.add_subcommand("check", "independently re-verify a certificate");
    checkc->add_option("certificate", opt.cert_path, "certificate file (.poscert.json)")->required();

    auto* terms = app.add_subcommand("terms", "print exact sequence terms");
    terms->add_option("spec", opt.spec_path, "recurrence spec file (JSON)")->required();
    terms->add_option("n", opt.terms_upto, "print terms up to this index")->required();
    terms->add_flag("--full", opt.full, "print full digits of large terms");
    terms->add_flag("--strict", opt.strict,
                    "require all coefficient polynomials to share the common degree");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(analyze)) return cmd_analyze(opt);
        if (app.got_subcommand(certify)) return cmd_certify(opt);
        if (app.got_subcommand(checkc)) return cmd_check(opt);
        if (app.got_subcommand(terms)) return cmd_terms(opt);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
