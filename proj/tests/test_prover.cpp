#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "posrec/prover.hpp"

using namespace posrec;

namespace {

const std::string kData = POSREC_DATA_DIR;

NormalizedRecurrence load(const std::string& file) {
    return normalize(parse_spec_file(kData + "/" + file));
}

Rational R(const std::string& s) { return parse_rational(s); }

}  // namespace

TEST_CASE("doubling sequence: window at u=1 has ratio exactly 2") {
    auto nr = load("doubling.json");
    Witness w = make_witness(nr, Rational(1), Rational(3));
    auto wc = check_window(nr, w, 1);
    CHECK(wc.ok);
    REQUIRE(wc.ratios.size() == 1);
    CHECK(cmp(wc.ratios[0], Rational(2)) == 0);

    auto scan = find_min_admissible_u(nr, w, 100);
    CHECK(scan.u == 1);
}

TEST_CASE("a105641: u = r = 2645 is minimal admissible, ratios in (3, 7/2)") {
    auto nr = load("a105641.json");
    Witness w = make_witness(nr, Rational(3), R("7/2"));
    REQUIRE(w.r == 2645);
    auto scan = find_min_admissible_u(nr, w, default_scan_budget(w.r));
    CHECK(scan.u == 2645);
    REQUIRE(scan.ratios.size() == 6);
    for (const auto& ratio : scan.ratios) {
        CHECK(cmp(Rational(3), ratio) < 0);
        CHECK(cmp(ratio, R("7/2")) < 0);
    }
    auto wc = check_window(nr, w, scan.u);
    CHECK(wc.ok);
    for (std::size_t i = 0; i < wc.ratios.size(); ++i)
        CHECK(cmp(wc.ratios[i], scan.ratios[i]) == 0);
}

TEST_CASE("grz: u = r = 1148 is admissible") {
    auto nr = load("grz4.json");
    Witness w = make_witness(nr, Rational(64), Rational(226));
    REQUIRE(w.r == 1148);
    auto wc = check_window(nr, w, 1148);
    CHECK(wc.ok);
    CHECK(wc.ratios.size() == 4);
}

TEST_CASE("window fails cleanly on a zero term") {
    // a_n = -a_{n-1} + a_{n-2} starting 1, 1 passes through 0 at n=3:
    // 1, 1, 0, 1, -1, 2, ...
    std::string doc = R"({
      "name": "hits-zero", "order": 2, "recurrence_start": 2, "claim_start": 0,
      "numerators": [["-1"], ["1"]], "denominators": [["1"], ["1"]],
      "initial_terms": {"0": "1", "1": "1"}
    })";
    auto nr = normalize(parse_spec_string(doc));
    Witness w;
    w.p = Rational(1, 2);
    w.q = Rational(2);
    w.r = 1;
    auto wc = check_window(nr, w, 3);
    CHECK(!wc.ok);
    CHECK(wc.diagnostic.find("zero term") != std::string::npos);
}

TEST_CASE("window handles negative terms without error") {
    // Alternating sequence a_n = -2 a_{n-1}: ratios are exactly -2.
    std::string doc = R"({
      "name": "alternating", "order": 1, "recurrence_start": 1, "claim_start": 0,
      "numerators": [["-2"]], "denominators": [["1"]],
      "initial_terms": {"0": "1"}
    })";
    auto nr = normalize(parse_spec_string(doc));
    Witness w;
    w.p = Rational(1);
    w.q = Rational(3);
    w.r = 1;
    auto wc = check_window(nr, w, 5);
    CHECK(!wc.ok);
}

TEST_CASE("prefix checks detect the known initial-value degeneracies") {
    auto a105641 = load("a105641.json");
    auto at2 = check_prefix(a105641, 2, 100);
    CHECK(!at2.ok);
    CHECK(at2.first_failure == 2);  // c_2 = 0
    CHECK(check_prefix(a105641, 3, 100).ok);

    auto grz = load("grz4.json");
    auto at1 = check_prefix(grz, 1, 100);
    CHECK(!at1.ok);
    CHECK(at1.first_failure == 1);  // b_1 = 0
    CHECK(check_prefix(grz, 2, 100).ok);
}

TEST_CASE("prove: a105641 is positive from 3") {
    auto nr = load("a105641.json");
    Witness w = make_witness(nr, Rational(3), R("7/2"));
    ProofResult pr = prove(nr, w);
    CHECK(pr.kind == VerdictKind::Positive);
    CHECK(pr.claim_from == 3);
    CHECK(pr.u == 2645);
    CHECK(pr.window_ratios.size() == 6);
}

TEST_CASE("prove: grz is positive from 2") {
    auto nr = load("grz4.json");
    Witness w = make_witness(nr, Rational(64), Rational(226));
    ProofResult pr = prove(nr, w);
    CHECK(pr.kind == VerdictKind::Positive);
    CHECK(pr.claim_from == 2);
    CHECK(pr.u == 1148);
}

TEST_CASE("prove with claim_start below a zero term reports ultimate positivity") {
    auto spec = parse_spec_file(kData + "/grz4.json");
    spec.claim_start = 1;  // b_1 = 0 breaks the positivity claim
    auto nr = normalize(spec);
    Witness w = make_witness(nr, Rational(64), Rational(226));
    ProofResult pr = prove(nr, w);
    CHECK(pr.kind == VerdictKind::UltimatelyPositive);
    CHECK(pr.claim_from == pr.u);
    CHECK(pr.reason.find("index 1") != std::string::npos);
}

TEST_CASE("exhausted budget yields inconclusive, not a refutation") {
    // Alternating sign: no window can ever pass.
    std::string doc = R"({
      "name": "alternating", "order": 1, "recurrence_start": 1, "claim_start": 0,
      "numerators": [["-2"]], "denominators": [["1"]],
      "initial_terms": {"0": "1"}
    })";
    auto nr = normalize(parse_spec_string(doc));
    Witness w;
    w.p = Rational(1);
    w.q = Rational(3);
    w.r = 1;
    ProofResult pr = prove(nr, w, /*scan_budget=*/200);
    CHECK(pr.kind == VerdictKind::Inconclusive);
    CHECK(pr.reason.find("budget") != std::string::npos);
}

TEST_CASE("minimality: every u below the reported one fails its window") {
    // Fibonacci ratios 1, 2, 3/2, 5/3, ... against (4/3, 2): the early
    // ratios fall outside, so the minimal admissible u sits above r.
    auto nr = load("fibonacci.json");
    Witness w = make_witness(nr, Rational(4, 3), Rational(2));
    auto scan = find_min_admissible_u(nr, w, 50);
    REQUIRE(scan.u > w.r);
    for (long u = std::max(w.r, nr.first_index() + 1); u < scan.u; ++u)
        CHECK(!check_window(nr, w, u).ok);
}

TEST_CASE("induction extends past the window: fibonacci ratios stay bracketed") {
    auto nr = load("fibonacci.json");
    Witness w = make_witness(nr, Rational(4, 3), Rational(2));
    ProofResult pr = prove(nr, w);
    REQUIRE(pr.kind == VerdictKind::Positive);
    CHECK(pr.u == 3);  // ratios 1 and 2 fall outside (4/3, 2); 3/2 and 5/3 pass
    TermGenerator gen(nr);
    Rational prev = gen.term(pr.u - 1);
    for (long n = pr.u; n <= pr.u + 500; ++n) {
        const Rational& cur = gen.term(n);
        CHECK(cmp(w.p * prev, cur) < 0);
        CHECK(cmp(cur, w.q * prev) < 0);
        prev = cur;
    }
}
