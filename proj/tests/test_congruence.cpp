#include "doctest.h"

#include "pi/congruence.hpp"
#include "pi/frontend.hpp"

using namespace pi;

namespace {
Process P(const char* s) { return parse_process(s); }
Name N(const char* s) { return Name::intern(s); }

bool has_rule(const CongCert& c, CongRule r) {
    if (c.rule() == r) return true;
    for (const auto& p : c.premises())
        if (has_rule(p, r)) return true;
    return false;
}
}  // namespace

TEST_CASE("checker accepts axiom instances") {
    Process p = P("a!b.0"), q = P("c(d).d!a.0");
    CHECK(check_cong(cong::par_comm(p, q), Process::par(p, q), Process::par(q, p)));
    CHECK(check_cong(cong::par_unit(p), Process::par(p, Process::nil()), p));
    CHECK(check_cong(cong::par_assoc(p, q, p)));
    CHECK(check_cong(cong::sc_ext_zero(N("x"))));
    CHECK(check_cong(cong::sc_ext_res(N("x"), N("y"), P("x!y.0"))));
}

TEST_CASE("checker rejects malformed nodes") {
    Process p = P("a!b.0");
    CongCert bad_unit(CongRule::ParUnit, Process::par(p, Process::nil()), P("b!a.0"));
    CHECK_FALSE(check_cong(bad_unit));

    // (nu x. x!a.0) | x!b.0 against nu x. (x!a.0 | x!b.0) with the right
    // component captured.
    Process lhs = P("(nu x. x!a.0) | x!b.0");
    Process rhs = P("nu x. (x!a.0 | x!b.0)");
    CongCert captured(CongRule::ScExtPar, lhs, rhs);
    auto r = check_cong(captured, lhs, rhs);
    CHECK_FALSE(r.ok);
    CHECK(r.message.find("x not in fn(Q)") != std::string::npos);
    CHECK_THROWS_AS(cong::sc_ext_par(N("x"), P("x!a.0"), P("x!b.0")), ContractViolation);

    CongCert wrong_arity(CongRule::CTrans, p, p, {cong::refl(p)});
    CHECK_FALSE(check_cong(wrong_arity));

    // A C-Res binder that is free in the conclusion is rejected.
    Process body = P("x!a.0 | 0");
    CongCert inner = cong::par_unit(P("x!a.0"));
    CongCert res(CongRule::CRes, Process::res(N("x"), body), Process::res(N("x"), P("x!a.0")), {inner}, N("x"));
    CHECK(check_cong(res));
    CongCert inner2 = cong::par_comm(P("a!a.0"), P("a!a.0"));
    CongCert clash(CongRule::CRes, P("nu x. (a!a.0 | a!a.0)"), P("nu x. (a!a.0 | a!a.0)"), {inner2}, N("a"));
    auto r2 = check_cong(clash);
    CHECK_FALSE(r2.ok);
    CHECK(r2.path == "root");
}

TEST_CASE("diagnostic path points into the tree") {
    Process p = P("a!b.0");
    CongCert bad_unit(CongRule::ParUnit, Process::par(p, Process::nil()), P("b!a.0"));
    CongCert wrapped(CongRule::CSym, bad_unit.rhs(), bad_unit.lhs(), {bad_unit});
    auto r = check_cong(wrapped);
    CHECK_FALSE(r.ok);
    CHECK(r.path == "root/premises[0]");
}

TEST_CASE("normalize examples") {
    CanonicalForm a = normalize(P("a!b.0 | 0"));
    CHECK(a.telescope.empty());
    CHECK(a.threads.size() == 1);

    CHECK(normalize(P("nu x. 0")).empty());

    CanonicalForm c = normalize(P("(nu x. x!a.0) | b!c.0"));
    CHECK(c.telescope.size() == 1);
    CHECK(c.threads.size() == 2);

    CHECK(normalize_cert(Process::nil()).rule() == CongRule::CRef);

    CongCert unit = normalize_cert(P("a!b.0 | 0"));
    CHECK(check_cong(unit, P("a!b.0 | 0"), P("a!b.0")));
    CHECK(unit.rule() == CongRule::ParUnit);

    Process vac = P("nu z. a!b.0");
    CongCert drop = normalize_cert(vac);
    CHECK(check_cong(drop, vac, P("a!b.0")));
    CHECK(has_rule(drop, CongRule::ScExtPar));
    CHECK(has_rule(drop, CongRule::ScExtZero));
}

TEST_CASE("normalization certificates check and are idempotent") {
    const char* samples[] = {
        "nu x. (x!a.0 | nu y. (y(z).z!x.0 | 0)) | (b!c.0 | nu w. w!w.0)",
        "x(y).(nu z. 0 | y!y.(0 | 0))",
        "nu a. nu b. nu c. (c!b.0 | a!a.0)",
        "(0 | 0) | (0 | nu q. 0)",
    };
    for (const char* s : samples) {
        Process p = P(s);
        NameSupply supply(p.free_names());
        NormalizeResult r = normalize_with(p, supply);
        CAPTURE(s);
        CHECK(check_cong(r.cert, p, r.form.embed()));
        CanonicalForm again = normalize(r.form.embed());
        CHECK(forms_match(r.form, again));
        for (Name w : r.form.telescope) CHECK_FALSE(p.has_free(w));
    }
}

TEST_CASE("congruent examples") {
    auto yes = [](const char* a, const char* b) {
        auto c = congruent(P(a), P(b));
        REQUIRE(c.has_value());
        CHECK(check_cong(*c, P(a), P(b)));
    };
    yes("x(y).0", "x(z).0");
    yes("(nu x. x!a.0) | b!c.0", "nu x. (x!a.0 | b!c.0)");
    yes("a!b.0 | 0", "a!b.0");
    yes("nu z. a!b.0", "a!b.0");
    yes("a!b.0 | (c!d.0 | e!f.0)", "(e!f.0 | a!b.0) | c!d.0");
    yes("nu x. nu y. (x!y.0 | y!x.0)", "nu y. nu x. (y!x.0 | x!y.0)");
    yes("x(y).(y!a.0 | nu z. z!y.0)", "x(w).(nu q. (0 | q!w.0) | w!a.0)");
    yes("nu a. (a!b.0 | a!b.0) | nu c. c!b.0", "nu c. (c!b.0 | nu a. (a!b.0 | a!b.0))");

    CHECK_FALSE(congruent(P("x!y.0"), P("y!x.0")).has_value());
    CHECK_FALSE(congruent(P("nu x. x!a.0"), P("x!a.0")).has_value());
    CHECK_FALSE(congruent(P("nu x. (x!a.0 | x!b.0)"), P("nu x. x!a.0 | nu x. x!b.0")).has_value());
    CHECK_FALSE(congruent(P("x(y).y!a.0"), P("x(y).a!y.0")).has_value());
}

TEST_CASE("matching backtracks over ambiguous siblings") {
    Process p = P("nu a. nu b. (a!c.0 | b!c.0 | a(x).b!x.0)");
    Process q = P("nu b. nu a. (b(x).a!x.0 | a!c.0 | b!c.0)");
    auto c = congruent(p, q);
    REQUIRE(c.has_value());
    CHECK(check_cong(*c, p, q));
    CHECK_FALSE(congruent(p, P("nu b. nu a. (b(x).b!x.0 | a!c.0 | b!c.0)")).has_value());
}

TEST_CASE("rename_cert keeps certificates valid") {
    Process p = P("x(y).(y!a.0 | 0)");
    CongCert c = normalize_cert(p);
    REQUIRE(check_cong(c));
    CongCert r = rename_cert(c, N("a"), N("b"));
    CHECK(check_cong(r, P("x(y).(y!b.0 | 0)"), P("x(y).y!b.0")));

    // Renaming onto a name used as a recorded binder.
    NameSet names = cert_names(c);
    for (Name n : names) {
        if (!n.is_generated()) continue;
        CongCert r2 = rename_cert(c, N("a"), n);
        CHECK(check_cong(r2));
        CHECK(r2.lhs() == substitute(p, n, N("a")));
    }
}

TEST_CASE("vacuous restriction outside a used one") {
    for (const char* src : {"nu u. nu v. v(w).0", "nu u. nu v. nu t. (v!t.0 | t(q).0)", "nu u. (nu v. v!v.0 | a!b.0)"}) {
        CAPTURE(src);
        Process p = parse_process(src);
        CongCert c = normalize_cert(p);
        CHECK(check_cong(c, p, normalize(p).embed()).ok);
    }
}
