#include "doctest.h"

#include "pi/frontend.hpp"
#include "pi/reduction.hpp"

using namespace pi;

namespace {
Process P(const char* s) { return parse_process(s); }
Name N(const char* s) { return Name::intern(s); }

bool has_target(const std::vector<Reduct>& rs, const Process& q) {
    for (const auto& r : rs)
        if (alpha_eq(r.target, q)) return true;
    return false;
}

void all_check(const Process& p, const std::vector<Reduct>& rs) {
    for (const auto& r : rs) {
        auto res = check_red(r.cert, p, r.target);
        CAPTURE(res.path);
        CAPTURE(res.message);
        CHECK(res.ok);
    }
}
}  // namespace

TEST_CASE("basic communication") {
    Process p = P("x!y.0 | x(z).0");
    auto rs = reducts(p);
    REQUIRE(rs.size() == 1);
    CHECK(alpha_eq(rs[0].target, P("0 | 0")));
    all_check(p, rs);
}

TEST_CASE("no reduction under an input prefix") {
    CHECK(reducts(P("x(z).(x!a.0 | x(w).0)")).empty());
    CHECK(reducts(P("x!y.(x!a.0 | x(w).0)")).empty());
    CHECK(reducts(P("0")).empty());
}

TEST_CASE("communication under restriction") {
    Process p = P("nu x.(x!y.0 | x(z).z!a.0)");
    auto rs = reducts(p);
    REQUIRE(rs.size() == 1);
    CHECK(alpha_eq(rs[0].target, P("nu x.(0 | y!a.0)")));
    all_check(p, rs);
}

TEST_CASE("reducts up to congruence") {
    Process p = P("x(z).z!b.0 | (nu w. x!w.0 | x!c.0)");
    auto rs = reducts(p);
    all_check(p, rs);
    CHECK(rs.size() == 2);
    for (const auto& r : rs) {
        bool expected = congruent(r.target, P("nu w.(w!b.0 | 0) | x!c.0")).has_value() ||
                        congruent(r.target, P("c!b.0 | nu w. x!w.0 | 0")).has_value();
        CHECK(expected);
    }
}

TEST_CASE("redex decomposition") {
    Process p = P("nu w.(x!w.0 | x(z).z!a.0)");
    auto rs = reducts(p);
    REQUIRE(rs.size() == 1);
    RedexDecomposition d = decompose_reduction(p, rs[0].target, rs[0].cert);
    REQUIRE(d.binders.size() == 1);
    CHECK(d.payload == d.binders[0]);
    CHECK(d.subject == N("x"));
    CHECK(check_cong(d.cert_source, p, d.source_shape()).ok);
    CHECK(check_cong(d.cert_target, rs[0].target, d.target_shape()).ok);
    CHECK(d.R2.has_free(d.var));
}

TEST_CASE("redex decomposition of a handwritten derivation") {
    Process out = P("x!y.a!b.0");
    Process in = P("x(z).z!b.0");
    RedCert com = red::r_com(out, in);
    CHECK(alpha_eq(com.rhs(), P("a!b.0 | y!b.0")));
    RedCert c = red::r_res(N("q"), red::r_par(com, P("q!q.0")));
    REQUIRE(check_red(c).ok);
    RedexDecomposition d = decompose_reduction(c.lhs(), c.rhs(), c);
    CHECK(d.binders.size() == 1);
    CHECK(check_cong(d.cert_source, c.lhs(), d.source_shape()).ok);
    CHECK(check_cong(d.cert_target, c.rhs(), d.target_shape()).ok);
}

TEST_CASE("check_red rejects bad certificates") {
    Process out = P("x!y.0");
    Process in = P("x(z).0");
    RedCert com = red::r_com(out, in);
    RedCert wrong(RedRule::RCom, com.lhs(), P("0"));
    CHECK_FALSE(check_red(wrong).ok);
    RedCert mismatch(RedRule::RCom, P("x!y.0 | u(z).0"), P("0 | 0"));
    CHECK_FALSE(check_red(mismatch).ok);
    CHECK_FALSE(check_red(com, com.lhs(), P("0")).ok);
    CHECK_THROWS_AS(red::r_com(out, P("u(z).0")), ContractViolation);
    RedCert res = red::r_res(N("y"), com);
    REQUIRE(check_red(res).ok);
    RedCert clash(RedRule::RRes, res.lhs(), res.rhs(), {com}, N("x"));
    CHECK_FALSE(check_red(clash).ok);
    RedCert bad_struct(RedRule::RStruct, com.lhs(), com.rhs(), {com}, std::nullopt, cong::refl(P("0")),
                       cong::refl(com.rhs()));
    auto r = check_red(bad_struct);
    CHECK_FALSE(r.ok);
    CHECK(r.path.find("left") != std::string::npos);
}

TEST_CASE("redex decomposition rejects invalid certificates") {
    RedCert wrong(RedRule::RCom, P("x!y.0 | x(z).0"), P("0"));
    CHECK_THROWS_AS(decompose_reduction(wrong.lhs(), wrong.rhs(), wrong), ContractViolation);
}
