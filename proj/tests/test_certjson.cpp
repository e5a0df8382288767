#include "doctest.h"

#include "pi/certjson.hpp"
#include "pi/frontend.hpp"
#include "pi/harmony.hpp"
#include "pi/lts_early.hpp"

using namespace pi;

namespace {
Process P(const char* s) { return parse_process(s); }
}  // namespace

TEST_CASE("congruence certificate documents") {
    CongCert c = normalize_cert(P("nu w.(x!w.0 | 0) | y(z).z!w.0"));
    Json doc = cong_document(c);
    CHECK(doc["kind"] == "cong");
    CHECK(check_document(doc).ok);
    CongCert back = cong_from_json(doc["cert"]);
    CHECK(cert_equal(c, back));
    CHECK(to_json(back) == doc["cert"]);
}

TEST_CASE("step certificate documents keep the semantics") {
    Process p = P("nu z. x!z.0 | x(w).w!w.0");
    for (const auto& s : early_steps(p, p.free_names())) {
        Json doc = step_document(s.cert, Semantics::Early);
        CHECK(doc["semantics"] == "early");
        CHECK(check_document(doc).ok);
        CHECK(cert_equal(step_from_json(doc["cert"]), s.cert));
    }
    for (const auto& s : late_steps(p)) {
        Json doc = step_document(s.cert);
        CHECK(check_document(doc).ok);
        Transition t = transition_from_json(to_json(s.transition));
        CHECK(t == s.transition);
    }
}

TEST_CASE("reduction and decomposition documents") {
    Process p = P("nu w.(x!w.0 | x(z).z!a.0)");
    auto rs = reducts(p);
    REQUIRE(rs.size() == 1);
    CHECK(check_document(red_document(rs[0].cert)).ok);
    RedexDecomposition d = decompose_reduction(p, rs[0].target, rs[0].cert);
    Json dd = redex_document(d);
    CHECK(check_document(dd).ok);
    CHECK(cert_equal(redex_from_json(dd["cert"]), d));

    Process q = P("nu v. x!v.v(u).0 | y!y.0");
    for (const auto& s : late_steps(q)) {
        if (s.transition.action.kind != Action::Kind::BoundOut) continue;
        TelescopeDecomposition t = decompose_bound_output(q, s.transition, s.cert);
        Json td = telescope_document(t);
        CHECK(td["cert"]["decomposition"] == "bound-output");
        CHECK(check_document(td).ok);
        CHECK(cert_equal(telescope_from_json(td["cert"]), t));
    }
}

TEST_CASE("tampered and malformed documents") {
    CongCert c = cong::par_unit(P("a!b.0"));
    Json doc = cong_document(c);
    Json tampered = doc;
    tampered["cert"]["conclusion"]["rhs"] = "b!a.0";
    CHECK_FALSE(check_document(tampered).ok);

    Json bad_rule = doc;
    bad_rule["cert"]["rule"] = "Magic";
    auto r = check_document(bad_rule);
    CHECK_FALSE(r.ok);
    CHECK(r.path == "/cert/rule");

    Json missing = doc;
    missing["cert"].erase("premises");
    r = check_document(missing);
    CHECK_FALSE(r.ok);
    CHECK(r.path == "/cert/premises");

    Json bad_text = doc;
    bad_text["cert"]["conclusion"]["lhs"] = "a!b";
    r = check_document(bad_text);
    CHECK_FALSE(r.ok);
    CHECK(r.path == "/cert/conclusion/lhs");

    CHECK_FALSE(check_document(Json{{"kind", "nothing"}, {"cert", Json::object()}}).ok);
    CHECK_FALSE(check_document(Json::array()).ok);
}

TEST_CASE("generated names survive serialization") {
    Process p = P("x(z).(nu q. z!q.0)");
    for (const auto& s : late_steps(p)) {
        TelescopeDecomposition t = decompose_input(p, s.transition, s.cert);
        CHECK(t.object.is_generated());
        CHECK(cert_equal(telescope_from_json(to_json(t)), t));
    }
}
