#include "doctest.h"

#include "pi/frontend.hpp"
#include "pi/harmony.hpp"
#include "pi/lts_late.hpp"

using namespace pi;

namespace {
Process P(const char* s) { return parse_process(s); }

const char* const kSamples[] = {
    "x!y.0 | x(z).0",
    "nu x.(x!y.0 | x(z).z!a.0)",
    "nu w. x!w.0 | x(z).z!a.0",
    "x(z).z!a.0 | nu w.(x!w.w(q).0)",
    "(nu w. x!w.0 | y!a.0) | (x(z).0 | y(u).u!u.0)",
    "nu a. nu b.(a!b.0 | a(z).z!a.0 | x!b.0)",
    "nu a.(x!a.0 | a(u).0) | x(z).(z!z.0 | 0)",
    "x!x.0 | (x(z).0 | nu y.(x!y.0 | y(v).0))",
    "((x!y.0 | 0) | nu q. q!q.0) | x(z).z!z.0",
};

bool in_late(const Process& p, const Transition& t) {
    for (const auto& s : late_steps(p))
        if (s.transition == t) return true;
    return false;
}
}  // namespace

TEST_CASE("silent transitions are reductions") {
    for (const char* src : kSamples) {
        Process p = P(src);
        CAPTURE(src);
        for (const auto& s : late_steps(p)) {
            if (!s.transition.action.is_tau()) continue;
            RedCert r = tau_to_reduction(p, s.transition, s.cert);
            auto res = check_red(r, p, s.transition.target);
            CAPTURE(res.path);
            CAPTURE(res.message);
            CHECK(res.ok);
        }
    }
}

TEST_CASE("reductions are silent transitions") {
    for (const char* src : kSamples) {
        Process p = P(src);
        CAPTURE(src);
        for (const auto& r : reducts(p)) {
            TauWitness w = reduction_to_tau(p, r.target, r.cert);
            CHECK(check_step(w.cert, p, w.cert.transition()).ok);
            CHECK(w.cert.transition().action.is_tau());
            CHECK(check_cong(w.cong, r.target, w.target).ok);
            CHECK(in_late(p, w.cert.transition()));
        }
    }
}

TEST_CASE("transitions transfer across normalization both ways") {
    for (const char* src : kSamples) {
        Process p = P(src);
        CAPTURE(src);
        CongCert c = normalize_cert(p);
        Process q = c.rhs();
        for (const auto& s : late_steps(p)) {
            Transferred t = transfer(p, q, c, s.transition, s.cert);
            CHECK(check_step(t.cert, q, t.transition).ok);
            CHECK(t.transition.action == s.transition.action);
            CHECK(check_cong(t.cong, s.transition.result_at(t.instantiation), t.transition.result_at(t.instantiation)).ok);
        }
        for (const auto& s : late_steps(q)) {
            Transferred t = part_i(p, q, c, s.transition, s.cert);
            CHECK(check_step(t.cert, p, t.transition).ok);
            CHECK(t.transition.action == s.transition.action);
            CHECK(check_cong(t.cong, t.transition.result_at(t.instantiation), s.transition.result_at(t.instantiation)).ok);
        }
    }
}

TEST_CASE("scope extrusion turns an open into a close") {
    Process p = P("(nu w. x!w.0) | x(z).z!a.0");
    Process q = P("nu w.(x!w.0 | x(z).z!a.0)");
    CongCert c = cong::sc_ext_par(Name::intern("w"), P("x!w.0"), P("x(z).z!a.0"));
    REQUIRE(check_cong(c, p, q).ok);
    for (const auto& s : late_steps(p)) {
        if (!s.transition.action.is_tau()) continue;
        CHECK(s.cert.rule() == StepRule::SCloseL);
        Transferred t = transfer(p, q, c, s.transition, s.cert);
        CHECK(t.cert.rule() == StepRule::SRes);
        CHECK(t.cert.premises()[0].rule() == StepRule::SComL);
        CHECK(alpha_eq(t.transition.target, s.transition.target));
    }
}

TEST_CASE("harmony rejects invalid inputs") {
    Process p = P("x!y.0 | x(z).0");
    auto steps = late_steps(p);
    const Step* tau = nullptr;
    const Step* out = nullptr;
    for (const auto& s : steps) {
        if (s.transition.action.is_tau()) tau = &s;
        else if (s.transition.action.kind == Action::Kind::FreeOut) out = &s;
    }
    REQUIRE(tau);
    REQUIRE(out);
    CHECK_THROWS_AS(tau_to_reduction(p, out->transition, out->cert), ContractViolation);
    CHECK_THROWS_AS(tau_to_reduction(P("0"), tau->transition, tau->cert), ContractViolation);
    CHECK_THROWS_AS(transfer(p, P("0"), cong::refl(p), tau->transition, tau->cert), ContractViolation);
}
