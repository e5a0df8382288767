#include "doctest.h"

#include "pi/frontend.hpp"
#include "pi/lts_early.hpp"
#include "pi/lts_late.hpp"

#include <algorithm>

using namespace pi;

namespace {
Process P(const char* s) { return parse_process(s); }
Name N(const char* s) { return Name::intern(s); }

const Step* find(const std::vector<Step>& steps, const Transition& t) {
    for (const auto& s : steps)
        if (s.transition == t) return &s;
    return nullptr;
}

void all_check(const Process& p, const std::vector<Step>& steps, Semantics sem) {
    for (const auto& s : steps) {
        auto r = check_step(s.cert, p, s.transition, sem);
        CAPTURE(r.path);
        CAPTURE(r.message);
        CHECK(r.ok);
    }
}
}  // namespace

TEST_CASE("late steps of prefixes") {
    auto out = late_steps(P("x!y.0"));
    REQUIRE(out.size() == 1);
    CHECK(out[0].transition == Transition::free(Action::free_out(N("x"), N("y")), Process::nil()));
    CHECK(out[0].cert.rule() == StepRule::SOut);

    auto in = late_steps(P("x(z).z!a.0"));
    REQUIRE(in.size() == 1);
    CHECK(in[0].transition.action == Action::bound_in(N("x")));
    CHECK(in[0].transition.abs == Abstraction::bind(N("w"), P("w!a.0")));
    CHECK(in[0].cert.rule() == StepRule::SIn);

    auto open = late_steps(P("nu y. x!y.0"));
    REQUIRE(open.size() == 1);
    CHECK(open[0].transition.action == Action::bound_out(N("x")));
    CHECK(open[0].transition.abs == Abstraction::bind(N("y"), Process::nil()));
    CHECK(open[0].cert.rule() == StepRule::SOpen);
}

TEST_CASE("late communication and close") {
    Process p = P("x!y.0 | x(z).z!a.0");
    auto steps = late_steps(p);
    all_check(p, steps, Semantics::Late);
    const Step* com = find(steps, Transition::free(Action::tau(), P("0 | y!a.0")));
    REQUIRE(com);
    CHECK(com->cert.rule() == StepRule::SComL);

    Process q = P("(nu y. x!y.0) | x(z).z!a.0");
    auto qs = late_steps(q);
    all_check(q, qs, Semantics::Late);
    const Step* close = find(qs, Transition::free(Action::tau(), P("nu y. (0 | y!a.0)")));
    REQUIRE(close);
    CHECK(close->cert.rule() == StepRule::SCloseL);
    for (const auto& s : qs)
        if (!s.transition.is_bound())
            for (Name n : s.transition.target.free_names()) CHECK_FALSE(n.is_generated());
}

TEST_CASE("step checker side conditions") {
    Process body = P("x!z.0");
    StepCert out = step::s_out(body);
    Process src = Process::res(N("z"), body);
    StepCert bad_res(StepRule::SRes, src, Transition::free(Action::free_out(N("x"), N("z")), P("nu z. 0")), {out},
                     N("z"));
    auto r = check_step(bad_res);
    CHECK_FALSE(r.ok);
    CHECK(r.message.find("z not in n(alpha)") != std::string::npos);

    Process self = P("z!z.0");
    StepCert self_out = step::s_out(self);
    StepCert bad_open(StepRule::SOpen, Process::res(N("z"), self),
                      Transition::bound(Action::bound_out(N("z")), Abstraction::bind(N("z"), Process::nil())),
                      {self_out}, N("z"));
    auto r2 = check_step(bad_open);
    CHECK_FALSE(r2.ok);
    CHECK(r2.message.find("z != x") != std::string::npos);

    StepCert in = step::s_in(P("x(y).y!a.0"));
    Process right = P("a!y.0");
    Abstraction captured = Abstraction::bind(N("y"), P("y!a.0 | a!y.0"));
    StepCert bad_par(StepRule::SParL, Process::par(in.source(), right), Transition::bound(Action::bound_in(N("x")), captured),
                     {in});
    auto r3 = check_step(bad_par);
    CHECK_FALSE(r3.ok);
    CHECK(r3.message.find("bn(alpha)") != std::string::npos);

    CHECK(check_step(step::s_out(P("x!y.0"))));
    CHECK_FALSE(check_step(step::e_in(P("x(y).0"), N("a")), Semantics::Late));
}

TEST_CASE("decompose input") {
    auto check_decomp = [](const char* text, std::size_t nbinders, const char* r, const char* s) {
        Process q = P(text);
        auto steps = late_steps(q);
        const Step* in = nullptr;
        for (const auto& st : steps)
            if (st.transition.action.kind == Action::Kind::BoundIn) in = &st;
        REQUIRE(in);
        TelescopeDecomposition d = decompose_input(q, in->transition, in->cert);
        CHECK(d.binders.size() == nbinders);
        CHECK(check_cong(d.cert_source, q, d.source_shape()));
        CHECK(check_cong(d.cert_target, in->transition.abs.instantiate(d.object), d.target_shape()));
        NameSet names;
        for (Name w : d.binders) names.insert(w);
        Process rr = d.R, ss = d.S;
        for (std::size_t i = 0; i < d.binders.size(); ++i) {
            rr = substitute(rr, Name::intern("w"), d.binders[i]);
            ss = substitute(ss, Name::intern("w"), d.binders[i]);
        }
        rr = substitute(rr, Name::intern("y"), d.object);
        CHECK(rr == P(r));
        CHECK(ss == P(s));
    };
    check_decomp("x(y).y!a.0", 0, "y!a.0", "0");
    check_decomp("x(y).0 | b!c.0", 0, "0", "0 | b!c.0");
    check_decomp("nu w. (x(y).0 | w!a.0)", 1, "0", "0 | w!a.0");
}

TEST_CASE("decompose outputs") {
    Process q = P("nu w. x!y.w!w.0");
    auto steps = late_steps(q);
    REQUIRE(steps.size() == 1);
    auto d = decompose_free_output(q, steps[0].transition, steps[0].cert);
    CHECK(d.binders.size() == 1);
    CHECK(check_cong(d.cert_source, q, d.source_shape()));
    CHECK(check_cong(d.cert_target, steps[0].transition.target, d.target_shape()));

    for (const char* text : {"nu z. x!z.0", "(nu z. x!z.0) | a!b.0", "nu w. nu z. x!z.w!a.0", "nu z. nu w. x!z.w!a.0"}) {
        Process b = P(text);
        CAPTURE(text);
        for (const auto& st : late_steps(b)) {
            if (st.transition.action.kind != Action::Kind::BoundOut) continue;
            auto bd = decompose_bound_output(b, st.transition, st.cert);
            CHECK(check_cong(bd.cert_source, b, bd.source_shape()));
            CHECK(check_cong(bd.cert_target, st.transition.abs.instantiate(bd.object), bd.target_shape()));
            bool rederived = false;
            for (const auto& again : late_steps(bd.source_shape()))
                if (again.transition.action == st.transition.action) rederived = true;
            CHECK(rederived);
        }
    }
}

TEST_CASE("early steps") {
    Process p = P("x(z).z!a.0");
    auto steps = early_steps(p, NameSet{N("x"), N("y"), N("a")});
    all_check(p, steps, Semantics::Early);
    CHECK(find(steps, Transition::free(Action::free_in(N("x"), N("y")), P("y!a.0"))));

    Process c = P("x!y.0 | x(z).0");
    auto cs = early_steps(c, c.free_names());
    all_check(c, cs, Semantics::Early);
    const Step* com = find(cs, Transition::free(Action::tau(), P("0 | 0")));
    REQUIRE(com);
    CHECK(com->cert.rule() == StepRule::EComL);

    CHECK(early_steps(Process::nil(), {}).empty());
    CHECK_THROWS_AS(early_steps(P("x!y.0"), NameSet{N("x")}), ContractViolation);
}

TEST_CASE("early and late translators") {
    const char* samples[] = {"x(z).z!a.0", "x(z).0 | b!c.0", "nu v. x(z).z!v.0", "nu y. x(z).z!y.0"};
    for (const char* text : samples) {
        Process p = P(text);
        CAPTURE(text);
        NameSet u = p.free_names();
        u.insert(N("y"));
        for (const auto& s : early_steps(p, u)) {
            if (s.transition.action.kind != Action::Kind::FreeIn) continue;
            LateInput l = finp_early_to_late(p, s.transition, s.cert);
            CHECK(check_step(l.step.cert, p, l.step.transition));
            CHECK(l.step.transition.abs.instantiate(s.transition.action.payload) == s.transition.target);
            CHECK_FALSE(u.contains(l.witness));
            Step back = finp_late_to_early(p, l.step.transition, l.step.cert, s.transition.action.payload);
            CHECK(back.transition == s.transition);
            CHECK(check_step(back.cert, p, back.transition, Semantics::Early));
        }
    }

    for (const char* text : {"x!y.0 | x(z).0", "(nu z. x!z.0) | x(w).0", "nu q. ((x!q.0 | a!b.0) | x(w).w!w.0)"}) {
        Process p = P(text);
        CAPTURE(text);
        for (const auto& s : late_steps(p)) {
            if (!s.transition.action.is_tau()) continue;
            StepCert e = tau_late_to_early(p, s.transition, s.cert);
            CHECK(check_step(e, p, s.transition, Semantics::Early));
            StepCert l = tau_early_to_late(p, s.transition, e);
            CHECK(check_step(l, p, s.transition, Semantics::Late));
        }
    }
}
