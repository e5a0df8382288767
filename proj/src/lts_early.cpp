#include "pi/lts_early.hpp"

#include <unordered_set>

namespace pi {

Name designated_fresh(const NameSet& universe) { return fresh_name(universe, "d"); }

namespace {

class EarlyEnumerator {
public:
    std::vector<Step> run(const Process& p, const NameSet& payloads) {
        std::vector<Step> out;
        std::unordered_set<Transition, TransitionHash> seen;
        auto add = [&](StepCert c) {
            if (seen.insert(c.transition()).second) out.push_back(Step{c.transition(), std::move(c)});
        };
        switch (p.kind()) {
            case Kind::Nil: break;
            case Kind::Out: add(step::s_out(p)); break;
            case Kind::In:
                add(step::s_in(p));
                for (Name y : payloads) add(step::e_in(p, y));
                break;
            case Kind::Par: {
                std::vector<Step> ls = run(p.left(), payloads);
                std::vector<Step> rs = run(p.right(), payloads);
                for (const auto& s : ls) add(step::s_par_l(s.cert, p.right()));
                for (const auto& s : rs) add(step::s_par_r(p.left(), s.cert));
                for (const auto& l : ls) {
                    const Action& a = l.transition.action;
                    for (const auto& r : rs) {
                        const Action& b = r.transition.action;
                        if (a.is_tau() || b.is_tau() || a.channel != b.channel) continue;
                        if (a.kind == Action::Kind::FreeOut && b.kind == Action::Kind::FreeIn && a.payload == b.payload)
                            add(step::e_com_l(l.cert, r.cert));
                        else if (a.kind == Action::Kind::FreeIn && b.kind == Action::Kind::FreeOut &&
                                 a.payload == b.payload)
                            add(step::e_com_r(l.cert, r.cert));
                        else if (a.kind == Action::Kind::BoundOut && b.kind == Action::Kind::BoundIn)
                            add(step::e_close_l(fresh_name(p.free_names(), l.transition.abs.hint), l.cert, r.cert));
                        else if (a.kind == Action::Kind::BoundIn && b.kind == Action::Kind::BoundOut)
                            add(step::e_close_r(fresh_name(p.free_names(), r.transition.abs.hint), l.cert, r.cert));
                    }
                }
                break;
            }
            case Kind::Res: {
                Name z = fresh_name(NameSet::unite(payloads, p.free_names()), p.hint());
                NameSet inner = payloads;
                inner.insert(z);
                for (const auto& s : run(p.open_body(z), inner)) {
                    const Action& a = s.transition.action;
                    if (!a.mentions(z))
                        add(step::s_res(z, s.cert));
                    else if (a.kind == Action::Kind::FreeOut && a.payload == z && a.channel != z)
                        add(step::s_open(z, s.cert));
                }
                break;
            }
        }
        return out;
    }
};

void require(bool ok, const std::string& what) {
    if (!ok) throw ContractViolation(what);
}

StepCert early_input_to_late(const StepCert& c) {
    switch (c.rule()) {
        case StepRule::EIn: return step::s_in(c.source());
        case StepRule::SParL: return step::s_par_l(early_input_to_late(c.premises()[0]), c.source().right());
        case StepRule::SParR: return step::s_par_r(c.source().left(), early_input_to_late(c.premises()[0]));
        case StepRule::SRes: return step::s_res(*c.binder(), early_input_to_late(c.premises()[0]));
        default: break;
    }
    throw ContractViolation(std::string("finp_early_to_late: unexpected rule ") + to_string(c.rule()));
}

StepCert late_input_to_early(const StepCert& c, Name y) {
    switch (c.rule()) {
        case StepRule::SIn: return step::e_in(c.source(), y);
        case StepRule::SParL: return step::s_par_l(late_input_to_early(c.premises()[0], y), c.source().right());
        case StepRule::SParR: return step::s_par_r(c.source().left(), late_input_to_early(c.premises()[0], y));
        case StepRule::SRes: {
            Name z = *c.binder();
            StepCert prem = c.premises()[0];
            if (z == y) {
                NameSet avoid = step_cert_names(c);
                avoid.insert(y);
                Name apart = fresh_name(avoid, z.hint());
                prem = rename_step_cert(prem, z, apart);
                z = apart;
            }
            return step::s_res(z, late_input_to_early(prem, y));
        }
        default: break;
    }
    throw ContractViolation(std::string("finp_late_to_early: unexpected rule ") + to_string(c.rule()));
}

StepCert tau_e2l(const StepCert& c) {
    const auto& pr = c.premises();
    switch (c.rule()) {
        case StepRule::SParL: return step::s_par_l(tau_e2l(pr[0]), c.source().right());
        case StepRule::SParR: return step::s_par_r(c.source().left(), tau_e2l(pr[0]));
        case StepRule::SRes: return step::s_res(*c.binder(), tau_e2l(pr[0]));
        case StepRule::EComL: return step::s_com_l(pr[0], early_input_to_late(pr[1]));
        case StepRule::EComR: return step::s_com_r(early_input_to_late(pr[0]), pr[1]);
        case StepRule::ECloseL: return step::s_close_l(pr[0], pr[1]);
        case StepRule::ECloseR: return step::s_close_r(pr[0], pr[1]);
        default: break;
    }
    throw ContractViolation(std::string("tau_early_to_late: unexpected rule ") + to_string(c.rule()));
}

StepCert tau_l2e(const StepCert& c) {
    const auto& pr = c.premises();
    switch (c.rule()) {
        case StepRule::SParL: return step::s_par_l(tau_l2e(pr[0]), c.source().right());
        case StepRule::SParR: return step::s_par_r(c.source().left(), tau_l2e(pr[0]));
        case StepRule::SRes: return step::s_res(*c.binder(), tau_l2e(pr[0]));
        case StepRule::SComL:
            return step::e_com_l(pr[0], late_input_to_early(pr[1], pr[0].transition().action.payload));
        case StepRule::SComR:
            return step::e_com_r(late_input_to_early(pr[0], pr[1].transition().action.payload), pr[1]);
        case StepRule::SCloseL:
            return step::e_close_l(fresh_name(c.source().free_names(), pr[0].transition().abs.hint), pr[0], pr[1]);
        case StepRule::SCloseR:
            return step::e_close_r(fresh_name(c.source().free_names(), pr[1].transition().abs.hint), pr[0], pr[1]);
        default: break;
    }
    throw ContractViolation(std::string("tau_late_to_early: unexpected rule ") + to_string(c.rule()));
}

void require_valid(const Process& p, const Transition& t, const StepCert& cert, Semantics sem, const char* who) {
    auto r = check_step(cert, p, t, sem);
    require(r.ok, std::string(who) + ": invalid certificate: " + r.message);
}

}  // namespace

std::vector<Step> early_steps(const Process& p, const NameSet& universe) {
    if (!p.free_names().subset_of(universe))
        throw ContractViolation("early_steps: universe does not contain every free name of the process");
    NameSet payloads = universe;
    payloads.insert(designated_fresh(universe));
    return EarlyEnumerator{}.run(p, payloads);
}

LateInput finp_early_to_late(const Process& p, const Transition& t, const StepCert& cert) {
    require(t.action.kind == Action::Kind::FreeIn, "finp_early_to_late: not a free input");
    require_valid(p, t, cert, Semantics::Early, "finp_early_to_late");
    StepCert late = early_input_to_late(cert);
    NameSet avoid = step_cert_names(cert);
    Name w = fresh_name(avoid, late.transition().abs.hint);
    return LateInput{Step{late.transition(), late}, w};
}

Step finp_late_to_early(const Process& p, const Transition& t, const StepCert& cert, Name y) {
    require(t.action.kind == Action::Kind::BoundIn, "finp_late_to_early: not an input");
    require_valid(p, t, cert, Semantics::Late, "finp_late_to_early");
    StepCert early = late_input_to_early(cert, y);
    return Step{early.transition(), early};
}

StepCert tau_early_to_late(const Process& p, const Transition& t, const StepCert& cert) {
    require(t.action.is_tau(), "tau_early_to_late: not a silent transition");
    require_valid(p, t, cert, Semantics::Early, "tau_early_to_late");
    return tau_e2l(cert);
}

StepCert tau_late_to_early(const Process& p, const Transition& t, const StepCert& cert) {
    require(t.action.is_tau(), "tau_late_to_early: not a silent transition");
    require_valid(p, t, cert, Semantics::Late, "tau_late_to_early");
    return tau_l2e(cert);
}

}  // namespace pi
