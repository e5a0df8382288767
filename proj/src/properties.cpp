#include <algorithm>
#include <stdexcept>

#include "pi/certjson.hpp"
#include "pi/frontend.hpp"
#include "pi/harmony.hpp"
#include "pi/lts_early.hpp"
#include "pi/lts_late.hpp"
#include "pi/reduction.hpp"
#include "pi/testbench.hpp"

namespace pi {

namespace {

std::string show(const Transition& t) {
    Name b = t.is_bound() ? display_binder(t.abs, NameSet{}) : Name{};
    return print_action(t.action, b) + " -> " + print_process(t.result_at(b));
}

std::string why(const CheckResult& r) { return r.path + ": " + r.message; }

bool contains(const std::vector<Transition>& ts, const Transition& t) {
    return std::find(ts.begin(), ts.end(), t) != ts.end();
}

std::vector<Transition> transitions(const std::vector<Step>& steps) {
    std::vector<Transition> out;
    for (const auto& s : steps) out.push_back(s.transition);
    return out;
}

// Names worth probing: the free names, a couple of pool names and a fresh one.
std::vector<Name> probe_names(const Process& p) {
    std::vector<Name> out = p.free_names().items();
    for (const char* s : {"x", "y", "q"}) {
        Name n = Name::intern(s);
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    }
    out.push_back(fresh_name(p.free_names(), "f"));
    return out;
}

bool has_open(const StepCert& c) {
    if (c.rule() == StepRule::SOpen) return true;
    for (const auto& p : c.premises())
        if (has_open(p)) return true;
    return false;
}

PropertyOutcome syntax_roundtrip(const Process& p) {
    std::string text = print_process(p);
    Process back = parse_process(text);
    if (!alpha_eq(back, p)) return PropertyOutcome::fail("parse(print(p)) differs from p: " + text);
    if (print_process(back) != text) return PropertyOutcome::fail("print is not stable: " + text);
    return PropertyOutcome::pass(1);
}

PropertyOutcome name_lemmas(const Process& p) {
    const NameSet& fn = p.free_names();
    std::size_t cases = 0;
    for (const auto& s : late_steps(p)) {
        const Action& a = s.transition.action;
        ++cases;
        switch (a.kind) {
            case Action::Kind::FreeOut:
                if (!fn.contains(a.channel) || !fn.contains(a.payload))
                    return PropertyOutcome::fail("output names not free: " + show(s.transition));
                break;
            case Action::Kind::BoundIn:
                if (!fn.contains(a.channel)) return PropertyOutcome::fail("input channel not free: " + show(s.transition));
                break;
            case Action::Kind::BoundOut:
                if (!fn.contains(a.channel) || !has_open(s.cert))
                    return PropertyOutcome::fail("bound output without free channel or open: " + show(s.transition));
                break;
            default: break;
        }
        for (Name x : probe_names(p)) {
            if (fn.contains(x) || a.mentions(x)) continue;
            Name at = fresh_name(NameSet::unite(fn, NameSet{x}), "i");
            if (s.transition.result_at(at).has_free(x))
                return PropertyOutcome::fail("fresh name " + x.text() + " appears in result of " + show(s.transition));
        }
    }
    CongCert c = normalize_cert(p);
    ++cases;
    if (!(c.rhs().free_names() == fn)) return PropertyOutcome::fail("normal form changes free names");
    return PropertyOutcome::pass(cases);
}

PropertyOutcome subst_lemmas(const Process& p) {
    std::size_t cases = 0;
    std::vector<Name> names = probe_names(p);
    CongCert c = normalize_cert(p);
    const Process& q = c.rhs();
    for (Name x : names) {
        ++cases;
        if (!alpha_eq(substitute(p, x, x), p)) return PropertyOutcome::fail("p{x/x} != p for x = " + x.text());
        for (Name y : names) {
            if (!p.has_free(x)) {
                ++cases;
                if (!alpha_eq(substitute(p, y, x), p))
                    return PropertyOutcome::fail("substituting a non-free name changed p: " + x.text());
                continue;
            }
            ++cases;
            Process py = substitute(p, y, x);
            Process qy = substitute(q, y, x);
            CongCert renamed = rename_cert(c, x, y);
            if (auto r = check_cong(renamed, py, qy); !r)
                return PropertyOutcome::fail("renamed congruence fails for {" + y.text() + "/" + x.text() + "}: " + why(r));
            if (!congruent(py, qy))
                return PropertyOutcome::fail("congruence not preserved by {" + y.text() + "/" + x.text() + "}");
        }
    }
    return PropertyOutcome::pass(cases);
}

PropertyOutcome normalization(const Process& p) {
    CongCert c = normalize_cert(p);
    if (auto r = check_cong(c, p, normalize(p).embed()); !r) return PropertyOutcome::fail(why(r));
    auto back = congruent(c.rhs(), p);
    if (!back) return PropertyOutcome::fail("normal form not recognised as congruent");
    if (auto r = check_cong(*back, c.rhs(), p); !r) return PropertyOutcome::fail(why(r));
    return PropertyOutcome::pass(2);
}

PropertyOutcome late_certs(const Process& p) {
    std::size_t cases = 0;
    for (const auto& s : late_steps(p)) {
        ++cases;
        if (auto r = check_step(s.cert, p, s.transition); !r)
            return PropertyOutcome::fail(show(s.transition) + ": " + why(r));
    }
    return PropertyOutcome::pass(cases);
}

PropertyOutcome late_vs_oracle(const Process& p) {
    std::vector<Transition> mine = transitions(late_steps(p));
    std::vector<Transition> oracle = step_oracle(p);
    for (const auto& t : mine)
        if (!contains(oracle, t)) return PropertyOutcome::fail("not derivable by the oracle: " + show(t));
    for (const auto& t : oracle)
        if (!contains(mine, t)) return PropertyOutcome::fail("missed transition: " + show(t));
    return PropertyOutcome::pass(std::max<std::size_t>(1, mine.size()));
}

PropertyOutcome harmony_forward(const Process& p) {
    std::size_t cases = 0;
    for (const auto& s : late_steps(p)) {
        if (!s.transition.action.is_tau()) continue;
        ++cases;
        RedCert r = tau_to_reduction(p, s.transition, s.cert);
        if (auto c = check_red(r, p, s.transition.target); !c)
            return PropertyOutcome::fail("tau to " + print_process(s.transition.target) + ": " + why(c));
    }
    return PropertyOutcome::pass(cases);
}

PropertyOutcome harmony_backward(const Process& p) {
    std::size_t cases = 0;
    std::vector<Transition> late = transitions(late_steps(p));
    for (const auto& red : reducts(p)) {
        ++cases;
        std::string where = "reduct " + print_process(red.target) + ": ";
        if (auto c = check_red(red.cert, p, red.target); !c) return PropertyOutcome::fail(where + why(c));
        TauWitness w = reduction_to_tau(p, red.target, red.cert);
        if (auto c = check_step(w.cert, p, w.cert.transition()); !c) return PropertyOutcome::fail(where + why(c));
        if (!w.cert.transition().action.is_tau() || !(w.cert.transition().target == w.target))
            return PropertyOutcome::fail(where + "witness is not a silent step to its target");
        if (auto c = check_cong(w.cong, red.target, w.target); !c) return PropertyOutcome::fail(where + why(c));
        if (!contains(late, w.cert.transition())) return PropertyOutcome::fail(where + "silent step not in late_steps");
        if (!congruent(red.target, w.target)) return PropertyOutcome::fail(where + "targets not decided congruent");
    }
    return PropertyOutcome::pass(cases);
}

bool reducts_contains_congruent(const Process& p, const Process& q) {
    for (const auto& r : reducts(p))
        if (congruent(r.target, q)) return true;
    return false;
}

PropertyOutcome harmony_part_i(const Process& p) {
    std::size_t cases = 0;
    CongCert c = normalize_cert(p);
    const Process& r = c.rhs();
    auto instantiated_ok = [](const Transferred& t, const Transition& other, bool new_first) {
        Name n = t.instantiation;
        return new_first ? check_cong(t.cong, t.transition.result_at(n), other.result_at(n))
                         : check_cong(t.cong, other.result_at(n), t.transition.result_at(n));
    };
    for (const auto& s : late_steps(r)) {
        ++cases;
        Transferred t = part_i(p, r, c, s.transition, s.cert);
        if (auto k = check_step(t.cert, p, t.transition); !k) return PropertyOutcome::fail(show(s.transition) + ": " + why(k));
        if (!(t.transition.action == s.transition.action)) return PropertyOutcome::fail("action changed: " + show(s.transition));
        if (auto k = instantiated_ok(t, s.transition, true); !k)
            return PropertyOutcome::fail(show(s.transition) + ": " + why(k));
        if (t.transition.action.is_tau() && !reducts_contains_congruent(p, s.transition.target))
            return PropertyOutcome::fail("no reduct congruent to " + print_process(s.transition.target));
    }
    for (const auto& s : late_steps(p)) {
        ++cases;
        Transferred t = transfer(p, r, c, s.transition, s.cert);
        if (auto k = check_step(t.cert, r, t.transition); !k) return PropertyOutcome::fail(show(s.transition) + ": " + why(k));
        if (auto k = instantiated_ok(t, s.transition, false); !k)
            return PropertyOutcome::fail(show(s.transition) + ": " + why(k));
        Transferred back = transfer(r, p, cong::sym(c), t.transition, t.cert);
        Name n = back.instantiation;
        if (!congruent(back.transition.result_at(n), s.transition.result_at(n)))
            return PropertyOutcome::fail("transfer there and back changes the class of " + show(s.transition));
    }
    return PropertyOutcome::pass(cases);
}

PropertyOutcome early_late(const Process& p) {
    std::size_t cases = 0;
    NameSet u = p.free_names();
    std::vector<Step> early = early_steps(p, u);
    std::vector<Step> late = late_steps(p);
    std::vector<Transition> late_ts = transitions(late);
    std::vector<Transition> early_ts = transitions(early);
    std::vector<Process> lt, et;
    for (const auto& s : late)
        if (s.transition.action.is_tau()) lt.push_back(s.transition.target);
    for (const auto& s : early)
        if (s.transition.action.is_tau()) et.push_back(s.transition.target);
    auto covered = [](const std::vector<Process>& a, const std::vector<Process>& b) {
        std::vector<bool> used(b.size(), false);
        for (const auto& x : a) {
            bool found = false;
            for (std::size_t i = 0; i < b.size() && !found; ++i)
                if (!used[i] && b[i] == x) used[i] = found = true;
            if (!found) return false;
        }
        return true;
    };
    ++cases;
    if (lt.size() != et.size() || !covered(lt, et)) return PropertyOutcome::fail("silent targets differ");

    for (const auto& s : early) {
        if (auto r = check_step(s.cert, p, s.transition, Semantics::Early); !r)
            return PropertyOutcome::fail("early " + show(s.transition) + ": " + why(r));
        const Action& a = s.transition.action;
        if (a.kind == Action::Kind::FreeIn) {
            ++cases;
            LateInput l = finp_early_to_late(p, s.transition, s.cert);
            if (auto r = check_step(l.step.cert, p, l.step.transition); !r) return PropertyOutcome::fail(why(r));
            if (!contains(late_ts, l.step.transition)) return PropertyOutcome::fail("late input not enumerated");
            if (!(l.step.transition.abs.instantiate(a.payload) == s.transition.target))
                return PropertyOutcome::fail("instantiation does not give the early target");
            Step back = finp_late_to_early(p, l.step.transition, l.step.cert, a.payload);
            if (!(back.transition == s.transition)) return PropertyOutcome::fail("input round trip changed the transition");
        } else if (a.is_tau()) {
            ++cases;
            StepCert l = tau_early_to_late(p, s.transition, s.cert);
            if (auto r = check_step(l, p, s.transition); !r) return PropertyOutcome::fail(why(r));
            StepCert e = tau_late_to_early(p, s.transition, l);
            if (auto r = check_step(e, p, s.transition, Semantics::Early); !r) return PropertyOutcome::fail(why(r));
        }
    }
    Name d = designated_fresh(u);
    for (const auto& s : late) {
        const Action& a = s.transition.action;
        if (a.kind == Action::Kind::BoundIn) {
            std::vector<Name> payloads = u.items();
            payloads.push_back(d);
            for (Name y : payloads) {
                ++cases;
                Step e = finp_late_to_early(p, s.transition, s.cert, y);
                if (auto r = check_step(e.cert, p, e.transition, Semantics::Early); !r) return PropertyOutcome::fail(why(r));
                if (!contains(early_ts, e.transition)) return PropertyOutcome::fail("early input not enumerated");
                LateInput back = finp_early_to_late(p, e.transition, e.cert);
                if (!(back.step.transition == s.transition)) return PropertyOutcome::fail("late input round trip changed");
            }
        } else if (a.is_tau()) {
            ++cases;
            StepCert e = tau_late_to_early(p, s.transition, s.cert);
            if (auto r = check_step(e, p, s.transition, Semantics::Early); !r) return PropertyOutcome::fail(why(r));
            StepCert l = tau_early_to_late(p, s.transition, e);
            if (auto r = check_step(l, p, s.transition); !r) return PropertyOutcome::fail(why(r));
        }
    }

    // A larger universe only adds renamings of the designated payload.
    NameSet bigger = u;
    Name extra = fresh_name(NameSet::unite(u, NameSet{d}), "e");
    bigger.insert(extra);
    for (const auto& t : transitions(early_steps(p, bigger))) {
        if (contains(early_ts, t)) continue;
        ++cases;
        bool ok = false;
        if (t.action.kind == Action::Kind::FreeIn)
            for (const auto& b : early_ts)
                if (b.action.kind == Action::Kind::FreeIn && b.action.payload == d &&
                    rename_transition(b, d, t.action.payload) == t)
                    ok = true;
        if (!ok) return PropertyOutcome::fail("larger universe adds " + show(t));
    }
    return PropertyOutcome::pass(cases);
}

PropertyOutcome decompositions(const Process& p) {
    std::size_t cases = 0;
    for (const auto& s : late_steps(p)) {
        const Action& a = s.transition.action;
        std::optional<TelescopeDecomposition> d;
        Name inst;
        if (a.kind == Action::Kind::BoundIn) {
            d = decompose_input(p, s.transition, s.cert);
            inst = d->object;
        } else if (a.kind == Action::Kind::FreeOut) {
            d = decompose_free_output(p, s.transition, s.cert);
        } else if (a.kind == Action::Kind::BoundOut) {
            d = decompose_bound_output(p, s.transition, s.cert);
            inst = d->object;
        } else {
            continue;
        }
        ++cases;
        std::string where = show(s.transition) + ": ";
        if (auto r = check_cong(d->cert_source, p, d->source_shape()); !r) return PropertyOutcome::fail(where + why(r));
        Process result = s.transition.result_at(inst);
        if (auto r = check_cong(d->cert_target, result, d->target_shape()); !r) return PropertyOutcome::fail(where + why(r));
        bool rederived = false;
        for (const auto& t : late_steps(d->source_shape()))
            if (t.transition.action == a && t.transition.result_at(inst) == d->target_shape()) rederived = true;
        if (!rederived) return PropertyOutcome::fail(where + "shape does not re-derive the action");
    }
    for (const auto& red : reducts(p)) {
        ++cases;
        std::string where = "reduct " + print_process(red.target) + ": ";
        RedexDecomposition d = decompose_reduction(p, red.target, red.cert);
        if (auto r = check_cong(d.cert_source, p, d.source_shape()); !r) return PropertyOutcome::fail(where + why(r));
        if (auto r = check_cong(d.cert_target, red.target, d.target_shape()); !r) return PropertyOutcome::fail(where + why(r));
        Process out = Process::output(d.subject, d.payload, d.R1);
        Process in = Process::input(d.subject, d.var, d.R2);
        RedCert again = red::r_res_chain(d.binders, red::r_par(red::r_com(out, in), d.S));
        if (auto r = check_red(again, d.source_shape(), d.target_shape()); !r) return PropertyOutcome::fail(where + why(r));
    }
    return PropertyOutcome::pass(cases);
}

template <class C, class Read>
std::optional<std::string> json_roundtrip(const C& cert, Read read) {
    Json j = to_json(cert);
    std::string text = j.dump();
    C back = read(Json::parse(text));
    if (!cert_equal(cert, back)) return std::string("deserialized certificate differs");
    if (to_json(back).dump() != text) return std::string("serialization is not stable");
    return std::nullopt;
}

PropertyOutcome cert_roundtrip(const Process& p) {
    std::size_t cases = 0;
    auto fail = [&](const std::string& what, const std::string& m) { return PropertyOutcome::fail(what + ": " + m); };
    CongCert nc = normalize_cert(p);
    ++cases;
    if (auto e = json_roundtrip(nc, cong_from_json)) return fail("normalization", *e);
    for (const auto& s : late_steps(p)) {
        ++cases;
        if (auto e = json_roundtrip(s.cert, step_from_json)) return fail(show(s.transition), *e);
        const Action& a = s.transition.action;
        if (a.is_tau()) {
            ++cases;
            if (auto e = json_roundtrip(tau_to_reduction(p, s.transition, s.cert), red_from_json))
                return fail("reduction of " + show(s.transition), *e);
        } else {
            ++cases;
            TelescopeDecomposition d = a.kind == Action::Kind::BoundIn    ? decompose_input(p, s.transition, s.cert)
                                       : a.kind == Action::Kind::FreeOut ? decompose_free_output(p, s.transition, s.cert)
                                                                          : decompose_bound_output(p, s.transition, s.cert);
            if (auto e = json_roundtrip(d, telescope_from_json)) return fail("decomposition of " + show(s.transition), *e);
        }
    }
    for (const auto& s : early_steps(p, p.free_names())) {
        ++cases;
        if (auto e = json_roundtrip(s.cert, step_from_json)) return fail("early " + show(s.transition), *e);
    }
    for (const auto& red : reducts(p)) {
        ++cases;
        if (auto e = json_roundtrip(red.cert, red_from_json)) return fail("reduct", *e);
        if (auto e = json_roundtrip(decompose_reduction(p, red.target, red.cert), redex_from_json))
            return fail("redex decomposition", *e);
        TauWitness w = reduction_to_tau(p, red.target, red.cert);
        if (auto e = json_roundtrip(w.cong, cong_from_json)) return fail("witness congruence", *e);
        if (auto e = json_roundtrip(w.cert, step_from_json)) return fail("witness step", *e);
    }
    return PropertyOutcome::pass(cases);
}

PropertyOutcome reduction_certs(const Process& p) {
    std::size_t cases = 0;
    for (const auto& red : reducts(p)) {
        ++cases;
        if (auto c = check_red(red.cert, p, red.target); !c) return PropertyOutcome::fail(why(c));
    }
    return PropertyOutcome::pass(cases);
}

}  // namespace

const std::vector<Property>& builtin_properties() {
    static const std::vector<Property> props = {
        {"syntax-roundtrip", "parse(print(p)) is alpha-equal to p and printing is stable", syntax_roundtrip},
        {"name-lemmas", "free and bound names of actions and results", name_lemmas},
        {"subst-lemmas", "identity and vacuous substitution; congruence is closed under renaming", subst_lemmas},
        {"normalization", "normalize_cert checks and the normal form is decided congruent", normalization},
        {"late-certs", "every late transition certificate checks", late_certs},
        {"late-vs-oracle", "late_steps equals the independent derivation search", late_vs_oracle},
        {"reduction-certs", "every reduct certificate checks", reduction_certs},
        {"harmony-forward", "silent transitions yield checking reduction certificates", harmony_forward},
        {"harmony-backward", "reductions yield enumerated silent transitions to congruent targets", harmony_backward},
        {"harmony-part-i", "transitions transfer across normalization in both directions", harmony_part_i},
        {"early-late", "early and late agree on silent steps; the translators round-trip", early_late},
        {"decompositions", "telescope and redex decompositions check and re-derive", decompositions},
        {"cert-roundtrip", "JSON serialization of every emitted certificate round-trips", cert_roundtrip},
    };
    return props;
}

std::vector<Property> select_properties(const std::vector<std::string>& names) {
    std::vector<Property> out;
    for (const auto& n : names) {
        const auto& all = builtin_properties();
        auto it = std::find_if(all.begin(), all.end(), [&](const Property& p) { return p.name == n; });
        if (it == all.end()) throw std::invalid_argument("unknown property '" + n + "'");
        out.push_back(*it);
    }
    return out;
}

}  // namespace pi
