#include "pi/step.hpp"

namespace pi {

Transition Transition::free(Action a, Process target) {
    if (a.is_bound()) throw ContractViolation("Transition::free with a bound action");
    return Transition{a, std::move(target), Abstraction{}};
}

Transition Transition::bound(Action a, Abstraction abs) {
    if (!a.is_bound()) throw ContractViolation("Transition::bound with a free action");
    return Transition{a, Process::nil(), std::move(abs)};
}

Process Transition::result_at(Name n) const { return is_bound() ? abs.instantiate(n) : target; }

NameSet Transition::free_names() const {
    return NameSet::unite(action.free_names(), is_bound() ? abs.free_names() : target.free_names());
}

std::size_t Transition::hash() const {
    std::size_t h = static_cast<std::size_t>(action.kind) * 0x9e3779b97f4a7c15ull;
    h ^= std::hash<Name>{}(action.channel) + (h << 6) + (h >> 2);
    if (action.kind == Action::Kind::FreeOut || action.kind == Action::Kind::FreeIn)
        h ^= std::hash<Name>{}(action.payload) + (h << 6) + (h >> 2);
    h ^= (is_bound() ? abs.body.hash() : target.hash()) + (h << 6) + (h >> 2);
    return h;
}

bool Transition::operator==(const Transition& o) const {
    if (!(action == o.action)) return false;
    return is_bound() ? abs == o.abs : target == o.target;
}

const char* to_string(StepRule r) {
    switch (r) {
        case StepRule::SIn: return "SIn";
        case StepRule::SOut: return "SOut";
        case StepRule::SParL: return "SParL";
        case StepRule::SParR: return "SParR";
        case StepRule::SComL: return "SComL";
        case StepRule::SComR: return "SComR";
        case StepRule::SRes: return "SRes";
        case StepRule::SOpen: return "SOpen";
        case StepRule::SCloseL: return "SCloseL";
        case StepRule::SCloseR: return "SCloseR";
        case StepRule::EIn: return "EIn";
        case StepRule::EComL: return "EComL";
        case StepRule::EComR: return "EComR";
        case StepRule::ECloseL: return "ECloseL";
        case StepRule::ECloseR: return "ECloseR";
    }
    return "?";
}

std::optional<StepRule> step_rule_from_string(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(StepRule::ECloseR); ++i) {
        auto r = static_cast<StepRule>(i);
        if (s == to_string(r)) return r;
    }
    return std::nullopt;
}

const char* to_string(Semantics s) { return s == Semantics::Late ? "late" : "early"; }

StepCert::StepCert(StepRule rule, Process source, Transition transition, std::vector<StepCert> premises,
                   std::optional<Name> binder)
    : node_(std::make_shared<const StepNode>(
          StepNode{rule, std::move(source), std::move(transition), std::move(premises), binder})) {}

StepRule StepCert::rule() const { return node_->rule; }
const Process& StepCert::source() const { return node_->source; }
const Transition& StepCert::transition() const { return node_->transition; }
const std::vector<StepCert>& StepCert::premises() const { return node_->premises; }
const std::optional<Name>& StepCert::binder() const { return node_->binder; }

std::size_t StepCert::node_count() const {
    std::size_t n = 1;
    for (const auto& p : premises()) n += p.node_count();
    return n;
}

namespace {

void collect(const StepCert& c, NameSet& out) {
    out.insert_all(c.source().free_names());
    out.insert_all(c.transition().free_names());
    if (c.binder()) out.insert(*c.binder());
    for (const auto& p : c.premises()) collect(p, out);
}

bool allowed(StepRule r, Semantics sem) {
    switch (r) {
        case StepRule::SIn:
        case StepRule::SOut:
        case StepRule::SParL:
        case StepRule::SParR:
        case StepRule::SRes:
        case StepRule::SOpen: return true;
        case StepRule::SComL:
        case StepRule::SComR:
        case StepRule::SCloseL:
        case StepRule::SCloseR: return sem == Semantics::Late;
        case StepRule::EIn:
        case StepRule::EComL:
        case StepRule::EComR:
        case StepRule::ECloseL:
        case StepRule::ECloseR: return sem == Semantics::Early;
    }
    return false;
}

// Abstraction body of the restriction nu z. P(a) where P is `inner`.
Abstraction restrict_abstraction(Name z, const Abstraction& inner) {
    NameSet avoid = inner.free_names();
    avoid.insert(z);
    Name a = fresh_name(avoid, inner.hint);
    Abstraction out = Abstraction::bind(a, Process::res(z, inner.instantiate(a)));
    out.hint = inner.hint;
    return out;
}

class StepChecker {
public:
    explicit StepChecker(Semantics sem) : sem_(sem) {}

    CheckResult check(const StepCert& c, const std::string& path) {
        if (c.empty()) return CheckResult::fail(path, "empty certificate node");
        auto bad = [&](const std::string& why) {
            return CheckResult::fail(path, std::string(to_string(c.rule())) + ": " + why);
        };
        if (!allowed(c.rule(), sem_))
            return bad(std::string("rule is not part of the ") + to_string(sem_) + " semantics");
        const Process& src = c.source();
        const Transition& t = c.transition();
        if (!src.locally_closed()) return bad("source contains a dangling bound index");
        if (!t.is_bound() && !t.target.locally_closed()) return bad("target contains a dangling bound index");
        if (t.is_bound() && t.abs.body.loose() > 1) return bad("abstraction body has dangling indices");
        if (t.action.kind == Action::Kind::FreeIn && sem_ == Semantics::Late)
            return bad("free input actions belong to the early semantics");

        const auto& prem = c.premises();
        std::size_t want = 0;
        switch (c.rule()) {
            case StepRule::SIn:
            case StepRule::SOut:
            case StepRule::EIn: want = 0; break;
            case StepRule::SParL:
            case StepRule::SParR:
            case StepRule::SRes:
            case StepRule::SOpen: want = 1; break;
            default: want = 2; break;
        }
        if (prem.size() != want)
            return bad("expects " + std::to_string(want) + " premise(s), got " + std::to_string(prem.size()));
        for (std::size_t i = 0; i < prem.size(); ++i) {
            auto sub = check(prem[i], path + "/premises[" + std::to_string(i) + "]");
            if (!sub) return sub;
        }

        const Action& a = t.action;
        switch (c.rule()) {
            case StepRule::SIn: {
                if (src.kind() != Kind::In || src.channel().bound) return bad("source is not an input prefix");
                if (!(a == Action::bound_in(src.channel().name))) return bad("action is not the input on the subject");
                if (!(t.abs.body == src.body())) return bad("abstraction differs from the continuation");
                return CheckResult::pass();
            }
            case StepRule::EIn: {
                if (src.kind() != Kind::In || src.channel().bound) return bad("source is not an input prefix");
                if (a.kind != Action::Kind::FreeIn || !(a.channel == src.channel().name))
                    return bad("action is not a free input on the subject");
                if (!(t.target == src.open_body(a.payload))) return bad("target is not the instantiated continuation");
                return CheckResult::pass();
            }
            case StepRule::SOut: {
                if (src.kind() != Kind::Out || src.channel().bound || src.payload().bound)
                    return bad("source is not an output prefix");
                if (!(a == Action::free_out(src.channel().name, src.payload().name)))
                    return bad("action differs from the prefix");
                if (!(t.target == src.body())) return bad("target differs from the continuation");
                return CheckResult::pass();
            }
            case StepRule::SParL:
            case StepRule::SParR: {
                bool left = c.rule() == StepRule::SParL;
                if (src.kind() != Kind::Par) return bad("source is not parallel");
                const Process& moving = left ? src.left() : src.right();
                const Process& idle = left ? src.right() : src.left();
                const StepCert& p = prem[0];
                if (!(p.source() == moving)) return bad("premise source is not the active component");
                if (!(p.transition().action == a)) return bad("premise action differs");
                if (!t.is_bound()) {
                    Process expect = left ? Process::par(p.transition().target, idle)
                                          : Process::par(idle, p.transition().target);
                    if (!(t.target == expect)) return bad("target does not rebuild the parallel composition");
                    return CheckResult::pass();
                }
                const Process& body = t.abs.body;
                if (body.kind() == Kind::Par) {
                    const Process& idle_out = left ? body.right() : body.left();
                    const Process& moved = left ? body.left() : body.right();
                    if (!(idle_out == idle) && !idle_out.locally_closed() && moved == p.transition().abs.body)
                        return bad("side condition bn(alpha) and fn(Q) disjoint violated");
                }
                Process expect = left ? Process::par(p.transition().abs.body, idle)
                                      : Process::par(idle, p.transition().abs.body);
                if (!(body == expect)) return bad("abstraction does not rebuild the parallel composition");
                return CheckResult::pass();
            }
            case StepRule::SComL:
            case StepRule::SComR:
            case StepRule::EComL:
            case StepRule::EComR: {
                bool left = c.rule() == StepRule::SComL || c.rule() == StepRule::EComL;
                bool early = c.rule() == StepRule::EComL || c.rule() == StepRule::EComR;
                if (src.kind() != Kind::Par) return bad("source is not parallel");
                if (!a.is_tau()) return bad("communication must be silent");
                const StepCert& out = left ? prem[0] : prem[1];
                const StepCert& in = left ? prem[1] : prem[0];
                if (!(prem[0].source() == src.left()) || !(prem[1].source() == src.right()))
                    return bad("premise sources are not the parallel components");
                const Action& ao = out.transition().action;
                const Action& ai = in.transition().action;
                if (ao.kind != Action::Kind::FreeOut) return bad("output premise is not a free output");
                Process received;
                if (early) {
                    if (ai.kind != Action::Kind::FreeIn) return bad("input premise is not a free input");
                    if (!(ai.channel == ao.channel) || !(ai.payload == ao.payload))
                        return bad("input and output actions do not coincide");
                    received = in.transition().target;
                } else {
                    if (ai.kind != Action::Kind::BoundIn) return bad("input premise is not an input");
                    if (!(ai.channel == ao.channel)) return bad("channels differ");
                    received = in.transition().abs.instantiate(ao.payload);
                }
                Process expect = left ? Process::par(out.transition().target, received)
                                      : Process::par(received, out.transition().target);
                if (!(t.target == expect)) return bad("target does not match the communication");
                return CheckResult::pass();
            }
            case StepRule::SCloseL:
            case StepRule::SCloseR:
            case StepRule::ECloseL:
            case StepRule::ECloseR: {
                bool left = c.rule() == StepRule::SCloseL || c.rule() == StepRule::ECloseL;
                bool early = c.rule() == StepRule::ECloseL || c.rule() == StepRule::ECloseR;
                if (src.kind() != Kind::Par) return bad("source is not parallel");
                if (!a.is_tau()) return bad("communication must be silent");
                if (!(prem[0].source() == src.left()) || !(prem[1].source() == src.right()))
                    return bad("premise sources are not the parallel components");
                const StepCert& out = left ? prem[0] : prem[1];
                const StepCert& in = left ? prem[1] : prem[0];
                const Action& ao = out.transition().action;
                const Action& ai = in.transition().action;
                if (ao.kind != Action::Kind::BoundOut) return bad("output premise is not a bound output");
                if (ai.kind != Action::Kind::BoundIn) return bad("input premise is not an input");
                if (!(ai.channel == ao.channel)) return bad("channels differ");
                const Abstraction& po = out.transition().abs;
                const Abstraction& pi_ = in.transition().abs;
                Process expect;
                if (early) {
                    if (!c.binder()) return bad("missing extruded name");
                    Name z = *c.binder();
                    if (in.source().has_free(z)) return bad("side condition z not in fn(Q) violated");
                    if (out.source().has_free(z)) return bad("extruded name is not fresh");
                    Process inner = left ? Process::par(po.instantiate(z), pi_.instantiate(z))
                                         : Process::par(pi_.instantiate(z), po.instantiate(z));
                    expect = Process::res(z, inner);
                } else {
                    expect = Process::make_res(po.hint, left ? Process::par(po.body, pi_.body)
                                                             : Process::par(pi_.body, po.body));
                }
                if (!(t.target == expect)) return bad("target is not the restricted composition");
                return CheckResult::pass();
            }
            case StepRule::SRes: {
                if (src.kind() != Kind::Res) return bad("source is not a restriction");
                if (!c.binder()) return bad("missing binder name");
                Name z = *c.binder();
                const StepCert& p = prem[0];
                if (p.transition().action.mentions(z)) return bad("side condition z not in n(alpha) violated");
                if (src.has_free(z)) return bad("binder name " + z.text() + " is not fresh");
                if (!(p.source() == src.open_body(z))) return bad("premise source is not the opened body");
                if (!(p.transition().action == a)) return bad("premise action differs");
                if (!t.is_bound()) {
                    if (!(t.target == Process::res(z, p.transition().target)))
                        return bad("target is not the restricted premise target");
                    return CheckResult::pass();
                }
                if (!(t.abs == restrict_abstraction(z, p.transition().abs)))
                    return bad("abstraction is not the restricted premise abstraction");
                return CheckResult::pass();
            }
            case StepRule::SOpen: {
                if (src.kind() != Kind::Res) return bad("source is not a restriction");
                if (!c.binder()) return bad("missing binder name");
                Name z = *c.binder();
                const StepCert& p = prem[0];
                const Action& pa = p.transition().action;
                if (pa.kind != Action::Kind::FreeOut || !(pa.payload == z))
                    return bad("premise is not an output of the restricted name");
                if (pa.channel == z) return bad("side condition z != x violated");
                if (src.has_free(z)) return bad("binder name " + z.text() + " is not fresh");
                if (!(p.source() == src.open_body(z))) return bad("premise source is not the opened body");
                if (!(a == Action::bound_out(pa.channel))) return bad("action is not the bound output");
                if (!(t.abs == Abstraction::bind(z, p.transition().target)))
                    return bad("abstraction does not bind the extruded name");
                return CheckResult::pass();
            }
        }
        return bad("unknown rule");
    }

private:
    Semantics sem_;
};

}  // namespace

CheckResult check_step(const StepCert& cert, Semantics sem) { return StepChecker(sem).check(cert, "root"); }

CheckResult check_step(const StepCert& cert, const Process& p, const Transition& t, Semantics sem) {
    if (cert.empty()) return CheckResult::fail("root", "empty certificate");
    if (!(cert.source() == p)) return CheckResult::fail("root", "certificate source differs from the claim");
    if (!(cert.transition() == t)) return CheckResult::fail("root", "certificate transition differs from the claim");
    return check_step(cert, sem);
}

NameSet step_cert_names(const StepCert& c) {
    NameSet out;
    collect(c, out);
    return out;
}

Transition rename_transition(const Transition& t, Name from, Name to) {
    Action a = t.action;
    if (a.channel == from) a.channel = to;
    if ((a.kind == Action::Kind::FreeOut || a.kind == Action::Kind::FreeIn) && a.payload == from) a.payload = to;
    if (t.is_bound()) return Transition::bound(a, Abstraction{substitute(t.abs.body, to, from), t.abs.hint});
    return Transition::free(a, substitute(t.target, to, from));
}

namespace {

StepCert rename_step_rec(const StepCert& c, Name from, Name to, NameSupply& supply) {
    if (c.binder() && *c.binder() == from) return c;
    std::optional<Name> binder = c.binder();
    std::vector<StepCert> premises = c.premises();
    if (binder && *binder == to) {
        Name apart = supply.next(binder->hint());
        for (auto& p : premises) p = rename_step_rec(p, *binder, apart, supply);
        binder = apart;
    }
    for (auto& p : premises) p = rename_step_rec(p, from, to, supply);
    return StepCert(c.rule(), substitute(c.source(), to, from), rename_transition(c.transition(), from, to),
                    std::move(premises), binder);
}

}  // namespace

StepCert rename_step_cert(const StepCert& c, Name from, Name to) {
    if (from == to) return c;
    NameSupply supply(step_cert_names(c));
    supply.avoid(from);
    supply.avoid(to);
    return rename_step_rec(c, from, to, supply);
}

namespace step {

StepCert s_in(const Process& p) {
    if (p.kind() != Kind::In || p.channel().bound) throw ContractViolation("s_in: not an input prefix");
    return StepCert(StepRule::SIn, p,
                    Transition::bound(Action::bound_in(p.channel().name), Abstraction{p.body(), p.hint()}));
}

StepCert s_out(const Process& p) {
    if (p.kind() != Kind::Out || p.channel().bound || p.payload().bound)
        throw ContractViolation("s_out: not an output prefix");
    return StepCert(StepRule::SOut, p,
                    Transition::free(Action::free_out(p.channel().name, p.payload().name), p.body()));
}

StepCert e_in(const Process& p, Name y) {
    if (p.kind() != Kind::In || p.channel().bound) throw ContractViolation("e_in: not an input prefix");
    return StepCert(StepRule::EIn, p, Transition::free(Action::free_in(p.channel().name, y), p.open_body(y)));
}

StepCert s_par_l(const StepCert& left, const Process& right) {
    const Transition& t = left.transition();
    Process src = Process::par(left.source(), right);
    Transition out = t.is_bound() ? Transition::bound(t.action, Abstraction{Process::par(t.abs.body, right), t.abs.hint})
                                  : Transition::free(t.action, Process::par(t.target, right));
    return StepCert(StepRule::SParL, src, out, {left});
}

StepCert s_par_r(const Process& left, const StepCert& right) {
    const Transition& t = right.transition();
    Process src = Process::par(left, right.source());
    Transition out = t.is_bound() ? Transition::bound(t.action, Abstraction{Process::par(left, t.abs.body), t.abs.hint})
                                  : Transition::free(t.action, Process::par(left, t.target));
    return StepCert(StepRule::SParR, src, out, {right});
}

namespace {
void require(bool ok, const char* what) {
    if (!ok) throw ContractViolation(what);
}
}  // namespace

StepCert s_com_l(const StepCert& out, const StepCert& in) {
    const Action& ao = out.transition().action;
    const Action& ai = in.transition().action;
    require(ao.kind == Action::Kind::FreeOut && ai.kind == Action::Kind::BoundIn && ao.channel == ai.channel,
            "s_com_l: premises do not communicate");
    Process target = Process::par(out.transition().target, in.transition().abs.instantiate(ao.payload));
    return StepCert(StepRule::SComL, Process::par(out.source(), in.source()),
                    Transition::free(Action::tau(), target), {out, in});
}

StepCert s_com_r(const StepCert& in, const StepCert& out) {
    const Action& ao = out.transition().action;
    const Action& ai = in.transition().action;
    require(ao.kind == Action::Kind::FreeOut && ai.kind == Action::Kind::BoundIn && ao.channel == ai.channel,
            "s_com_r: premises do not communicate");
    Process target = Process::par(in.transition().abs.instantiate(ao.payload), out.transition().target);
    return StepCert(StepRule::SComR, Process::par(in.source(), out.source()),
                    Transition::free(Action::tau(), target), {in, out});
}

StepCert s_close_l(const StepCert& out, const StepCert& in) {
    const Action& ao = out.transition().action;
    const Action& ai = in.transition().action;
    require(ao.kind == Action::Kind::BoundOut && ai.kind == Action::Kind::BoundIn && ao.channel == ai.channel,
            "s_close_l: premises do not communicate");
    const Abstraction& po = out.transition().abs;
    Process target = Process::make_res(po.hint, Process::par(po.body, in.transition().abs.body));
    return StepCert(StepRule::SCloseL, Process::par(out.source(), in.source()),
                    Transition::free(Action::tau(), target), {out, in});
}

StepCert s_close_r(const StepCert& in, const StepCert& out) {
    const Action& ao = out.transition().action;
    const Action& ai = in.transition().action;
    require(ao.kind == Action::Kind::BoundOut && ai.kind == Action::Kind::BoundIn && ao.channel == ai.channel,
            "s_close_r: premises do not communicate");
    const Abstraction& po = out.transition().abs;
    Process target = Process::make_res(po.hint, Process::par(in.transition().abs.body, po.body));
    return StepCert(StepRule::SCloseR, Process::par(in.source(), out.source()),
                    Transition::free(Action::tau(), target), {in, out});
}

StepCert e_com_l(const StepCert& out, const StepCert& in) {
    const Action& ao = out.transition().action;
    const Action& ai = in.transition().action;
    require(ao.kind == Action::Kind::FreeOut && ai.kind == Action::Kind::FreeIn && ao.channel == ai.channel &&
                ao.payload == ai.payload,
            "e_com_l: premises do not communicate");
    Process target = Process::par(out.transition().target, in.transition().target);
    return StepCert(StepRule::EComL, Process::par(out.source(), in.source()),
                    Transition::free(Action::tau(), target), {out, in});
}

StepCert e_com_r(const StepCert& in, const StepCert& out) {
    const Action& ao = out.transition().action;
    const Action& ai = in.transition().action;
    require(ao.kind == Action::Kind::FreeOut && ai.kind == Action::Kind::FreeIn && ao.channel == ai.channel &&
                ao.payload == ai.payload,
            "e_com_r: premises do not communicate");
    Process target = Process::par(in.transition().target, out.transition().target);
    return StepCert(StepRule::EComR, Process::par(in.source(), out.source()),
                    Transition::free(Action::tau(), target), {in, out});
}

StepCert e_close_l(Name z, const StepCert& out, const StepCert& in) {
    const Action& ao = out.transition().action;
    const Action& ai = in.transition().action;
    require(ao.kind == Action::Kind::BoundOut && ai.kind == Action::Kind::BoundIn && ao.channel == ai.channel,
            "e_close_l: premises do not communicate");
    require(!in.source().has_free(z) && !out.source().has_free(z), "e_close_l: extruded name is not fresh");
    Process inner = Process::par(out.transition().abs.instantiate(z), in.transition().abs.instantiate(z));
    return StepCert(StepRule::ECloseL, Process::par(out.source(), in.source()),
                    Transition::free(Action::tau(), Process::res(z, inner)), {out, in}, z);
}

StepCert e_close_r(Name z, const StepCert& in, const StepCert& out) {
    const Action& ao = out.transition().action;
    const Action& ai = in.transition().action;
    require(ao.kind == Action::Kind::BoundOut && ai.kind == Action::Kind::BoundIn && ao.channel == ai.channel,
            "e_close_r: premises do not communicate");
    require(!in.source().has_free(z) && !out.source().has_free(z), "e_close_r: extruded name is not fresh");
    Process inner = Process::par(in.transition().abs.instantiate(z), out.transition().abs.instantiate(z));
    return StepCert(StepRule::ECloseR, Process::par(in.source(), out.source()),
                    Transition::free(Action::tau(), Process::res(z, inner)), {in, out}, z);
}

StepCert s_res(Name z, const StepCert& body) {
    const Transition& t = body.transition();
    require(!t.action.mentions(z), "s_res: restricted name occurs in the action");
    Process src = Process::res(z, body.source());
    Transition out = t.is_bound() ? Transition::bound(t.action, restrict_abstraction(z, t.abs))
                                  : Transition::free(t.action, Process::res(z, t.target));
    return StepCert(StepRule::SRes, src, out, {body}, z);
}

StepCert s_open(Name z, const StepCert& body) {
    const Action& a = body.transition().action;
    require(a.kind == Action::Kind::FreeOut && a.payload == z && a.channel != z, "s_open: not an output of z");
    Process src = Process::res(z, body.source());
    return StepCert(StepRule::SOpen, src,
                    Transition::bound(Action::bound_out(a.channel), Abstraction::bind(z, body.transition().target)),
                    {body}, z);
}

}  // namespace step

}  // namespace pi
