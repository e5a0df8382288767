#include "pi/lts_late.hpp"

#include <unordered_set>

namespace pi {

namespace {

class StepCollector {
public:
    void add(StepCert cert) {
        if (seen_.insert(cert.transition()).second) out_.push_back(Step{cert.transition(), std::move(cert)});
    }
    std::vector<Step> take() { return std::move(out_); }

private:
    std::unordered_set<Transition, TransitionHash> seen_;
    std::vector<Step> out_;
};

}  // namespace

std::vector<Step> late_steps(const Process& p) {
    if (!p.locally_closed()) throw ContractViolation("late_steps: process has dangling bound indices");
    StepCollector out;
    switch (p.kind()) {
        case Kind::Nil: break;
        case Kind::Out: out.add(step::s_out(p)); break;
        case Kind::In: out.add(step::s_in(p)); break;
        case Kind::Par: {
            std::vector<Step> ls = late_steps(p.left());
            std::vector<Step> rs = late_steps(p.right());
            for (const auto& s : ls) out.add(step::s_par_l(s.cert, p.right()));
            for (const auto& s : rs) out.add(step::s_par_r(p.left(), s.cert));
            for (const auto& l : ls) {
                const Action& a = l.transition.action;
                for (const auto& r : rs) {
                    const Action& b = r.transition.action;
                    if (a.channel != b.channel || a.is_tau() || b.is_tau()) continue;
                    if (a.kind == Action::Kind::FreeOut && b.kind == Action::Kind::BoundIn)
                        out.add(step::s_com_l(l.cert, r.cert));
                    else if (a.kind == Action::Kind::BoundOut && b.kind == Action::Kind::BoundIn)
                        out.add(step::s_close_l(l.cert, r.cert));
                    else if (a.kind == Action::Kind::BoundIn && b.kind == Action::Kind::FreeOut)
                        out.add(step::s_com_r(l.cert, r.cert));
                    else if (a.kind == Action::Kind::BoundIn && b.kind == Action::Kind::BoundOut)
                        out.add(step::s_close_r(l.cert, r.cert));
                }
            }
            break;
        }
        case Kind::Res: {
            Name z = fresh_name(p.free_names(), p.hint());
            for (const auto& s : late_steps(p.open_body(z))) {
                const Action& a = s.transition.action;
                if (!a.mentions(z)) {
                    out.add(step::s_res(z, s.cert));
                } else if (a.kind == Action::Kind::FreeOut && a.payload == z && a.channel != z) {
                    out.add(step::s_open(z, s.cert));
                }
            }
            break;
        }
    }
    return out.take();
}

const char* to_string(DecompositionKind k) {
    switch (k) {
        case DecompositionKind::Input: return "input";
        case DecompositionKind::FreeOutput: return "free-output";
        case DecompositionKind::BoundOutput: return "bound-output";
    }
    return "?";
}

namespace {

Process prefix_of(const TelescopeDecomposition& d) {
    if (d.kind == DecompositionKind::Input) return Process::input(d.subject, d.object, d.R);
    return Process::output(d.subject, d.object, d.R);
}

std::vector<Name> source_binders(const TelescopeDecomposition& d) {
    std::vector<Name> u;
    if (d.kind == DecompositionKind::BoundOutput) u.push_back(d.object);
    u.insert(u.end(), d.binders.begin(), d.binders.end());
    return u;
}

// nu u. (A | S) | Q == nu u. (A | (S | Q))
CongCert absorb_right(const std::vector<Name>& u, const Process& a, const Process& s, const Process& q) {
    return cong::trans(cong::extrude_left(u, Process::par(a, s), q),
                       cong::c_res_chain(u, cong::sym(cong::par_assoc(a, s, q))));
}

TelescopeDecomposition extend_left(const TelescopeDecomposition& d, const Process& q) {
    TelescopeDecomposition out = d;
    Process pre = prefix_of(d);
    out.cert_source = cong::trans(cong::c_par(d.cert_source, q), absorb_right(source_binders(d), pre, d.S, q));
    out.cert_target = cong::trans(cong::c_par(d.cert_target, q), absorb_right(d.binders, d.R, d.S, q));
    out.S = Process::par(d.S, q);
    return out;
}

TelescopeDecomposition extend_right(const TelescopeDecomposition& d, const Process& q) {
    TelescopeDecomposition out = extend_left(d, q);
    out.cert_source = cong::trans(cong::par_comm(q, d.cert_source.lhs()), out.cert_source);
    out.cert_target = cong::trans(cong::par_comm(q, d.cert_target.lhs()), out.cert_target);
    return out;
}

TelescopeDecomposition rename_decomposition(const TelescopeDecomposition& d, Name from, Name to) {
    TelescopeDecomposition out = d;
    out.R = substitute(d.R, to, from);
    out.S = substitute(d.S, to, from);
    out.cert_source = rename_cert(d.cert_source, from, to);
    out.cert_target = rename_cert(d.cert_target, from, to);
    return out;
}

TelescopeDecomposition add_binder(const TelescopeDecomposition& d, Name z, NameSupply& supply) {
    Name w = supply.next(z.hint());
    TelescopeDecomposition out = rename_decomposition(d, z, w);
    CongCert src = cong::c_res(w, out.cert_source);
    if (d.kind == DecompositionKind::BoundOutput) {
        Process inner = wrap_res(d.binders, Process::par(prefix_of(out), out.S));
        src = cong::trans(src, cong::sc_ext_res(w, d.object, inner));
    }
    out.cert_source = src;
    out.cert_target = cong::c_res(w, out.cert_target);
    out.binders.insert(out.binders.begin(), w);
    return out;
}

TelescopeDecomposition base(DecompositionKind kind, Name x, Name y, const Process& source, const Process& r,
                            const Process& result) {
    TelescopeDecomposition d;
    d.kind = kind;
    d.subject = x;
    d.object = y;
    d.R = r;
    d.S = Process::nil();
    d.cert_source = cong::sym(cong::par_unit(source));
    d.cert_target = cong::sym(cong::par_unit(result));
    return d;
}

TelescopeDecomposition decompose_rec(DecompositionKind kind, const StepCert& c, Name var, NameSupply& supply) {
    const Action& a = c.transition().action;
    switch (c.rule()) {
        case StepRule::SIn:
            if (kind != DecompositionKind::Input) break;
            {
                Process r = c.source().open_body(var);
                return base(kind, a.channel, var, c.source(), r, r);
            }
        case StepRule::SOut:
            if (kind != DecompositionKind::FreeOutput) break;
            return base(kind, a.channel, a.payload, c.source(), c.transition().target, c.transition().target);
        case StepRule::SParL:
            return extend_left(decompose_rec(kind, c.premises()[0], var, supply), c.source().right());
        case StepRule::SParR:
            return extend_right(decompose_rec(kind, c.premises()[0], var, supply), c.source().left());
        case StepRule::SRes:
            return add_binder(decompose_rec(kind, c.premises()[0], var, supply), *c.binder(), supply);
        case StepRule::SOpen: {
            if (kind != DecompositionKind::BoundOutput) break;
            Name z = *c.binder();
            TelescopeDecomposition f = decompose_rec(DecompositionKind::FreeOutput, c.premises()[0], var, supply);
            Name z0 = supply.next(z.hint());
            TelescopeDecomposition out = rename_decomposition(f, z, z0);
            out.kind = DecompositionKind::BoundOutput;
            out.object = z0;
            out.cert_source = cong::c_res(z0, out.cert_source);
            return out;
        }
        default: break;
    }
    throw ContractViolation(std::string("decomposition: unexpected rule ") + to_string(c.rule()) + " for " +
                            to_string(kind) + " transition");
}

TelescopeDecomposition decompose(DecompositionKind kind, Action::Kind expected, const Process& q, const Transition& t,
                                 const StepCert& cert, NameSupply& supply) {
    if (cert.empty() || !(cert.source() == q) || !(cert.transition() == t) || t.action.kind != expected)
        throw ContractViolation(std::string("decompose: certificate does not conclude a ") + to_string(kind) +
                                " transition of the process");
    if (auto r = check_step(cert); !r) throw ContractViolation("decompose: invalid certificate: " + r.message);
    supply.avoid(step_cert_names(cert));
    supply.avoid(q.free_names());
    Name var;
    if (kind == DecompositionKind::Input) var = supply.next(t.abs.hint);
    return decompose_rec(kind, cert, var, supply);
}

}  // namespace

Process TelescopeDecomposition::source_shape() const {
    Process inner = wrap_res(binders, Process::par(prefix_of(*this), S));
    return kind == DecompositionKind::BoundOutput ? Process::res(object, inner) : inner;
}

Process TelescopeDecomposition::target_shape() const { return wrap_res(binders, Process::par(R, S)); }

TelescopeDecomposition decompose_input(const Process& q, const Transition& t, const StepCert& cert,
                                       NameSupply& supply) {
    return decompose(DecompositionKind::Input, Action::Kind::BoundIn, q, t, cert, supply);
}

TelescopeDecomposition decompose_input(const Process& q, const Transition& t, const StepCert& cert) {
    NameSupply supply;
    return decompose_input(q, t, cert, supply);
}

TelescopeDecomposition decompose_free_output(const Process& q, const Transition& t, const StepCert& cert,
                                             NameSupply& supply) {
    return decompose(DecompositionKind::FreeOutput, Action::Kind::FreeOut, q, t, cert, supply);
}

TelescopeDecomposition decompose_free_output(const Process& q, const Transition& t, const StepCert& cert) {
    NameSupply supply;
    return decompose_free_output(q, t, cert, supply);
}

TelescopeDecomposition decompose_bound_output(const Process& q, const Transition& t, const StepCert& cert,
                                              NameSupply& supply) {
    return decompose(DecompositionKind::BoundOutput, Action::Kind::BoundOut, q, t, cert, supply);
}

TelescopeDecomposition decompose_bound_output(const Process& q, const Transition& t, const StepCert& cert) {
    NameSupply supply;
    return decompose_bound_output(q, t, cert, supply);
}

}  // namespace pi
