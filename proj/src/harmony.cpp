#include "pi/harmony.hpp"

#include "pi/frontend.hpp"

namespace pi {

namespace {

using cong::c_par;
using cong::c_res;
using cong::par_assoc;
using cong::par_comm;
using cong::refl;
using cong::sc_ext_par;
using cong::sc_ext_res;
using cong::sym;
using cong::trans;

void require(bool ok, const std::string& what) {
    if (!ok) throw ContractViolation(what);
}

const Action& act(const StepCert& c) { return c.transition().action; }
const Abstraction& abs_of(const StepCert& c) { return c.transition().abs; }

// (a | s1) | (b | s2) == (a | b) | (s1 | s2)
CongCert rearrange(const Process& a, const Process& s1, const Process& b, const Process& s2) {
    return trans(trans(cong::flatten({a, s1}, {b, s2}), cong::permute_chain({a, s1, b, s2}, {0, 2, 1, 3})),
                 sym(cong::flatten({a, b}, {s1, s2})));
}

// L | R == nu u. nu v. ((a | b) | (s1 | s2)) given L == nu u. (a | s1) and
// R == nu v. (b | s2), with u and v fresh for the other side.
CongCert merge(const CongCert& left, const std::vector<Name>& u, const Process& a, const Process& s1,
               const CongCert& right, const std::vector<Name>& v, const Process& b, const Process& s2) {
    Process lpar = Process::par(a, s1);
    Process rpar = Process::par(b, s2);
    CongCert c = trans(c_par(left, right.lhs()), cong::c_par_right(left.rhs(), right));
    c = trans(c, cong::extrude_left(u, lpar, wrap_res(v, rpar)));
    c = trans(c, cong::c_res_chain(u, cong::extrude_right(v, lpar, rpar)));
    std::vector<Name> uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    return trans(c, cong::c_res_chain(uv, rearrange(a, s1, b, s2)));
}

class TauToReduction {
public:
    explicit TauToReduction(NameSupply& supply) : supply_(supply) {}

    RedCert run(const StepCert& c) {
        const auto& pr = c.premises();
        switch (c.rule()) {
            case StepRule::SParL: return red::r_par(run(pr[0]), c.source().right());
            case StepRule::SParR: {
                const Process& l = c.source().left();
                RedCert inner = red::r_par(run(pr[0]), l);
                return red::r_struct(par_comm(l, pr[0].source()), inner, par_comm(inner.rhs().left(), l));
            }
            case StepRule::SRes: return red::r_res(*c.binder(), run(pr[0]));
            case StepRule::SComL: return com(pr[0], pr[1]);
            case StepRule::SCloseL: return close(pr[0], pr[1]);
            case StepRule::SComR: return swapped(step::s_com_l(pr[1], pr[0]));
            case StepRule::SCloseR: return swapped(step::s_close_l(pr[1], pr[0]));
            default: break;
        }
        throw ContractViolation(std::string("tau_to_reduction: unexpected rule ") + to_string(c.rule()));
    }

private:
    // Q | P -> Q' | P' from the mirrored derivation of P | Q.
    RedCert swapped(const StepCert& mirrored) {
        RedCert r = run(mirrored);
        const Process& src = mirrored.source();
        const Process& tgt = r.rhs();
        CongCert back;
        if (tgt.kind() == Kind::Res) {
            Name z = supply_.next(tgt.hint());
            Process body = tgt.open_body(z);
            back = c_res(z, par_comm(body.left(), body.right()));
        } else {
            back = par_comm(tgt.left(), tgt.right());
        }
        return red::r_struct(par_comm(src.right(), src.left()), r, back);
    }

    RedCert com(const StepCert& out, const StepCert& in) {
        TelescopeDecomposition o = decompose_free_output(out.source(), out.transition(), out, supply_);
        TelescopeDecomposition i = decompose_input(in.source(), in.transition(), in, supply_);
        Name y = act(out).payload;
        Process r2 = substitute(i.R, y, i.object);
        CongCert in_target = rename_cert(i.cert_target, i.object, y);
        Process a = Process::output(o.subject, o.object, o.R);
        Process b = Process::input(i.subject, i.object, i.R);
        CongCert src = merge(o.cert_source, o.binders, a, o.S, i.cert_source, i.binders, b, i.S);
        CongCert tgt = merge(o.cert_target, o.binders, o.R, o.S, in_target, i.binders, r2, i.S);
        std::vector<Name> uv = o.binders;
        uv.insert(uv.end(), i.binders.begin(), i.binders.end());
        RedCert inner = red::r_res_chain(uv, red::r_par(red::r_com(a, b), Process::par(o.S, i.S)));
        return red::r_struct(src, inner, sym(tgt));
    }

    RedCert close(const StepCert& out, const StepCert& in) {
        TelescopeDecomposition o = decompose_bound_output(out.source(), out.transition(), out, supply_);
        TelescopeDecomposition i = decompose_input(in.source(), in.transition(), in, supply_);
        Name z = o.object;
        Process r2 = substitute(i.R, z, i.object);
        CongCert in_target = rename_cert(i.cert_target, i.object, z);
        Process a = Process::output(o.subject, z, o.R);
        Process b = Process::input(i.subject, i.object, i.R);
        std::vector<Name> zu{z};
        zu.insert(zu.end(), o.binders.begin(), o.binders.end());
        CongCert src = merge(o.cert_source, zu, a, o.S, i.cert_source, i.binders, b, i.S);
        CongCert tgt = c_res(z, merge(o.cert_target, o.binders, o.R, o.S, in_target, i.binders, r2, i.S));
        std::vector<Name> all = zu;
        all.insert(all.end(), i.binders.begin(), i.binders.end());
        RedCert inner = red::r_res_chain(all, red::r_par(red::r_com(a, b), Process::par(o.S, i.S)));
        return red::r_struct(src, inner, sym(tgt));
    }

    NameSupply& supply_;
};

struct Moved {
    StepCert cert;
    CongCert cong;
};

// Moves a derivation across a congruence derivation, node by node. With
// forward set the derivation starts at the lhs of the congruence.
class Transfer {
public:
    Transfer(NameSupply& supply, Name n) : supply_(supply), n_(n) {}

    Moved go(bool forward, const CongCert& c, const StepCert& s) {
        require(s.source() == (forward ? c.lhs() : c.rhs()),
                "transfer: derivation " + print_process(s.source()) + " does not start at the congruence " +
                    print_process(c.lhs()) + " == " + print_process(c.rhs()) + " (" + to_string(c.rule()) + ")");
        Moved m = dispatch(forward, c, s);
        const Process& other = forward ? c.rhs() : c.lhs();
        require(m.cert.source() == other && m.cong.lhs() == at(s) && m.cong.rhs() == at(m.cert) &&
                    m.cert.transition().action == act(s),
                "transfer: internal error at " + std::string(to_string(c.rule())));
        return m;
    }

private:
    Process at(const StepCert& s) const { return s.transition().result_at(n_); }
    Process inst(const StepCert& s) const { return abs_of(s).instantiate(n_); }
    Process inst_at(const StepCert& s, Name y) const { return abs_of(s).instantiate(y); }

    [[noreturn]] void impossible(const CongCert& c, const StepCert& s) {
        throw ContractViolation(std::string("transfer: no ") + to_string(s.rule()) + " derivation matches " +
                                to_string(c.rule()));
    }

    Moved dispatch(bool forward, const CongCert& c, const StepCert& s) {
        const auto& pr = c.premises();
        switch (c.rule()) {
            case CongRule::CRef: return {s, refl(at(s))};
            case CongRule::CSym: return go(!forward, pr[0], s);
            case CongRule::CTrans:
                if (forward) {
                    Moved a = go(true, pr[0], s);
                    Moved b = go(true, pr[1], a.cert);
                    return {b.cert, trans(a.cong, b.cong)};
                } else {
                    Moved b = go(false, pr[1], s);
                    Moved a = go(false, pr[0], b.cert);
                    return {a.cert, trans(b.cong, a.cong)};
                }
            case CongRule::COut: {
                if (s.rule() != StepRule::SOut) impossible(c, s);
                const Process& other = forward ? c.rhs() : c.lhs();
                return {step::s_out(other), forward ? pr[0] : sym(pr[0])};
            }
            case CongRule::CIn: {
                if (s.rule() != StepRule::SIn) impossible(c, s);
                const Process& other = forward ? c.rhs() : c.lhs();
                CongCert body = rename_cert(pr[0], *c.binder(), n_);
                return {step::s_in(other), forward ? body : sym(body)};
            }
            case CongRule::CPar: return compat_par(forward, c, s);
            case CongRule::CRes: return compat_res(forward, c, s);
            case CongRule::ParComm: return comm(s);
            case CongRule::ParAssoc:
                if (forward) return assoc(s);
                return go(true, assoc_backwards(c.lhs()), s);
            case CongRule::ParUnit: return forward ? unit_drop(c, s) : unit_add(s);
            case CongRule::ScExtZero: impossible(c, s);
            case CongRule::ScExtRes: return ext_res(c, s);
            case CongRule::ScExtPar: return forward ? ext_par_out(c, s) : ext_par_in(c, s);
        }
        impossible(c, s);
    }

    Moved compat_par(bool forward, const CongCert& c, const StepCert& s) {
        const CongCert& prem = c.premises()[0];
        CongCert along = forward ? prem : sym(prem);
        const Process& to = along.rhs();
        const Process& r = s.source().right();
        const auto& sp = s.premises();
        switch (s.rule()) {
            case StepRule::SParL: {
                Moved m = go(forward, prem, sp[0]);
                return {step::s_par_l(m.cert, r), c_par(m.cong, r)};
            }
            case StepRule::SParR: return {step::s_par_r(to, sp[0]), c_par(along, at(sp[0]))};
            case StepRule::SComL: {
                Moved m = go(forward, prem, sp[0]);
                return {step::s_com_l(m.cert, sp[1]), c_par(m.cong, inst_at(sp[1], act(sp[0]).payload))};
            }
            case StepRule::SComR: {
                Moved m = go(forward, prem, sp[0]);
                Name y = act(sp[1]).payload;
                return {step::s_com_r(m.cert, sp[1]), c_par(rename_cert(m.cong, n_, y), sp[1].transition().target)};
            }
            case StepRule::SCloseL: {
                Moved m = go(forward, prem, sp[0]);
                return {step::s_close_l(m.cert, sp[1]), c_res(n_, c_par(m.cong, inst(sp[1])))};
            }
            case StepRule::SCloseR: {
                Moved m = go(forward, prem, sp[0]);
                return {step::s_close_r(m.cert, sp[1]), c_res(n_, c_par(m.cong, inst(sp[1])))};
            }
            default: break;
        }
        impossible(c, s);
    }

    Moved compat_res(bool forward, const CongCert& c, const StepCert& s) {
        if (s.rule() != StepRule::SRes && s.rule() != StepRule::SOpen) impossible(c, s);
        Name b = *c.binder();
        StepCert prem = rename_step_cert(s.premises()[0], *s.binder(), b);
        Moved m = go(forward, c.premises()[0], prem);
        if (s.rule() == StepRule::SRes) return {step::s_res(b, m.cert), c_res(b, m.cong)};
        return {step::s_open(b, m.cert), rename_cert(m.cong, b, n_)};
    }

    Moved comm(const StepCert& s) {
        const Process& a = s.source().left();
        const Process& b = s.source().right();
        const auto& sp = s.premises();
        switch (s.rule()) {
            case StepRule::SParL: return {step::s_par_r(b, sp[0]), par_comm(at(sp[0]), b)};
            case StepRule::SParR: return {step::s_par_l(sp[0], a), par_comm(a, at(sp[0]))};
            case StepRule::SComL:
                return {step::s_com_r(sp[1], sp[0]),
                        par_comm(sp[0].transition().target, inst_at(sp[1], act(sp[0]).payload))};
            case StepRule::SComR:
                return {step::s_com_l(sp[1], sp[0]),
                        par_comm(inst_at(sp[0], act(sp[1]).payload), sp[1].transition().target)};
            case StepRule::SCloseL:
                return {step::s_close_r(sp[1], sp[0]), c_res(n_, par_comm(inst(sp[0]), inst(sp[1])))};
            case StepRule::SCloseR:
                return {step::s_close_l(sp[1], sp[0]), c_res(n_, par_comm(inst(sp[0]), inst(sp[1])))};
            default: break;
        }
        throw ContractViolation(std::string("transfer: unexpected rule ") + to_string(s.rule()));
    }

    // (P | Q) | R == P | (Q | R) as a chain of forward commutations and
    // associations.
    static CongCert assoc_backwards(const Process& lhs) {
        const Process& p = lhs.left();
        const Process& q = lhs.right().left();
        const Process& r = lhs.right().right();
        CongCert c = par_comm(Process::par(p, q), r);
        c = trans(c, par_assoc(r, p, q));
        c = trans(c, par_comm(Process::par(r, p), q));
        c = trans(c, par_assoc(q, r, p));
        return trans(c, par_comm(Process::par(q, r), p));
    }

    // P | nu n. (X | Y) == nu n. ((P | X) | Y)
    CongCert assoc_close(const Process& p, const Process& x, const Process& y) {
        return trans(cong::extrude_right({n_}, p, Process::par(x, y)), c_res(n_, par_assoc(p, x, y)));
    }

    // nu n. (X | (Y | R)) == (nu n. (X | Y)) | R
    CongCert assoc_close_out(const Process& x, const Process& y, const Process& r) {
        return trans(c_res(n_, par_assoc(x, y, r)), sym(sc_ext_par(n_, Process::par(x, y), r)));
    }

    // Source P | (Q | R), target (P | Q) | R.
    Moved assoc(const StepCert& s) {
        const Process& p = s.source().left();
        const Process& q = s.source().right().left();
        const Process& r = s.source().right().right();
        const auto& sp = s.premises();
        switch (s.rule()) {
            case StepRule::SParL:
                return {step::s_par_l(step::s_par_l(sp[0], q), r), par_assoc(at(sp[0]), q, r)};
            case StepRule::SParR: {
                const StepCert& t = sp[0];
                const auto& tp = t.premises();
                switch (t.rule()) {
                    case StepRule::SParL:
                        return {step::s_par_l(step::s_par_r(p, tp[0]), r), par_assoc(p, at(tp[0]), r)};
                    case StepRule::SParR:
                        return {step::s_par_r(Process::par(p, q), tp[0]), par_assoc(p, q, at(tp[0]))};
                    case StepRule::SComL:
                        return {step::s_com_l(step::s_par_r(p, tp[0]), tp[1]),
                                par_assoc(p, tp[0].transition().target, inst_at(tp[1], act(tp[0]).payload))};
                    case StepRule::SComR:
                        return {step::s_com_r(step::s_par_r(p, tp[0]), tp[1]),
                                par_assoc(p, inst_at(tp[0], act(tp[1]).payload), tp[1].transition().target)};
                    case StepRule::SCloseL:
                        return {step::s_close_l(step::s_par_r(p, tp[0]), tp[1]),
                                assoc_close(p, inst(tp[0]), inst(tp[1]))};
                    case StepRule::SCloseR:
                        return {step::s_close_r(step::s_par_r(p, tp[0]), tp[1]),
                                assoc_close(p, inst(tp[0]), inst(tp[1]))};
                    default: break;
                }
                break;
            }
            case StepRule::SComL: {
                const StepCert& o = sp[0];
                const StepCert& i = sp[1];
                Name y = act(o).payload;
                const StepCert& t = i.premises()[0];
                if (i.rule() == StepRule::SParL)
                    return {step::s_par_l(step::s_com_l(o, t), r),
                            par_assoc(o.transition().target, inst_at(t, y), r)};
                if (i.rule() == StepRule::SParR)
                    return {step::s_com_l(step::s_par_l(o, q), t),
                            par_assoc(o.transition().target, q, inst_at(t, y))};
                break;
            }
            case StepRule::SComR: {
                const StepCert& i = sp[0];
                const StepCert& o = sp[1];
                const StepCert& t = o.premises()[0];
                Name y = act(o).payload;
                if (o.rule() == StepRule::SParL)
                    return {step::s_par_l(step::s_com_r(i, t), r),
                            par_assoc(inst_at(i, y), t.transition().target, r)};
                if (o.rule() == StepRule::SParR)
                    return {step::s_com_r(step::s_par_l(i, q), t),
                            par_assoc(inst_at(i, y), q, t.transition().target)};
                break;
            }
            case StepRule::SCloseL:
            case StepRule::SCloseR: {
                bool left = s.rule() == StepRule::SCloseL;
                const StepCert& mine = sp[0];
                const StepCert& split = sp[1];
                const StepCert& t = split.premises()[0];
                auto close = [&](const StepCert& a, const StepCert& b) {
                    return left ? step::s_close_l(a, b) : step::s_close_r(a, b);
                };
                if (split.rule() == StepRule::SParL)
                    return {step::s_par_l(close(mine, t), r), assoc_close_out(inst(mine), inst(t), r)};
                if (split.rule() == StepRule::SParR)
                    return {close(step::s_par_l(mine, q), t), c_res(n_, par_assoc(inst(mine), q, inst(t)))};
                break;
            }
            default: break;
        }
        throw ContractViolation(std::string("transfer: unexpected rule ") + to_string(s.rule()) + " under Par-Assoc");
    }

    Moved unit_drop(const CongCert& c, const StepCert& s) {
        if (s.rule() != StepRule::SParL) impossible(c, s);
        const StepCert& t = s.premises()[0];
        return {t, cong::par_unit(at(t))};
    }

    Moved unit_add(const StepCert& s) {
        return {step::s_par_l(s, Process::nil()), sym(cong::par_unit(at(s)))};
    }

    // Source nu x. nu y. P, target nu y. nu x. P.
    Moved ext_res(const CongCert& c, const StepCert& s) {
        const StepCert& inner = s.premises()[0];
        if (inner.rule() != StepRule::SRes && inner.rule() != StepRule::SOpen) impossible(c, s);
        Name a = *s.binder();
        Name b = *inner.binder();
        const StepCert& core = inner.premises()[0];
        if (s.rule() == StepRule::SRes && inner.rule() == StepRule::SRes)
            return {step::s_res(b, step::s_res(a, core)), sc_ext_res(a, b, at(core))};
        if (s.rule() == StepRule::SRes)
            return {step::s_open(b, step::s_res(a, core)), refl(at(s))};
        if (inner.rule() == StepRule::SRes)
            return {step::s_res(b, step::s_open(a, core)), refl(at(s))};
        impossible(c, s);
    }

    // Renames the binder of an SRes/SOpen node apart and returns its premise.
    StepCert open_apart(const StepCert& s, Name fresh) {
        if (s.rule() != StepRule::SRes && s.rule() != StepRule::SOpen)
            throw ContractViolation(std::string("transfer: expected a restriction rule, got ") + to_string(s.rule()));
        return rename_step_cert(s.premises()[0], *s.binder(), fresh);
    }

    // nu n. ((nu a. X) | Y) == nu a. nu n. (X | Y)
    CongCert close_extrude(Name a, const Process& x, const Process& y) {
        return trans(c_res(n_, sc_ext_par(a, x, y)), sc_ext_res(n_, a, Process::par(x, y)));
    }

    // Source (nu x. P) | Q, target nu x. (P | Q).
    Moved ext_par_out(const CongCert& c, const StepCert& s) {
        const Process& q = s.source().right();
        Name a = supply_.next(s.source().left().hint());
        Process pa = s.source().left().open_body(a);
        const auto& sp = s.premises();
        switch (s.rule()) {
            case StepRule::SParL: {
                StepCert t = open_apart(sp[0], a);
                if (sp[0].rule() == StepRule::SRes)
                    return {step::s_res(a, step::s_par_l(t, q)), sc_ext_par(a, at(t), q)};
                return {step::s_open(a, step::s_par_l(t, q)), refl(at(s))};
            }
            case StepRule::SParR:
                return {step::s_res(a, step::s_par_r(pa, sp[0])), sc_ext_par(a, pa, at(sp[0]))};
            case StepRule::SComL: {
                StepCert o = open_apart(sp[0], a);
                Process in_at = inst_at(sp[1], act(o).payload);
                return {step::s_res(a, step::s_com_l(o, sp[1])), sc_ext_par(a, o.transition().target, in_at)};
            }
            case StepRule::SComR: {
                StepCert i = open_apart(sp[0], a);
                Name y = act(sp[1]).payload;
                return {step::s_res(a, step::s_com_r(i, sp[1])),
                        sc_ext_par(a, inst_at(i, y), sp[1].transition().target)};
            }
            case StepRule::SCloseL: {
                StepCert o = open_apart(sp[0], a);
                if (sp[0].rule() == StepRule::SOpen) return {step::s_res(a, step::s_com_l(o, sp[1])), refl(at(s))};
                return {step::s_res(a, step::s_close_l(o, sp[1])), close_extrude(a, inst(o), inst(sp[1]))};
            }
            case StepRule::SCloseR: {
                StepCert i = open_apart(sp[0], a);
                return {step::s_res(a, step::s_close_r(i, sp[1])), close_extrude(a, inst(i), inst(sp[1]))};
            }
            default: break;
        }
        impossible(c, s);
    }

    // Source nu x. (P | Q), target (nu x. P) | Q.
    Moved ext_par_in(const CongCert& c, const StepCert& s) {
        const Process& target = c.lhs();
        const Process& x = target.left();
        const Process& q = target.right();
        Name a = supply_.next(x.hint());
        StepCert body = open_apart(s, a);
        const auto& bp = body.premises();
        if (s.rule() == StepRule::SOpen) {
            if (body.rule() != StepRule::SParL) impossible(c, s);
            return {step::s_par_l(step::s_open(a, bp[0]), q), refl(at(s))};
        }
        Process pa = body.source().left();
        switch (body.rule()) {
            case StepRule::SParL:
                return {step::s_par_l(step::s_res(a, bp[0]), q), sym(sc_ext_par(a, at(bp[0]), q))};
            case StepRule::SParR:
                return {step::s_par_r(x, bp[0]), sym(sc_ext_par(a, pa, at(bp[0])))};
            case StepRule::SComL: {
                const StepCert& o = bp[0];
                Name y = act(o).payload;
                if (y == a) return {step::s_close_l(step::s_open(a, o), bp[1]), refl(at(s))};
                return {step::s_com_l(step::s_res(a, o), bp[1]),
                        sym(sc_ext_par(a, o.transition().target, inst_at(bp[1], y)))};
            }
            case StepRule::SComR: {
                Name y = act(bp[1]).payload;
                return {step::s_com_r(step::s_res(a, bp[0]), bp[1]),
                        sym(sc_ext_par(a, inst_at(bp[0], y), bp[1].transition().target))};
            }
            case StepRule::SCloseL:
                return {step::s_close_l(step::s_res(a, bp[0]), bp[1]),
                        sym(close_extrude(a, inst(bp[0]), inst(bp[1])))};
            case StepRule::SCloseR:
                return {step::s_close_r(step::s_res(a, bp[0]), bp[1]),
                        sym(close_extrude(a, inst(bp[0]), inst(bp[1])))};
            default: break;
        }
        impossible(c, s);
    }

    NameSupply& supply_;
    Name n_;
};

Transferred transfer_impl(const Process& p, const Process& q, const CongCert& cong, const Transition& t,
                          const StepCert& cert, bool forward, const char* who) {
    const Process& from = forward ? p : q;
    const Process& to = forward ? q : p;
    require(!cong.empty() && !cert.empty(), std::string(who) + ": empty certificate");
    if (auto r = check_cong(cong, p, q); !r) throw ContractViolation(std::string(who) + ": invalid congruence: " + r.message);
    if (auto r = check_step(cert, from, t); !r)
        throw ContractViolation(std::string(who) + ": invalid transition certificate: " + r.message);
    NameSupply supply;
    supply.avoid(cert_names(cong));
    supply.avoid(step_cert_names(cert));
    supply.avoid(p.free_names());
    supply.avoid(q.free_names());
    Name n = supply.next(t.is_bound() ? std::string_view(t.abs.hint) : std::string_view("n"));
    Moved m = Transfer(supply, n).go(forward, cong, cert);
    require(m.cert.source() == to, std::string(who) + ": internal error");
    return Transferred{m.cert.transition(), m.cert, m.cong, n};
}

}  // namespace

RedCert tau_to_reduction(const Process& p, const Transition& t, const StepCert& cert) {
    require(t.action.is_tau(), "tau_to_reduction: not a silent transition");
    if (auto r = check_step(cert, p, t); !r)
        throw ContractViolation("tau_to_reduction: invalid certificate: " + r.message);
    NameSupply supply;
    supply.avoid(step_cert_names(cert));
    RedCert out = TauToReduction(supply).run(cert);
    require(out.lhs() == p && out.rhs() == t.target, "tau_to_reduction: internal error");
    return out;
}

TauWitness reduction_to_tau(const Process& p, const Process& q, const RedCert& cert) {
    NameSupply supply;
    RedexDecomposition d = decompose_reduction(p, q, cert, supply);
    Process out = Process::output(d.subject, d.payload, d.R1);
    Process in = Process::input(d.subject, d.var, d.R2);
    StepCert s = step::s_par_l(step::s_com_l(step::s_out(out), step::s_in(in)), d.S);
    for (auto it = d.binders.rbegin(); it != d.binders.rend(); ++it) s = step::s_res(*it, s);
    Transferred moved = transfer(s.source(), p, sym(d.cert_source), s.transition(), s);
    return TauWitness{moved.transition.target, moved.cert, trans(d.cert_target, moved.cong)};
}

Transferred transfer(const Process& p, const Process& q, const CongCert& cong, const Transition& t,
                     const StepCert& cert) {
    return transfer_impl(p, q, cong, t, cert, true, "transfer");
}

Transferred part_i(const Process& p, const Process& r, const CongCert& cong, const Transition& t,
                   const StepCert& cert) {
    Transferred out = transfer_impl(p, r, cong, t, cert, false, "part_i");
    out.cong = sym(out.cong);
    return out;
}

}  // namespace pi
