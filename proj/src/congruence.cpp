#include "pi/congruence.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace pi {

const char* to_string(CongRule r) {
    switch (r) {
        case CongRule::ParAssoc: return "ParAssoc";
        case CongRule::ParUnit: return "ParUnit";
        case CongRule::ParComm: return "ParComm";
        case CongRule::ScExtZero: return "ScExtZero";
        case CongRule::ScExtPar: return "ScExtPar";
        case CongRule::ScExtRes: return "ScExtRes";
        case CongRule::CIn: return "CIn";
        case CongRule::COut: return "COut";
        case CongRule::CPar: return "CPar";
        case CongRule::CRes: return "CRes";
        case CongRule::CRef: return "CRef";
        case CongRule::CSym: return "CSym";
        case CongRule::CTrans: return "CTrans";
    }
    return "?";
}

std::optional<CongRule> cong_rule_from_string(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(CongRule::CTrans); ++i) {
        auto r = static_cast<CongRule>(i);
        if (s == to_string(r)) return r;
    }
    return std::nullopt;
}

CongCert::CongCert(CongRule rule, Process lhs, Process rhs, std::vector<CongCert> premises,
                   std::optional<Name> binder)
    : node_(std::make_shared<const CongNode>(
          CongNode{rule, std::move(lhs), std::move(rhs), std::move(premises), binder})) {}

CongRule CongCert::rule() const { return node_->rule; }
const Process& CongCert::lhs() const { return node_->lhs; }
const Process& CongCert::rhs() const { return node_->rhs; }
const std::vector<CongCert>& CongCert::premises() const { return node_->premises; }
const std::optional<Name>& CongCert::binder() const { return node_->binder; }

std::size_t CongCert::node_count() const {
    std::size_t n = 1;
    for (const auto& p : premises()) n += p.node_count();
    return n;
}

// ---------------------------------------------------------------------------
// Checker

namespace {

class CongChecker {
public:
    CheckResult check(const CongCert& c, const std::string& path) {
        if (c.empty()) return CheckResult::fail(path, "empty certificate node");
        const Process& l = c.lhs();
        const Process& r = c.rhs();
        if (!l.locally_closed() || !r.locally_closed())
            return CheckResult::fail(path, "conclusion contains a dangling bound index");
        const auto& prem = c.premises();
        auto arity = [&](std::size_t n) -> CheckResult {
            if (prem.size() != n)
                return CheckResult::fail(path, std::string(to_string(c.rule())) + " expects " +
                                                   std::to_string(n) + " premise(s), got " +
                                                   std::to_string(prem.size()));
            return CheckResult::pass();
        };
        for (std::size_t i = 0; i < prem.size(); ++i) {
            auto sub = check(prem[i], path + "/premises[" + std::to_string(i) + "]");
            if (!sub) return sub;
        }
        auto bad = [&](const std::string& why) {
            return CheckResult::fail(path, std::string(to_string(c.rule())) + ": " + why);
        };

        switch (c.rule()) {
            case CongRule::ParAssoc: {
                if (auto a = arity(0); !a) return a;
                if (l.kind() != Kind::Par || l.right().kind() != Kind::Par)
                    return bad("left side is not P | (Q | R)");
                if (r.kind() != Kind::Par || r.left().kind() != Kind::Par)
                    return bad("right side is not (P | Q) | R");
                if (!(l.left() == r.left().left() && l.right().left() == r.left().right() &&
                      l.right().right() == r.right()))
                    return bad("components differ");
                return CheckResult::pass();
            }
            case CongRule::ParUnit: {
                if (auto a = arity(0); !a) return a;
                if (l.kind() != Kind::Par || !l.right().is_nil()) return bad("left side is not P | 0");
                if (!(l.left() == r)) return bad("right side differs from P");
                return CheckResult::pass();
            }
            case CongRule::ParComm: {
                if (auto a = arity(0); !a) return a;
                if (l.kind() != Kind::Par || r.kind() != Kind::Par) return bad("both sides must be parallel");
                if (!(l.left() == r.right() && l.right() == r.left())) return bad("components are not swapped");
                return CheckResult::pass();
            }
            case CongRule::ScExtZero: {
                if (auto a = arity(0); !a) return a;
                if (l.kind() != Kind::Res || !l.body().is_nil() || !r.is_nil())
                    return bad("expected nu x. 0 == 0");
                return CheckResult::pass();
            }
            case CongRule::ScExtPar: {
                if (auto a = arity(0); !a) return a;
                if (l.kind() != Kind::Par || l.left().kind() != Kind::Res)
                    return bad("left side is not (nu x. P) | Q");
                if (r.kind() != Kind::Res || r.body().kind() != Kind::Par)
                    return bad("right side is not nu x. (P | Q)");
                if (!(l.left().body() == r.body().left())) return bad("restricted bodies differ");
                const Process& q_inside = r.body().right();
                if (!(q_inside == l.right())) {
                    if (!q_inside.locally_closed())
                        return bad("side condition x not in fn(Q) violated");
                    return bad("parallel components differ");
                }
                return CheckResult::pass();
            }
            case CongRule::ScExtRes: {
                if (auto a = arity(0); !a) return a;
                if (l.kind() != Kind::Res || l.body().kind() != Kind::Res || r.kind() != Kind::Res ||
                    r.body().kind() != Kind::Res)
                    return bad("expected nu x. nu y. P == nu y. nu x. P");
                NameSupply s(NameSet::unite(l.free_names(), r.free_names()));
                Name a = s.next("a");
                Name b = s.next("b");
                Process lo = l.open_body(a).open_body(b);
                Process ro = r.open_body(b).open_body(a);
                if (!(lo == ro)) return bad("binders are not swapped");
                return CheckResult::pass();
            }
            case CongRule::CIn:
            case CongRule::CRes: {
                if (auto a = arity(1); !a) return a;
                Kind k = c.rule() == CongRule::CIn ? Kind::In : Kind::Res;
                if (l.kind() != k || r.kind() != k) return bad("sides have the wrong shape");
                if (k == Kind::In && !(l.channel() == r.channel())) return bad("input channels differ");
                if (!c.binder()) return bad("missing binder name");
                Name n = *c.binder();
                if (l.has_free(n) || r.has_free(n)) return bad("binder name " + n.text() + " is not fresh");
                if (!(prem[0].lhs() == l.open_body(n)) || !(prem[0].rhs() == r.open_body(n)))
                    return bad("premise does not relate the opened bodies");
                return CheckResult::pass();
            }
            case CongRule::COut: {
                if (auto a = arity(1); !a) return a;
                if (l.kind() != Kind::Out || r.kind() != Kind::Out) return bad("sides are not outputs");
                if (!(l.channel() == r.channel()) || !(l.payload() == r.payload()))
                    return bad("output prefixes differ");
                if (!(prem[0].lhs() == l.body()) || !(prem[0].rhs() == r.body()))
                    return bad("premise does not relate the continuations");
                return CheckResult::pass();
            }
            case CongRule::CPar: {
                if (auto a = arity(1); !a) return a;
                if (l.kind() != Kind::Par || r.kind() != Kind::Par) return bad("sides are not parallel");
                if (!(l.right() == r.right())) return bad("right components differ");
                if (!(prem[0].lhs() == l.left()) || !(prem[0].rhs() == r.left()))
                    return bad("premise does not relate the left components");
                return CheckResult::pass();
            }
            case CongRule::CRef: {
                if (auto a = arity(0); !a) return a;
                if (!(l == r)) return bad("sides are not alpha-equivalent");
                return CheckResult::pass();
            }
            case CongRule::CSym: {
                if (auto a = arity(1); !a) return a;
                if (!(prem[0].lhs() == r) || !(prem[0].rhs() == l)) return bad("premise is not the mirror image");
                return CheckResult::pass();
            }
            case CongRule::CTrans: {
                if (auto a = arity(2); !a) return a;
                if (!(prem[0].lhs() == l)) return bad("first premise starts elsewhere");
                if (!(prem[0].rhs() == prem[1].lhs())) return bad("premises do not meet");
                if (!(prem[1].rhs() == r)) return bad("second premise ends elsewhere");
                return CheckResult::pass();
            }
        }
        return bad("unknown rule");
    }
};

}  // namespace

CheckResult check_cong(const CongCert& cert) { return CongChecker{}.check(cert, "root"); }

CheckResult check_cong(const CongCert& cert, const Process& p, const Process& q) {
    if (cert.empty()) return CheckResult::fail("root", "empty certificate");
    if (!(cert.lhs() == p)) return CheckResult::fail("root", "conclusion left side differs from the claim");
    if (!(cert.rhs() == q)) return CheckResult::fail("root", "conclusion right side differs from the claim");
    return check_cong(cert);
}

// ---------------------------------------------------------------------------
// Builders

namespace cong {

namespace {
bool is_refl(const CongCert& c) { return c.rule() == CongRule::CRef; }
}  // namespace

CongCert refl(const Process& p) { return CongCert(CongRule::CRef, p, p); }

CongCert sym(const CongCert& c) {
    if (is_refl(c)) return c;
    if (c.rule() == CongRule::CSym) return c.premises()[0];
    return CongCert(CongRule::CSym, c.rhs(), c.lhs(), {c});
}

CongCert trans(const CongCert& first, const CongCert& second) {
    if (!(first.rhs() == second.lhs())) throw ContractViolation("cong::trans: certificates do not meet");
    if (is_refl(first)) return second;
    if (is_refl(second)) return first;
    return CongCert(CongRule::CTrans, first.lhs(), second.rhs(), {first, second});
}

CongCert par_assoc(const Process& p, const Process& q, const Process& r) {
    return CongCert(CongRule::ParAssoc, Process::par(p, Process::par(q, r)), Process::par(Process::par(p, q), r));
}

CongCert par_unit(const Process& p) { return CongCert(CongRule::ParUnit, Process::par(p, Process::nil()), p); }

CongCert par_comm(const Process& p, const Process& q) {
    return CongCert(CongRule::ParComm, Process::par(p, q), Process::par(q, p));
}

CongCert sc_ext_zero(Name x) {
    return CongCert(CongRule::ScExtZero, Process::make_res(x.hint(), Process::nil()), Process::nil());
}

CongCert sc_ext_par(Name x, const Process& p, const Process& q) {
    if (q.has_free(x)) throw ContractViolation("cong::sc_ext_par: restricted name is free in Q");
    return CongCert(CongRule::ScExtPar, Process::par(Process::res(x, p), q), Process::res(x, Process::par(p, q)));
}

CongCert sc_ext_res(Name x, Name y, const Process& p) {
    return CongCert(CongRule::ScExtRes, Process::res(x, Process::res(y, p)), Process::res(y, Process::res(x, p)));
}

CongCert c_in(Name channel, Name var, const CongCert& body) {
    if (channel == var) throw ContractViolation("cong::c_in: binder equals channel");
    Process l = Process::input(channel, var, body.lhs());
    Process r = Process::input(channel, var, body.rhs());
    if (is_refl(body)) return refl(l);
    return CongCert(CongRule::CIn, l, r, {body}, var);
}

CongCert c_out(Name channel, Name payload, const CongCert& cont) {
    Process l = Process::output(channel, payload, cont.lhs());
    Process r = Process::output(channel, payload, cont.rhs());
    if (is_refl(cont)) return refl(l);
    return CongCert(CongRule::COut, l, r, {cont});
}

CongCert c_par(const CongCert& left, const Process& right) {
    Process l = Process::par(left.lhs(), right);
    if (is_refl(left)) return refl(l);
    return CongCert(CongRule::CPar, l, Process::par(left.rhs(), right), {left});
}

CongCert c_par_right(const Process& left, const CongCert& right) {
    if (is_refl(right)) return refl(Process::par(left, right.lhs()));
    return trans(par_comm(left, right.lhs()), trans(c_par(right, left), par_comm(right.rhs(), left)));
}

CongCert c_res(Name x, const CongCert& body) {
    Process l = Process::res(x, body.lhs());
    if (is_refl(body)) return refl(l);
    return CongCert(CongRule::CRes, l, Process::res(x, body.rhs()), {body}, x);
}

CongCert c_res_chain(const std::vector<Name>& names, const CongCert& body) {
    CongCert acc = body;
    for (auto it = names.rbegin(); it != names.rend(); ++it) acc = c_res(*it, acc);
    return acc;
}

CongCert extrude_left(const std::vector<Name>& names, const Process& a, const Process& q) {
    if (names.empty()) return refl(Process::par(a, q));
    std::vector<Name> rest(names.begin() + 1, names.end());
    CongCert step = sc_ext_par(names.front(), wrap_res(rest, a), q);
    return trans(step, c_res(names.front(), extrude_left(rest, a, q)));
}

CongCert extrude_right(const std::vector<Name>& names, const Process& p, const Process& b) {
    if (names.empty()) return refl(Process::par(p, b));
    CongCert c1 = par_comm(p, wrap_res(names, b));
    CongCert c2 = extrude_left(names, b, p);
    CongCert c3 = c_res_chain(names, par_comm(b, p));
    return trans(c1, trans(c2, c3));
}

CongCert drop_vacuous(Name x, const Process& p) {
    if (p.has_free(x)) throw ContractViolation("cong::drop_vacuous: restriction is not vacuous");
    if (p.is_nil()) return sc_ext_zero(x);
    Process nil = Process::nil();
    CongCert c1 = c_res(x, sym(par_unit(p)));
    CongCert c2 = c_res(x, par_comm(p, nil));
    CongCert c3 = sym(sc_ext_par(x, nil, p));
    CongCert c4 = c_par(sc_ext_zero(x), p);
    CongCert c5 = par_comm(nil, p);
    CongCert c6 = par_unit(p);
    return trans(c1, trans(c2, trans(c3, trans(c4, trans(c5, c6)))));
}

CongCert flatten(const std::vector<Process>& a, const std::vector<Process>& b) {
    if (b.empty() || a.empty()) throw ContractViolation("cong::flatten: empty chain");
    if (b.size() == 1) return refl(Process::par(par_chain(a), b.front()));
    std::vector<Process> init(b.begin(), b.end() - 1);
    const Process& last = b.back();
    return trans(par_assoc(par_chain(a), par_chain(init), last), c_par(flatten(a, init), last));
}

namespace {

// Swap positions i and i+1 of a left-associated chain.
CongCert swap_adjacent(const std::vector<Process>& items, std::size_t i) {
    CongCert sub;
    if (i == 0) {
        sub = par_comm(items[0], items[1]);
    } else {
        std::vector<Process> prefix(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(i));
        Process pre = par_chain(prefix);
        sub = trans(sym(par_assoc(pre, items[i], items[i + 1])),
                    trans(c_par_right(pre, par_comm(items[i], items[i + 1])), par_assoc(pre, items[i + 1], items[i])));
    }
    for (std::size_t k = i + 2; k < items.size(); ++k) sub = c_par(sub, items[k]);
    return sub;
}

}  // namespace

CongCert permute_chain(const std::vector<Process>& items, const std::vector<std::size_t>& perm) {
    std::vector<Process> cur = items;
    std::vector<std::size_t> labels(items.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i;
    CongCert acc = refl(par_chain(items));
    for (std::size_t i = 0; i < perm.size(); ++i) {
        std::size_t j = static_cast<std::size_t>(std::find(labels.begin(), labels.end(), perm[i]) - labels.begin());
        while (j > i) {
            acc = trans(acc, swap_adjacent(cur, j - 1));
            std::swap(cur[j - 1], cur[j]);
            std::swap(labels[j - 1], labels[j]);
            --j;
        }
    }
    return acc;
}

CongCert permute_telescope(const std::vector<Name>& names, const std::vector<std::size_t>& perm,
                           const Process& body) {
    std::vector<Name> cur = names;
    std::vector<std::size_t> labels(names.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i;
    CongCert acc = refl(wrap_res(names, body));
    for (std::size_t i = 0; i < perm.size(); ++i) {
        std::size_t j = static_cast<std::size_t>(std::find(labels.begin(), labels.end(), perm[i]) - labels.begin());
        while (j > i) {
            std::vector<Name> outer(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(j - 1));
            std::vector<Name> inner(cur.begin() + static_cast<std::ptrdiff_t>(j + 1), cur.end());
            CongCert swap = sc_ext_res(cur[j - 1], cur[j], wrap_res(inner, body));
            acc = trans(acc, c_res_chain(outer, swap));
            std::swap(cur[j - 1], cur[j]);
            std::swap(labels[j - 1], labels[j]);
            --j;
        }
    }
    return acc;
}

}  // namespace cong

// ---------------------------------------------------------------------------
// Renaming

namespace {

void collect_names(const CongCert& c, NameSet& out) {
    out.insert_all(c.lhs().free_names());
    out.insert_all(c.rhs().free_names());
    if (c.binder()) out.insert(*c.binder());
    for (const auto& p : c.premises()) collect_names(p, out);
}

CongCert rename_rec(const CongCert& c, Name from, Name to, NameSupply& supply) {
    if (c.binder() && *c.binder() == from) return c;
    std::optional<Name> binder = c.binder();
    std::vector<CongCert> premises = c.premises();
    if (binder && *binder == to) {
        Name apart = supply.next(binder->hint());
        for (auto& p : premises) p = rename_rec(p, *binder, apart, supply);
        binder = apart;
    }
    for (auto& p : premises) p = rename_rec(p, from, to, supply);
    return CongCert(c.rule(), substitute(c.lhs(), to, from), substitute(c.rhs(), to, from), std::move(premises),
                    binder);
}

}  // namespace

NameSet cert_names(const CongCert& c) {
    NameSet out;
    collect_names(c, out);
    return out;
}

CongCert rename_cert(const CongCert& c, Name from, Name to) {
    if (from == to) return c;
    NameSupply supply(cert_names(c));
    supply.avoid(from);
    supply.avoid(to);
    return rename_rec(c, from, to, supply);
}

// ---------------------------------------------------------------------------
// Canonical forms

Process Thread::process() const {
    Process cont = continuation.embed();
    return is_input ? Process::input(channel, object, cont) : Process::output(channel, object, cont);
}

Process CanonicalForm::thread_process(std::size_t i) const { return threads.at(i).process(); }

Process CanonicalForm::embed() const {
    std::vector<Process> parts;
    parts.reserve(threads.size());
    for (const auto& t : threads) parts.push_back(t.process());
    return wrap_res(telescope, par_chain(parts));
}

namespace {

std::vector<Process> thread_processes(const CanonicalForm& f) {
    std::vector<Process> out;
    out.reserve(f.threads.size());
    for (const auto& t : f.threads) out.push_back(t.process());
    return out;
}

CongCert push_vacuous(Name w, const std::vector<Name>& tel, std::size_t from, const Process& core) {
    if (from == tel.size()) return cong::drop_vacuous(w, core);
    std::vector<Name> rest(tel.begin() + static_cast<std::ptrdiff_t>(from + 1), tel.end());
    CongCert swap = cong::sc_ext_res(w, tel[from], wrap_res(rest, core));
    return cong::trans(swap, cong::c_res(tel[from], push_vacuous(w, tel, from + 1, core)));
}

}  // namespace

NormalizeResult normalize_with(const Process& p, NameSupply& supply) {
    if (!p.locally_closed()) throw ContractViolation("normalize: process has dangling bound indices");
    switch (p.kind()) {
        case Kind::Nil: return {CanonicalForm{}, cong::refl(p)};
        case Kind::Out: {
            Name x = p.channel().name;
            Name y = p.payload().name;
            NormalizeResult cont = normalize_with(p.body(), supply);
            CanonicalForm f;
            f.threads.push_back(Thread{false, x, y, std::move(cont.form)});
            return {std::move(f), cong::c_out(x, y, cont.cert)};
        }
        case Kind::In: {
            Name x = p.channel().name;
            Name v = supply.next(p.hint());
            NormalizeResult cont = normalize_with(p.open_body(v), supply);
            CanonicalForm f;
            f.threads.push_back(Thread{true, x, v, std::move(cont.form)});
            return {std::move(f), cong::c_in(x, v, cont.cert)};
        }
        case Kind::Par: {
            NormalizeResult a = normalize_with(p.left(), supply);
            NormalizeResult b = normalize_with(p.right(), supply);
            Process ea = a.form.embed();
            Process eb = b.form.embed();
            CongCert c0 = cong::trans(cong::c_par(a.cert, p.right()), cong::c_par_right(ea, b.cert));
            if (a.form.empty()) {
                CongCert c = cong::trans(c0, cong::trans(cong::par_comm(ea, eb), cong::par_unit(eb)));
                return {std::move(b.form), c};
            }
            if (b.form.empty()) return {std::move(a.form), cong::trans(c0, cong::par_unit(ea))};
            std::vector<Process> ta = thread_processes(a.form);
            std::vector<Process> tb = thread_processes(b.form);
            Process ca = par_chain(ta);
            Process cb = par_chain(tb);
            CongCert c1 = cong::extrude_left(a.form.telescope, ca, eb);
            CongCert c2 = cong::c_res_chain(a.form.telescope, cong::extrude_right(b.form.telescope, ca, cb));
            CanonicalForm f;
            f.telescope = a.form.telescope;
            f.telescope.insert(f.telescope.end(), b.form.telescope.begin(), b.form.telescope.end());
            CongCert c3 = cong::c_res_chain(f.telescope, cong::flatten(ta, tb));
            f.threads = std::move(a.form.threads);
            for (auto& t : b.form.threads) f.threads.push_back(std::move(t));
            return {std::move(f), cong::trans(c0, cong::trans(c1, cong::trans(c2, c3)))};
        }
        case Kind::Res: {
            Name w = supply.next(p.hint());
            NormalizeResult inner = normalize_with(p.open_body(w), supply);
            CongCert c = cong::c_res(w, inner.cert);
            Process e = inner.form.embed();
            if (e.has_free(w)) {
                inner.form.telescope.insert(inner.form.telescope.begin(), w);
                return {std::move(inner.form), c};
            }
            if (inner.form.empty()) return {CanonicalForm{}, cong::trans(c, cong::sc_ext_zero(w))};
            Process core = par_chain(thread_processes(inner.form));
            CongCert pushed = cong::trans(c, push_vacuous(w, inner.form.telescope, 0, core));
            return {std::move(inner.form), pushed};
        }
    }
    throw ContractViolation("normalize: unknown process kind");
}

CanonicalForm normalize(const Process& p) {
    NameSupply supply(p.free_names());
    return normalize_with(p, supply).form;
}

CongCert normalize_cert(const Process& p) {
    NameSupply supply(p.free_names());
    return normalize_with(p, supply).cert;
}

// ---------------------------------------------------------------------------
// Matching

namespace {

// Backtracking search for a bijection between the binders of two canonical
// forms under which their thread multisets coincide. Names produced by one
// normalization run are unique, so the renaming can live in flat maps.
class FormMatcher {
public:
    bool match(const CanonicalForm& a, const CanonicalForm& b) {
        return match_form(a, b, [] { return true; });
    }

    const std::unordered_map<Name, Name>& mapping() const { return fwd_; }

private:
    using Cont = std::function<bool()>;

    std::unordered_map<Name, Name> fwd_;
    std::unordered_set<Name> image_;
    std::unordered_map<Name, std::uint32_t> scope_a_;
    std::unordered_map<Name, std::uint32_t> scope_b_;
    std::vector<Name> trail_;
    std::uint32_t next_scope_ = 1;

    void bind(Name a, Name b) {
        fwd_.emplace(a, b);
        image_.insert(b);
        trail_.push_back(a);
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            Name a = trail_.back();
            trail_.pop_back();
            image_.erase(fwd_.at(a));
            fwd_.erase(a);
        }
    }

    bool name_match(Name a, Name b) {
        auto sa = scope_a_.find(a);
        if (sa == scope_a_.end()) return a == b && !scope_b_.count(b);
        auto f = fwd_.find(a);
        if (f != fwd_.end()) return f->second == b;
        auto sb = scope_b_.find(b);
        if (sb == scope_b_.end() || sb->second != sa->second || image_.count(b)) return false;
        bind(a, b);
        return true;
    }

    bool match_form(const CanonicalForm& a, const CanonicalForm& b, const Cont& k) {
        if (a.telescope.size() != b.telescope.size() || a.threads.size() != b.threads.size()) return false;
        std::uint32_t scope = next_scope_++;
        for (Name n : a.telescope) scope_a_[n] = scope;
        for (Name n : b.telescope) scope_b_[n] = scope;
        std::vector<bool> used(b.threads.size(), false);
        return match_threads(a, b, 0, used, k);
    }

    bool match_threads(const CanonicalForm& a, const CanonicalForm& b, std::size_t i, std::vector<bool>& used,
                       const Cont& k) {
        if (i == a.threads.size()) return k();
        for (std::size_t j = 0; j < b.threads.size(); ++j) {
            if (used[j]) continue;
            std::size_t mark = trail_.size();
            used[j] = true;
            bool ok = match_thread(a.threads[i], b.threads[j],
                                   [&] { return match_threads(a, b, i + 1, used, k); });
            if (ok) return true;
            used[j] = false;
            undo(mark);
        }
        return false;
    }

    bool match_thread(const Thread& ta, const Thread& tb, const Cont& k) {
        if (ta.is_input != tb.is_input) return false;
        if (!name_match(ta.channel, tb.channel)) return false;
        if (ta.is_input) {
            std::uint32_t scope = next_scope_++;
            scope_a_[ta.object] = scope;
            scope_b_[tb.object] = scope;
            bind(ta.object, tb.object);
        } else if (!name_match(ta.object, tb.object)) {
            return false;
        }
        return match_form(ta.continuation, tb.continuation, k);
    }
};

CanonicalForm rename_form(const CanonicalForm& f, const std::unordered_map<Name, Name>& map) {
    auto r = [&](Name n) {
        auto it = map.find(n);
        return it == map.end() ? n : it->second;
    };
    CanonicalForm out;
    for (Name n : f.telescope) out.telescope.push_back(r(n));
    for (const auto& t : f.threads)
        out.threads.push_back(Thread{t.is_input, r(t.channel), r(t.object), rename_form(t.continuation, map)});
    return out;
}

std::string form_key(const CanonicalForm& f);

std::string thread_key(const Thread& t) {
    return std::string(t.is_input ? "i" : "o") + std::to_string(t.channel.id()) + ":" +
           std::to_string(t.object.id()) + "{" + form_key(t.continuation) + "}";
}

std::string form_key(const CanonicalForm& f) {
    std::vector<Name> tel = f.telescope;
    std::sort(tel.begin(), tel.end());
    std::vector<std::string> parts;
    for (const auto& t : f.threads) parts.push_back(thread_key(t));
    std::sort(parts.begin(), parts.end());
    std::string key = "v";
    for (Name n : tel) key += std::to_string(n.id()) + ",";
    for (const auto& p : parts) key += "|" + p;
    return key;
}

CongCert cert_between(const CanonicalForm& a, const CanonicalForm& b);

CongCert thread_cert(const Thread& ta, const Thread& tb) {
    CongCert inner = cert_between(ta.continuation, tb.continuation);
    return ta.is_input ? cong::c_in(ta.channel, ta.object, inner) : cong::c_out(ta.channel, ta.object, inner);
}

// Certificate embed(a) == embed(b) for forms whose names already agree.
CongCert cert_between(const CanonicalForm& a, const CanonicalForm& b) {
    std::size_t n = a.threads.size();
    if (n == 0) return cong::refl(Process::nil());
    std::vector<std::string> keys_b;
    for (const auto& t : b.threads) keys_b.push_back(thread_key(t));
    std::vector<std::size_t> pi(n);
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        std::string ka = thread_key(a.threads[i]);
        std::size_t j = 0;
        while (j < n && (used[j] || keys_b[j] != ka)) ++j;
        if (j == n) throw ContractViolation("cert_between: forms do not match");
        used[j] = true;
        pi[i] = j;
    }
    std::vector<Process> la = thread_processes(a);
    std::vector<Process> lb = thread_processes(b);
    std::vector<Process> mid(n);
    for (std::size_t i = 0; i < n; ++i) mid[i] = lb[pi[i]];

    CongCert threads = thread_cert(a.threads[0], b.threads[pi[0]]);
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<Process> done(mid.begin(), mid.begin() + static_cast<std::ptrdiff_t>(k));
        CongCert tk = thread_cert(a.threads[k], b.threads[pi[k]]);
        threads = cong::trans(cong::c_par(threads, la[k]), cong::c_par_right(par_chain(done), tk));
    }
    std::vector<std::size_t> back(n);
    for (std::size_t i = 0; i < n; ++i) back[pi[i]] = i;
    CongCert order = cong::permute_chain(mid, back);
    CongCert body = cong::c_res_chain(a.telescope, cong::trans(threads, order));

    std::vector<std::size_t> tel_perm(b.telescope.size());
    for (std::size_t i = 0; i < b.telescope.size(); ++i) {
        auto it = std::find(a.telescope.begin(), a.telescope.end(), b.telescope[i]);
        if (it == a.telescope.end()) throw ContractViolation("cert_between: telescopes differ");
        tel_perm[i] = static_cast<std::size_t>(it - a.telescope.begin());
    }
    return cong::trans(body, cong::permute_telescope(a.telescope, tel_perm, par_chain(lb)));
}

}  // namespace

bool forms_match(const CanonicalForm& a, const CanonicalForm& b) { return FormMatcher{}.match(a, b); }

std::optional<CongCert> congruent(const Process& p, const Process& q) {
    NameSupply supply(NameSet::unite(p.free_names(), q.free_names()));
    NormalizeResult np = normalize_with(p, supply);
    NormalizeResult nq = normalize_with(q, supply);
    FormMatcher matcher;
    if (!matcher.match(np.form, nq.form)) return std::nullopt;
    std::unordered_map<Name, Name> inverse;
    for (const auto& [a, b] : matcher.mapping()) inverse.emplace(b, a);
    CanonicalForm aligned = rename_form(nq.form, inverse);
    CongCert mid = cert_between(np.form, aligned);
    return cong::trans(np.cert, cong::trans(mid, cong::sym(nq.cert)));
}

}  // namespace pi
