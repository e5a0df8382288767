#include "pi/reduction.hpp"

#include <unordered_set>

namespace pi {

const char* to_string(RedRule r) {
    switch (r) {
        case RedRule::RCom: return "RCom";
        case RedRule::RPar: return "RPar";
        case RedRule::RRes: return "RRes";
        case RedRule::RStruct: return "RStruct";
    }
    return "?";
}

std::optional<RedRule> red_rule_from_string(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(RedRule::RStruct); ++i) {
        auto r = static_cast<RedRule>(i);
        if (s == to_string(r)) return r;
    }
    return std::nullopt;
}

RedCert::RedCert(RedRule rule, Process lhs, Process rhs, std::vector<RedCert> premises, std::optional<Name> binder,
                 CongCert left, CongCert right)
    : node_(std::make_shared<const RedNode>(RedNode{rule, std::move(lhs), std::move(rhs), std::move(premises), binder,
                                                    std::move(left), std::move(right)})) {}

RedRule RedCert::rule() const { return node_->rule; }
const Process& RedCert::lhs() const { return node_->lhs; }
const Process& RedCert::rhs() const { return node_->rhs; }
const std::vector<RedCert>& RedCert::premises() const { return node_->premises; }
const std::optional<Name>& RedCert::binder() const { return node_->binder; }
const CongCert& RedCert::left_cong() const { return node_->left; }
const CongCert& RedCert::right_cong() const { return node_->right; }

std::size_t RedCert::node_count() const {
    std::size_t n = 1;
    for (const auto& p : premises()) n += p.node_count();
    if (!left_cong().empty()) n += left_cong().node_count();
    if (!right_cong().empty()) n += right_cong().node_count();
    return n;
}

namespace {

CheckResult check_red_rec(const RedCert& c, const std::string& path) {
    if (c.empty()) return CheckResult::fail(path, "empty certificate node");
    auto bad = [&](const std::string& why) {
        return CheckResult::fail(path, std::string(to_string(c.rule())) + ": " + why);
    };
    const Process& l = c.lhs();
    const Process& r = c.rhs();
    if (!l.locally_closed() || !r.locally_closed()) return bad("conclusion contains a dangling bound index");
    const auto& prem = c.premises();
    std::size_t want = c.rule() == RedRule::RCom ? 0 : 1;
    if (prem.size() != want)
        return bad("expects " + std::to_string(want) + " premise(s), got " + std::to_string(prem.size()));
    for (std::size_t i = 0; i < prem.size(); ++i) {
        auto sub = check_red_rec(prem[i], path + "/premises[" + std::to_string(i) + "]");
        if (!sub) return sub;
    }
    switch (c.rule()) {
        case RedRule::RCom: {
            if (l.kind() != Kind::Par || l.left().kind() != Kind::Out || l.right().kind() != Kind::In)
                return bad("left side is not x!y.P | x(z).Q");
            const Process& out = l.left();
            const Process& in = l.right();
            if (!(out.channel() == in.channel())) return bad("subjects differ");
            Process expect = Process::par(out.body(), in.open_body(out.payload().name));
            if (!(r == expect)) return bad("right side is not P | Q{y/z}");
            return CheckResult::pass();
        }
        case RedRule::RPar: {
            if (l.kind() != Kind::Par || r.kind() != Kind::Par) return bad("sides are not parallel");
            if (!(l.right() == r.right())) return bad("right components differ");
            if (!(prem[0].lhs() == l.left()) || !(prem[0].rhs() == r.left()))
                return bad("premise does not reduce the left component");
            return CheckResult::pass();
        }
        case RedRule::RRes: {
            if (l.kind() != Kind::Res || r.kind() != Kind::Res) return bad("sides are not restrictions");
            if (!c.binder()) return bad("missing binder name");
            Name z = *c.binder();
            if (l.has_free(z) || r.has_free(z)) return bad("binder name " + z.text() + " is not fresh");
            if (!(prem[0].lhs() == l.open_body(z)) || !(prem[0].rhs() == r.open_body(z)))
                return bad("premise does not reduce the opened bodies");
            return CheckResult::pass();
        }
        case RedRule::RStruct: {
            const CongCert& lc = c.left_cong();
            const CongCert& rc = c.right_cong();
            if (lc.empty() || rc.empty()) return bad("missing congruence certificate");
            if (auto a = check_cong(lc, l, prem[0].lhs()); !a)
                return CheckResult::fail(path + "/left/" + a.path, a.message);
            if (auto b = check_cong(rc, prem[0].rhs(), r); !b)
                return CheckResult::fail(path + "/right/" + b.path, b.message);
            return CheckResult::pass();
        }
    }
    return bad("unknown rule");
}

void collect(const RedCert& c, NameSet& out) {
    out.insert_all(c.lhs().free_names());
    out.insert_all(c.rhs().free_names());
    if (c.binder()) out.insert(*c.binder());
    if (!c.left_cong().empty()) out.insert_all(cert_names(c.left_cong()));
    if (!c.right_cong().empty()) out.insert_all(cert_names(c.right_cong()));
    for (const auto& p : c.premises()) collect(p, out);
}

}  // namespace

CheckResult check_red(const RedCert& cert) { return check_red_rec(cert, "root"); }

CheckResult check_red(const RedCert& cert, const Process& p, const Process& q) {
    if (cert.empty()) return CheckResult::fail("root", "empty certificate");
    if (!(cert.lhs() == p)) return CheckResult::fail("root", "certificate source differs from the claim");
    if (!(cert.rhs() == q)) return CheckResult::fail("root", "certificate target differs from the claim");
    return check_red(cert);
}

NameSet red_cert_names(const RedCert& c) {
    NameSet out;
    collect(c, out);
    return out;
}

namespace red {

RedCert r_com(const Process& out, const Process& in) {
    if (out.kind() != Kind::Out || in.kind() != Kind::In || !(out.channel() == in.channel()))
        throw ContractViolation("r_com: not a redex");
    return RedCert(RedRule::RCom, Process::par(out, in),
                   Process::par(out.body(), in.open_body(out.payload().name)));
}

RedCert r_par(const RedCert& inner, const Process& right) {
    return RedCert(RedRule::RPar, Process::par(inner.lhs(), right), Process::par(inner.rhs(), right), {inner});
}

RedCert r_res(Name z, const RedCert& inner) {
    return RedCert(RedRule::RRes, Process::res(z, inner.lhs()), Process::res(z, inner.rhs()), {inner}, z);
}

RedCert r_res_chain(const std::vector<Name>& names, const RedCert& inner) {
    RedCert acc = inner;
    for (auto it = names.rbegin(); it != names.rend(); ++it) acc = r_res(*it, acc);
    return acc;
}

RedCert r_struct(const CongCert& left, const RedCert& inner, const CongCert& right) {
    if (!(left.rhs() == inner.lhs()) || !(inner.rhs() == right.lhs()))
        throw ContractViolation("r_struct: congruences do not meet the premise");
    return RedCert(RedRule::RStruct, left.lhs(), right.rhs(), {inner}, std::nullopt, left, right);
}

}  // namespace red

std::vector<Reduct> reducts(const Process& p) {
    NameSupply supply(p.free_names());
    NormalizeResult n = normalize_with(p, supply);
    const CanonicalForm& f = n.form;
    std::vector<Process> items;
    for (const auto& t : f.threads) items.push_back(t.process());

    std::vector<Reduct> out;
    std::unordered_set<Process, ProcessHash> seen;
    for (std::size_t i = 0; i < f.threads.size(); ++i) {
        if (f.threads[i].is_input) continue;
        for (std::size_t j = 0; j < f.threads.size(); ++j) {
            if (!f.threads[j].is_input || f.threads[j].channel != f.threads[i].channel) continue;
            std::vector<std::size_t> perm{i, j};
            std::vector<Process> rest;
            for (std::size_t k = 0; k < items.size(); ++k)
                if (k != i && k != j) {
                    perm.push_back(k);
                    rest.push_back(items[k]);
                }
            CongCert order = cong::permute_chain(items, perm);
            Process redex = Process::par(items[i], items[j]);
            CongCert arranged = order;
            if (!rest.empty()) arranged = cong::trans(order, cong::sym(cong::flatten({redex}, rest)));
            CongCert left = cong::trans(n.cert, cong::c_res_chain(f.telescope, arranged));

            RedCert com = red::r_com(items[i], items[j]);
            RedCert inner = red::r_res_chain(f.telescope, rest.empty() ? com : red::r_par(com, par_chain(rest)));
            Process q = inner.rhs();
            if (!seen.insert(q).second) continue;
            if (inner.lhs() == p)
                out.push_back(Reduct{q, inner});
            else
                out.push_back(Reduct{q, red::r_struct(left, inner, cong::refl(q))});
        }
    }
    return out;
}

Process RedexDecomposition::redex() const {
    return Process::par(Process::output(subject, payload, R1), Process::input(subject, var, R2));
}

Process RedexDecomposition::contractum() const { return Process::par(R1, substitute(R2, payload, var)); }

Process RedexDecomposition::source_shape() const { return wrap_res(binders, Process::par(redex(), S)); }

Process RedexDecomposition::target_shape() const { return wrap_res(binders, Process::par(contractum(), S)); }

namespace {

CongCert absorb_right(const std::vector<Name>& u, const Process& a, const Process& s, const Process& q) {
    return cong::trans(cong::extrude_left(u, Process::par(a, s), q),
                       cong::c_res_chain(u, cong::sym(cong::par_assoc(a, s, q))));
}

RedexDecomposition rename_redex(const RedexDecomposition& d, Name from, Name to) {
    RedexDecomposition out = d;
    if (out.subject == from) out.subject = to;
    if (out.payload == from) out.payload = to;
    out.R1 = substitute(d.R1, to, from);
    out.R2 = substitute(d.R2, to, from);
    out.S = substitute(d.S, to, from);
    out.cert_source = rename_cert(d.cert_source, from, to);
    out.cert_target = rename_cert(d.cert_target, from, to);
    return out;
}

RedexDecomposition decompose_rec(const RedCert& c, NameSupply& supply) {
    switch (c.rule()) {
        case RedRule::RCom: {
            const Process& out = c.lhs().left();
            const Process& in = c.lhs().right();
            RedexDecomposition d;
            d.subject = out.channel().name;
            d.payload = out.payload().name;
            d.var = supply.next(in.hint());
            d.R1 = out.body();
            d.R2 = in.open_body(d.var);
            d.S = Process::nil();
            d.cert_source = cong::sym(cong::par_unit(c.lhs()));
            d.cert_target = cong::sym(cong::par_unit(c.rhs()));
            return d;
        }
        case RedRule::RPar: {
            RedexDecomposition d = decompose_rec(c.premises()[0], supply);
            const Process& t = c.lhs().right();
            d.cert_source = cong::trans(cong::c_par(d.cert_source, t), absorb_right(d.binders, d.redex(), d.S, t));
            d.cert_target = cong::trans(cong::c_par(d.cert_target, t), absorb_right(d.binders, d.contractum(), d.S, t));
            d.S = Process::par(d.S, t);
            return d;
        }
        case RedRule::RRes: {
            RedexDecomposition inner = decompose_rec(c.premises()[0], supply);
            Name u = *c.binder();
            Name w = supply.next(u.hint());
            RedexDecomposition d = rename_redex(inner, u, w);
            d.cert_source = cong::c_res(w, d.cert_source);
            d.cert_target = cong::c_res(w, d.cert_target);
            d.binders.insert(d.binders.begin(), w);
            return d;
        }
        case RedRule::RStruct: {
            RedexDecomposition d = decompose_rec(c.premises()[0], supply);
            d.cert_source = cong::trans(c.left_cong(), d.cert_source);
            d.cert_target = cong::trans(cong::sym(c.right_cong()), d.cert_target);
            return d;
        }
    }
    throw ContractViolation("decompose_reduction: unknown rule");
}

}  // namespace

RedexDecomposition decompose_reduction(const Process& p, const Process& q, const RedCert& cert, NameSupply& supply) {
    if (auto r = check_red(cert, p, q); !r)
        throw ContractViolation("decompose_reduction: invalid certificate at " + r.path + ": " + r.message);
    supply.avoid(red_cert_names(cert));
    return decompose_rec(cert, supply);
}

RedexDecomposition decompose_reduction(const Process& p, const Process& q, const RedCert& cert) {
    NameSupply supply;
    return decompose_reduction(p, q, cert, supply);
}

}  // namespace pi
