#pragma once

// Structural congruence: derivation certificates over the axioms
// Par-Assoc, Par-Unit, Par-Comm, Sc-Ext-Zero, Sc-Ext-Par, Sc-Ext-Res, the
// compatibility rules C-In, C-Out, C-Par, C-Res and the equivalence rules
// C-Ref, C-Sym, C-Trans; a canonical form; and a decision procedure.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pi/syntax.hpp"

namespace pi {

enum class CongRule {
    ParAssoc,
    ParUnit,
    ParComm,
    ScExtZero,
    ScExtPar,
    ScExtRes,
    CIn,
    COut,
    CPar,
    CRes,
    CRef,
    CSym,
    CTrans,
};

const char* to_string(CongRule r);
std::optional<CongRule> cong_rule_from_string(std::string_view s);

struct CongNode;

/// A derivation of lhs == rhs. Binder rules (C-In, C-Res) record the name
/// at which their premise opens both bodies.
class CongCert {
public:
    CongCert() = default;
    CongCert(CongRule rule, Process lhs, Process rhs, std::vector<CongCert> premises = {},
             std::optional<Name> binder = std::nullopt);

    CongRule rule() const;
    const Process& lhs() const;
    const Process& rhs() const;
    const std::vector<CongCert>& premises() const;
    const std::optional<Name>& binder() const;
    bool empty() const { return !node_; }
    std::size_t node_count() const;

private:
    std::shared_ptr<const CongNode> node_;
};

struct CongNode {
    CongRule rule;
    Process lhs;
    Process rhs;
    std::vector<CongCert> premises;
    std::optional<Name> binder;
};

/// Outcome of a certificate check; on failure `path` locates the node.
struct CheckResult {
    bool ok = true;
    std::string path;
    std::string message;

    explicit operator bool() const { return ok; }
    static CheckResult pass() { return {}; }
    static CheckResult fail(std::string path, std::string message) {
        return CheckResult{false, std::move(path), std::move(message)};
    }
};

CheckResult check_cong(const CongCert& cert, const Process& p, const Process& q);
/// Checks the tree against its own recorded conclusion.
CheckResult check_cong(const CongCert& cert);

/// Smart constructors. Each builds the node for the named rule from
/// closed processes; names passed to binder rules occur free in the
/// arguments and are abstracted by the constructor.
namespace cong {

CongCert refl(const Process& p);
CongCert sym(const CongCert& c);
CongCert trans(const CongCert& first, const CongCert& second);
/// P | (Q | R) == (P | Q) | R
CongCert par_assoc(const Process& p, const Process& q, const Process& r);
/// P | 0 == P
CongCert par_unit(const Process& p);
/// P | Q == Q | P
CongCert par_comm(const Process& p, const Process& q);
/// nu x. 0 == 0
CongCert sc_ext_zero(Name x);
/// (nu x. P) | Q == nu x. (P | Q); x must not be free in Q.
CongCert sc_ext_par(Name x, const Process& p, const Process& q);
/// nu x. nu y. P == nu y. nu x. P
CongCert sc_ext_res(Name x, Name y, const Process& p);
/// x(y).P == x(y).Q from P == Q
CongCert c_in(Name channel, Name var, const CongCert& body);
CongCert c_out(Name channel, Name payload, const CongCert& cont);
/// P | Q == P' | Q from P == P'
CongCert c_par(const CongCert& left, const Process& right);
/// P | Q == P | Q' from Q == Q', via Par-Comm.
CongCert c_par_right(const Process& left, const CongCert& right);
/// nu x. P == nu x. Q from P == Q
CongCert c_res(Name x, const CongCert& body);
/// Nested C-Res for a telescope, outermost first.
CongCert c_res_chain(const std::vector<Name>& names, const CongCert& body);

/// nu w. A | Q == nu w. (A | Q) for a whole telescope.
CongCert extrude_left(const std::vector<Name>& names, const Process& a, const Process& q);
/// P | nu w. B == nu w. (P | B)
CongCert extrude_right(const std::vector<Name>& names, const Process& p, const Process& b);
/// nu x. P == P when x is not free in P.
CongCert drop_vacuous(Name x, const Process& p);
/// par_chain(a) | par_chain(b) == par_chain(a ++ b); b non-empty.
CongCert flatten(const std::vector<Process>& a, const std::vector<Process>& b);
/// par_chain(items) == par_chain(items permuted), where target[i] = items[perm[i]].
CongCert permute_chain(const std::vector<Process>& items, const std::vector<std::size_t>& perm);
/// wrap_res(names, body) == wrap_res(names permuted, body).
CongCert permute_telescope(const std::vector<Name>& names, const std::vector<std::size_t>& perm,
                           const Process& body);

}  // namespace cong

/// Every recorded binder and every free name of every process in the tree.
NameSet cert_names(const CongCert& c);
/// Replace free occurrences of `from` by `to` throughout the tree. Recorded
/// binders that clash with either name are renamed apart first.
CongCert rename_cert(const CongCert& c, Name from, Name to);

/// A prefixed thread of a canonical form. For inputs `object` is the bound
/// variable (opened as a fresh name); for outputs it is the payload.
struct Thread;

/// Restriction telescope over a multiset of threads. Telescope names are
/// fresh names that occur free in the threads.
struct CanonicalForm {
    std::vector<Name> telescope;
    std::vector<Thread> threads;

    bool empty() const { return threads.empty(); }
    Process embed() const;
    /// Thread i as a process (telescope names free).
    Process thread_process(std::size_t i) const;
};

struct Thread {
    bool is_input = false;
    Name channel;
    Name object;
    CanonicalForm continuation;

    Process process() const;
};

/// Normalization with names drawn from `supply`.
struct NormalizeResult {
    CanonicalForm form;
    CongCert cert;  // p == form.embed()
};
NormalizeResult normalize_with(const Process& p, NameSupply& supply);

CanonicalForm normalize(const Process& p);
CongCert normalize_cert(const Process& p);

/// Whether two canonical forms are equal up to telescope renaming and
/// thread permutation, recursively.
bool forms_match(const CanonicalForm& a, const CanonicalForm& b);

std::optional<CongCert> congruent(const Process& p, const Process& q);

}  // namespace pi
