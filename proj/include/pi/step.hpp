#pragma once

// Labelled transitions and their derivation certificates. Late and early
// semantics share one node vocabulary; check_step picks the rule table.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pi/congruence.hpp"
#include "pi/syntax.hpp"

namespace pi {

/// A transition result: a process for free actions, an abstraction for
/// bound ones.
struct Transition {
    Action action;
    Process target;
    Abstraction abs;

    static Transition free(Action a, Process target);
    static Transition bound(Action a, Abstraction abs);

    bool is_bound() const { return action.is_bound(); }
    /// Target of a free transition, or the abstraction body opened at `n`.
    Process result_at(Name n) const;
    NameSet free_names() const;
    std::size_t hash() const;
    bool operator==(const Transition& o) const;
};

struct TransitionHash {
    std::size_t operator()(const Transition& t) const { return t.hash(); }
};

enum class Semantics { Late, Early };

enum class StepRule {
    SIn,
    SOut,
    SParL,
    SParR,
    SComL,
    SComR,
    SRes,
    SOpen,
    SCloseL,
    SCloseR,
    EIn,
    EComL,
    EComR,
    ECloseL,
    ECloseR,
};

const char* to_string(StepRule r);
std::optional<StepRule> step_rule_from_string(std::string_view s);
const char* to_string(Semantics s);

struct StepNode;

/// Derivation of source --transition-->. SRes and SOpen record the name at
/// which the restriction was opened; ECloseL/R record the extruded name.
class StepCert {
public:
    StepCert() = default;
    StepCert(StepRule rule, Process source, Transition transition, std::vector<StepCert> premises = {},
             std::optional<Name> binder = std::nullopt);

    StepRule rule() const;
    const Process& source() const;
    const Transition& transition() const;
    const std::vector<StepCert>& premises() const;
    const std::optional<Name>& binder() const;
    bool empty() const { return !node_; }
    std::size_t node_count() const;

private:
    std::shared_ptr<const StepNode> node_;
};

struct StepNode {
    StepRule rule;
    Process source;
    Transition transition;
    std::vector<StepCert> premises;
    std::optional<Name> binder;
};

CheckResult check_step(const StepCert& cert, Semantics sem = Semantics::Late);
/// Also requires the root to conclude `t` from `p`.
CheckResult check_step(const StepCert& cert, const Process& p, const Transition& t,
                       Semantics sem = Semantics::Late);

/// Every name mentioned anywhere in the tree, recorded binders included.
NameSet step_cert_names(const StepCert& c);

/// Replace free occurrences of `from` by `to` in every node. Recorded
/// binders that clash with `to` are renamed apart.
StepCert rename_step_cert(const StepCert& c, Name from, Name to);
Transition rename_transition(const Transition& t, Name from, Name to);

struct Step {
    Transition transition;
    StepCert cert;
};

/// Rule constructors computing the conclusion from the premises. Binder
/// names passed to s_res/s_open are free in the premise source and fresh
/// for the rest.
namespace step {

StepCert s_in(const Process& p);
StepCert s_out(const Process& p);
StepCert e_in(const Process& p, Name y);
StepCert s_par_l(const StepCert& left, const Process& right);
StepCert s_par_r(const Process& left, const StepCert& right);
StepCert s_com_l(const StepCert& out, const StepCert& in);
StepCert s_com_r(const StepCert& in, const StepCert& out);
StepCert s_close_l(const StepCert& out, const StepCert& in);
StepCert s_close_r(const StepCert& in, const StepCert& out);
StepCert e_com_l(const StepCert& out, const StepCert& in);
StepCert e_com_r(const StepCert& in, const StepCert& out);
StepCert e_close_l(Name z, const StepCert& out, const StepCert& in);
StepCert e_close_r(Name z, const StepCert& in, const StepCert& out);
StepCert s_res(Name z, const StepCert& body);
StepCert s_open(Name z, const StepCert& body);

}  // namespace step

}  // namespace pi
