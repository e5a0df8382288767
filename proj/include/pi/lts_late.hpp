#pragma once

// Late transition enumeration and the telescope decompositions of input,
// free-output and bound-output transitions.

#include <optional>
#include <vector>

#include "pi/congruence.hpp"
#include "pi/step.hpp"

namespace pi {

/// All late transitions of p, deduplicated modulo alpha, each with a
/// certificate. Restrictions are opened at names outside fn(p), so free
/// targets only mention names of p.
std::vector<Step> late_steps(const Process& p);

enum class DecompositionKind { Input, FreeOutput, BoundOutput };

const char* to_string(DecompositionKind k);

/// q == nu w1..wn (pi.R | S) where pi is x(y), x!y, or x!z under an extra
/// outermost nu z for bound output. `object` is y (input variable or
/// payload) or the extruded z.
struct TelescopeDecomposition {
    DecompositionKind kind = DecompositionKind::Input;
    Name subject;
    Name object;
    std::vector<Name> binders;
    Process R;
    Process S;
    /// q == source_shape()
    CongCert cert_source;
    /// transition result at `object` == target_shape()
    CongCert cert_target;

    Process source_shape() const;
    Process target_shape() const;
};

/// The certificate must conclude a bound input of q. The variable and the
/// binders are drawn from `supply`, which should avoid every name in play.
TelescopeDecomposition decompose_input(const Process& q, const Transition& t, const StepCert& cert,
                                       NameSupply& supply);
TelescopeDecomposition decompose_input(const Process& q, const Transition& t, const StepCert& cert);
TelescopeDecomposition decompose_free_output(const Process& q, const Transition& t, const StepCert& cert,
                                             NameSupply& supply);
TelescopeDecomposition decompose_free_output(const Process& q, const Transition& t, const StepCert& cert);
TelescopeDecomposition decompose_bound_output(const Process& q, const Transition& t, const StepCert& cert,
                                              NameSupply& supply);
TelescopeDecomposition decompose_bound_output(const Process& q, const Transition& t, const StepCert& cert);

}  // namespace pi
