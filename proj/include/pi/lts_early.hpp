#pragma once

// Early transitions and the translators between early and late derivations.

#include <vector>

#include "pi/step.hpp"

namespace pi {

/// The name early_steps uses as the extra input payload for `universe`.
Name designated_fresh(const NameSet& universe);

/// Early transitions of p. Free inputs receive names from the universe or
/// the designated fresh name. Throws ContractViolation unless
/// fn(p) is contained in the universe.
std::vector<Step> early_steps(const Process& p, const NameSet& universe);

struct LateInput {
    Step step;
    /// The early target equals the abstraction instantiated here.
    Name witness;
};

/// Early free input of p (cert over the early rules) to the late bound input.
LateInput finp_early_to_late(const Process& p, const Transition& t, const StepCert& cert);
/// Late bound input of p to the early free input receiving y.
Step finp_late_to_early(const Process& p, const Transition& t, const StepCert& cert, Name y);
/// Early tau derivation to a late one with the same target.
StepCert tau_early_to_late(const Process& p, const Transition& t, const StepCert& cert);
StepCert tau_late_to_early(const Process& p, const Transition& t, const StepCert& cert);

}  // namespace pi
