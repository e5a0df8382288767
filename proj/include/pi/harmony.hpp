#pragma once

// Constructive correspondence between silent transitions and reductions,
// and the transfer of transitions across structural congruence.

#include "pi/congruence.hpp"
#include "pi/lts_late.hpp"
#include "pi/reduction.hpp"
#include "pi/step.hpp"

namespace pi {

/// A silent transition of p certified as a reduction to the same target.
RedCert tau_to_reduction(const Process& p, const Transition& t, const StepCert& cert);

struct TauWitness {
    Process target;
    StepCert cert;
    /// The reduct == target
    CongCert cong;
};

/// A reduction p -> q as a silent transition of p to a target congruent to q.
TauWitness reduction_to_tau(const Process& p, const Process& q, const RedCert& cert);

struct Transferred {
    Transition transition;
    StepCert cert;
    /// Relates the two results; for bound transitions both abstractions are
    /// instantiated at `instantiation`.
    CongCert cong;
    Name instantiation;
};

/// Given p == q and a transition of p, the matching transition of q. The
/// congruence relates the original result to the new one.
Transferred transfer(const Process& p, const Process& q, const CongCert& cong, const Transition& t,
                     const StepCert& cert);

/// Given p == r and a transition of r, the matching transition of p. The
/// congruence relates the new result (of p) to the result of r.
Transferred part_i(const Process& p, const Process& r, const CongCert& cong, const Transition& t,
                   const StepCert& cert);

}  // namespace pi
