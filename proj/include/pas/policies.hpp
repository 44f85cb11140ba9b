#pragma once

#include "pas/params.hpp"
#include "pas/state.hpp"

namespace pas {

/// Assigns the queue in priority order (ascending type index), each patient to
/// the highest-ranked ward with a free bed. No transfers. Throws
/// InfeasibleError naming the type when a patient cannot be placed.
Action assign_no_transfer(const State& s, const ModelParams& params);

/// Assigns the queue in priority order, allowing up to `y_max` occupants to be
/// moved out of the way. Per priority level the pending transfers are relocated
/// first (each leaves the worst-ranked ward currently holding one and moves to
/// the ward with the lowest transfer cost among those with space, ties broken
/// by the mover's own preference then ward index); queued patients then go to
/// their best ward with a potential bed, unseating the lowest-priority movable
/// occupant of another type when the ward overflows by one. Unseating an
/// occupant consumes one unit of budget; relocations do not.
Action assign_with_transfers(const State& s, const ModelParams& params, int y_max);

/// Realizes a decision label as a concrete action.
Action realize_decision(const State& s, const DecisionLabel& label, const ModelParams& params);

} // namespace pas
