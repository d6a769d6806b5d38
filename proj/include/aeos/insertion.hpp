#pragma once

// Fast insertion of one observation into an orbit sequence, shifting at most
// the two adjacent observations, and removal with ledger upkeep.

#include <optional>
#include <vector>

#include "aeos/model.hpp"

namespace aeos {

enum class InsertFailure {
  None,
  AlreadyAssigned,
  Unavailable,
  Memory,
  Energy,
  Timing,
};

struct NeighborShift {
  int target_id = 0;
  double old_tp = 0.0;
  double new_tp = 0.0;
};

struct InsertionOutcome {
  bool success = false;
  InsertFailure failure = InsertFailure::None;
  std::optional<ObservationAssignment> placed;
  std::vector<NeighborShift> shifted_neighbors;
  double memory_delta_mb = 0.0;
  double energy_delta_j = 0.0;
};

/// Tries to schedule `window` on its orbit:
///  1. locate neighbors around the nominal start (tp = 1/2) and check memory
///     and energy headroom;
///  2. solve the start-time subproblem against both fixed neighbors;
///  3-6. otherwise keep tp = 1/2 and re-time the successor (later), the
///     predecessor (earlier), or both, each against its own far neighbor;
///  7. commit and charge the ledgers, re-checking energy with final attitudes.
/// On failure the schedule is left untouched.
InsertionOutcome try_insert(Schedule& schedule, const Instance& instance,
                            const VisibleWindow& window);

struct RemovalOutcome {
  ObservationAssignment removed;
  double memory_delta_mb = 0.0;  // negative or zero
  double energy_delta_j = 0.0;
};

/// Removes an assigned target; other assignments keep their start times.
/// Throws Error if the target is not assigned.
RemovalOutcome remove(Schedule& schedule, const Instance& instance, int target_id);

}  // namespace aeos
