#pragma once

// Time slacks around a candidate observation and the one-dimensional
// start-time subproblem
//
//   min (tp - 1/2)^2  s.t.  I^S(tp) - Trans(i, i_s)(tp) >= 0,
//                           I^P(tp) - Trans(i_p, i)(tp) >= 0,  0 <= tp <= 1,
//
// with the neighbors' observation windows held fixed.
//
// Under the attitude model the candidate pitch is affine in tp and roll is
// constant, so each margin is piecewise affine. Its pieces are delimited by
// the |dpitch| kink, the switch of the max() in the slew time, and the
// stabilization steps at total angle 15 and 40 deg. The solver enumerates
// those breakpoints, solves each piece in closed form and re-checks every
// candidate point by direct evaluation.

#include <optional>
#include <vector>

#include "aeos/model.hpp"

namespace aeos {

/// Margins at or above -kMarginTolerance seconds count as satisfied.
inline constexpr double kMarginTolerance = 1e-9;

struct SlackContext {
  VisibleWindow window;
  double obs_duration_s = 0.0;
  std::optional<ObservationAssignment> predecessor;
  std::optional<ObservationAssignment> successor;
  OrbitResource orbit;
};

struct TpInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// I^S = OTS of successor - OTE of candidate. Requires a successor.
double interval_to_successor(const SlackContext& ctx, double tp);
/// I^P = OTS of candidate - OTE of predecessor. Requires a predecessor.
double interval_to_predecessor(const SlackContext& ctx, double tp);

/// I^S - Trans(candidate, successor); +infinity without a successor.
double successor_margin(const SlackContext& ctx, double tp);
/// I^P - Trans(predecessor, candidate); +infinity without a predecessor.
double predecessor_margin(const SlackContext& ctx, double tp);

bool start_time_feasible(const SlackContext& ctx, double tp);

/// ft^S: with a successor, the largest I^S - Trans over tp in [0, 1] (a
/// supremum when it sits at a stabilization jump); without one, the residual
/// window room (1 - tp) * (VTE - ot - VTS) at the given tp.
double slack_to_successor(const SlackContext& ctx, double tp);
/// ft^P: mirror of slack_to_successor; tp * (VTE - ot - VTS) without a predecessor.
double slack_to_predecessor(const SlackContext& ctx, double tp);

/// Feasible tp closest to 1/2 (ties to the smaller tp), or nullopt.
std::optional<double> solve_start_time(const SlackContext& ctx);

/// Feasible set as sorted, merged intervals (isolated points have lo == hi).
std::vector<TpInterval> feasible_set(const SlackContext& ctx);

}  // namespace aeos
