#include "aeos/start_time.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aeos/geometry.hpp"

namespace aeos {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Line {
  double c0 = 0.0;
  double c1 = 0.0;
  double at(double x) const { return c0 + c1 * x; }
};

Line operator-(Line a, Line b) { return {a.c0 - b.c0, a.c1 - b.c1}; }

double span_of(const SlackContext& ctx) {
  return ctx.window.vte_s - ctx.obs_duration_s - ctx.window.vts_s;
}

double start_of(const SlackContext& ctx, double tp) {
  return start_time_at(ctx.window, ctx.obs_duration_s, tp);
}

AttitudePair candidate_attitude(const SlackContext& ctx, double tp) {
  return attitude_at(ctx.window, ctx.orbit, start_of(ctx, tp), ctx.obs_duration_s);
}

// Candidate pitch as an affine function of tp.
Line candidate_pitch(const SlackContext& ctx) {
  const double length = ctx.window.length();
  if (length <= 0.0) return {0.0, 0.0};
  const double p = ctx.orbit.max_pitch_deg;
  return {p * (1.0 - ctx.obs_duration_s / length), -2.0 * p * span_of(ctx) / length};
}

// tp values in (0, 1) where the transition time to/from `neighbor` changes
// branch: the |dpitch| kink, the max() switch and the stabilization steps.
void add_breakpoints(const SlackContext& ctx, const ObservationAssignment& neighbor,
                     std::vector<double>& out) {
  const Line pitch = candidate_pitch(ctx);
  if (std::abs(pitch.c1) < 1e-15) return;
  const double q = neighbor.pitch_deg;
  const double droll = std::abs(ctx.window.roll_angle_deg - neighbor.roll_deg);
  std::vector<double> offsets = {0.0, ctx.orbit.pitch_rate_deg_per_s * droll /
                                          ctx.orbit.roll_rate_deg_per_s};
  for (double step : {15.0, 40.0}) {
    if (step - droll >= 0.0) offsets.push_back(step - droll);
  }
  for (double off : offsets) {
    for (double v : {q + off, q - off}) {
      const double tp = (v - pitch.c0) / pitch.c1;
      if (tp > 0.0 && tp < 1.0) out.push_back(tp);
    }
  }
}

// Transition time between the candidate and `neighbor` as a line valid on the
// open piece containing tp_mid.
Line transition_line(const SlackContext& ctx, const ObservationAssignment& neighbor,
                     double tp_mid) {
  const Line pitch = candidate_pitch(ctx);
  const double q = neighbor.pitch_deg;
  const double droll = std::abs(ctx.window.roll_angle_deg - neighbor.roll_deg);
  const double dp_mid = pitch.at(tp_mid) - q;
  const double sign = dp_mid >= 0.0 ? 1.0 : -1.0;
  const Line abs_dp{sign * (pitch.c0 - q), sign * pitch.c1};
  const double roll_term = droll / ctx.orbit.roll_rate_deg_per_s;
  Line slew{roll_term, 0.0};
  if (std::abs(dp_mid) / ctx.orbit.pitch_rate_deg_per_s >= roll_term) {
    slew = {abs_dp.c0 / ctx.orbit.pitch_rate_deg_per_s, abs_dp.c1 / ctx.orbit.pitch_rate_deg_per_s};
  }
  slew.c0 += stabilization_time(std::abs(dp_mid) + droll);
  return slew;
}

Line successor_line(const SlackContext& ctx, double tp_mid) {
  const ObservationAssignment& s = *ctx.successor;
  const Line interval{s.ots_s - ctx.window.vts_s - ctx.obs_duration_s, -span_of(ctx)};
  return interval - transition_line(ctx, s, tp_mid);
}

Line predecessor_line(const SlackContext& ctx, double tp_mid) {
  const ObservationAssignment& p = *ctx.predecessor;
  const Line interval{ctx.window.vts_s - p.ote_s, span_of(ctx)};
  return interval - transition_line(ctx, p, tp_mid);
}

// Sub-interval of [lo, hi] where line >= 0, if any.
std::optional<TpInterval> nonnegative_part(const Line& line, double lo, double hi) {
  if (line.c1 == 0.0) {
    if (line.c0 >= 0.0) return TpInterval{lo, hi};
    return std::nullopt;
  }
  const double root = -line.c0 / line.c1;
  if (line.c1 > 0.0) lo = std::max(lo, root);
  else hi = std::min(hi, root);
  if (lo > hi) return std::nullopt;
  return TpInterval{lo, hi};
}

struct Pieces {
  std::vector<double> points;  // 0, breakpoints, 1 (sorted, unique)
};

Pieces pieces_of(const SlackContext& ctx) {
  Pieces p;
  p.points = {0.0, 1.0};
  if (ctx.successor) add_breakpoints(ctx, *ctx.successor, p.points);
  if (ctx.predecessor) add_breakpoints(ctx, *ctx.predecessor, p.points);
  std::sort(p.points.begin(), p.points.end());
  p.points.erase(std::unique(p.points.begin(), p.points.end()), p.points.end());
  return p;
}

// Feasible part of the open piece (lo, hi), as a closed interval whose
// endpoints still need direct verification.
std::optional<TpInterval> piece_feasible(const SlackContext& ctx, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  std::optional<TpInterval> part = TpInterval{lo, hi};
  if (ctx.successor) {
    part = nonnegative_part(successor_line(ctx, mid), part->lo, part->hi);
    if (!part) return std::nullopt;
  }
  if (ctx.predecessor) part = nonnegative_part(predecessor_line(ctx, mid), part->lo, part->hi);
  return part;
}

// A point of `part` that passes direct verification, preferring `want`.
std::optional<double> verified_point(const SlackContext& ctx, const TpInterval& part, double want) {
  const double x = std::clamp(want, part.lo, part.hi);
  if (start_time_feasible(ctx, x)) return x;
  // The clamp hit an endpoint that lies on a stabilization jump or suffers
  // rounding; step inward.
  const double width = part.hi - part.lo;
  for (double delta : {1e-12, 1e-10, 1e-9}) {
    if (2.0 * delta > width) break;
    const double y = x <= part.lo ? part.lo + delta : part.hi - delta;
    if (start_time_feasible(ctx, y)) return y;
  }
  return std::nullopt;
}

bool better(double a, double b) {
  const double da = std::abs(a - 0.5);
  const double db = std::abs(b - 0.5);
  return da < db || (da == db && a < b);
}

}  // namespace

double interval_to_successor(const SlackContext& ctx, double tp) {
  if (!ctx.successor) throw Error("interval_to_successor requires a successor");
  return ctx.successor->ots_s - (start_of(ctx, tp) + ctx.obs_duration_s);
}

double interval_to_predecessor(const SlackContext& ctx, double tp) {
  if (!ctx.predecessor) throw Error("interval_to_predecessor requires a predecessor");
  return start_of(ctx, tp) - ctx.predecessor->ote_s;
}

double successor_margin(const SlackContext& ctx, double tp) {
  if (!ctx.successor) return kInf;
  return interval_to_successor(ctx, tp) -
         transition_time(candidate_attitude(ctx, tp), attitude_of(*ctx.successor), ctx.orbit);
}

double predecessor_margin(const SlackContext& ctx, double tp) {
  if (!ctx.predecessor) return kInf;
  return interval_to_predecessor(ctx, tp) -
         transition_time(attitude_of(*ctx.predecessor), candidate_attitude(ctx, tp), ctx.orbit);
}

bool start_time_feasible(const SlackContext& ctx, double tp) {
  if (tp < 0.0 || tp > 1.0) return false;
  return successor_margin(ctx, tp) >= -kMarginTolerance &&
         predecessor_margin(ctx, tp) >= -kMarginTolerance;
}

double slack_to_successor(const SlackContext& ctx, double tp) {
  if (!ctx.successor) return (1.0 - tp) * span_of(ctx);
  const Pieces p = pieces_of(ctx);
  double best = -kInf;
  for (double x : p.points) best = std::max(best, successor_margin(ctx, x));
  for (std::size_t i = 0; i + 1 < p.points.size(); ++i) {
    const double lo = p.points[i];
    const double hi = p.points[i + 1];
    const Line line = successor_line(ctx, 0.5 * (lo + hi));
    best = std::max({best, line.at(lo), line.at(hi)});
  }
  return best;
}

double slack_to_predecessor(const SlackContext& ctx, double tp) {
  if (!ctx.predecessor) return tp * span_of(ctx);
  const Pieces p = pieces_of(ctx);
  double best = -kInf;
  for (double x : p.points) best = std::max(best, predecessor_margin(ctx, x));
  for (std::size_t i = 0; i + 1 < p.points.size(); ++i) {
    const double lo = p.points[i];
    const double hi = p.points[i + 1];
    const Line line = predecessor_line(ctx, 0.5 * (lo + hi));
    best = std::max({best, line.at(lo), line.at(hi)});
  }
  return best;
}

std::optional<double> solve_start_time(const SlackContext& ctx) {
  if (!ctx.successor && !ctx.predecessor) return 0.5;
  const Pieces p = pieces_of(ctx);
  std::optional<double> best;
  auto offer = [&](double x) {
    if (!best || better(x, *best)) best = x;
  };
  for (double x : p.points) {
    if (start_time_feasible(ctx, x)) offer(x);
  }
  for (std::size_t i = 0; i + 1 < p.points.size(); ++i) {
    const auto part = piece_feasible(ctx, p.points[i], p.points[i + 1]);
    if (!part) continue;
    if (auto x = verified_point(ctx, *part, 0.5)) offer(*x);
  }
  return best;
}

std::vector<TpInterval> feasible_set(const SlackContext& ctx) {
  std::vector<TpInterval> raw;
  const Pieces p = pieces_of(ctx);
  for (double x : p.points) {
    if (start_time_feasible(ctx, x)) raw.push_back({x, x});
  }
  if (!ctx.successor && !ctx.predecessor) return {{0.0, 1.0}};
  for (std::size_t i = 0; i + 1 < p.points.size(); ++i) {
    const auto part = piece_feasible(ctx, p.points[i], p.points[i + 1]);
    if (part) raw.push_back(*part);
  }
  std::sort(raw.begin(), raw.end(), [](const TpInterval& a, const TpInterval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<TpInterval> merged;
  for (const TpInterval& iv : raw) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

}  // namespace aeos
