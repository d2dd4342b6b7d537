#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ouruin/levy_models.hpp"

namespace ouruin {

struct SimConfig {
  std::int64_t n_paths = 100000;
  double horizon = 200.0;
  std::uint64_t seed = 1;
  // required for infinite-activity models; ignored when nu(0, inf) < inf
  std::optional<double> small_jump_cutoff;
  bool drift_compensation = true;
  // 0 picks the hardware concurrency
  unsigned threads = 0;

  void validate() const;
};

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_effective = 0;
};

enum class EventType { jump, ruin, horizon, exit };

struct PathEvent {
  double time;
  EventType type;
  double surplus_after;
};

struct PathRecord {
  std::int64_t path_id = 0;
  std::vector<PathEvent> events;
  std::optional<double> ruin_time;
  std::optional<double> exit_time;
  // surplus at min(horizon, ruin time, exit time)
  double terminal = 0.0;
};

// Stream for path i of a run seeded with seed.
std::uint64_t path_seed(std::uint64_t seed, std::int64_t path);

// Surplus X with dX = (rX + c) ds - dZ, stopped at ruin (X < -c/r), at the horizon,
// or on reaching exit_level when one is given.
PathRecord simulate_risk_path(const LevyModel& model, const ProcessParams& p, double x, const SimConfig& cfg,
                              std::int64_t path_id, std::optional<double> exit_level = std::nullopt,
                              bool record_events = true);

MCEstimate estimate_finite_time_ruin(const LevyModel& model, const ProcessParams& p, double x, double t,
                                     const SimConfig& cfg);

// Samples of sum_i e^{-r T_i} J_i over [0, t] (plus the compensating drift when enabled).
std::vector<double> sample_dual_integral(const LevyModel& model, double r, double t, const SimConfig& cfg);

struct ExitEstimate {
  MCEstimate estimate;
  // fraction of paths neither ruined nor exited by the horizon
  double unresolved_mass = 0.0;
  std::optional<std::string> warning;
};

// E[exp(-q tau_a^+) 1{tau_a^+ < tau_0}] with c = 0
ExitEstimate estimate_exit_upward(const LevyModel& model, double r, double x, double a, double q,
                                  const SimConfig& cfg);

// X_{t ^ tau_0} for each path, c = 0
std::vector<double> terminal_samples(const LevyModel& model, double r, double x, double t, const SimConfig& cfg);

// Empirical mean and standard error of a sample.
MCEstimate summarize(const std::vector<double>& values);

void write_path_csv(std::ostream& os, const std::vector<PathRecord>& paths);

}  // namespace ouruin
