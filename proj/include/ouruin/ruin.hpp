#pragma once

#include "ouruin/backward_exponent.hpp"
#include "ouruin/levy_models.hpp"
#include "ouruin/transform_engine.hpp"

namespace ouruin {

struct TimeHorizon {
  double t = 0.0;
  bool infinite = false;

  static TimeHorizon finite(double t);
  static TimeHorizon infinity() { return TimeHorizon{0.0, true}; }
};

struct RuinQuery {
  LevyModel model;
  ProcessParams params;
  double x;
  TimeHorizon horizon;

  // initial distance to the absolute-ruin barrier -c/r
  double x_eff() const { return x + params.c / params.r; }
};

// P(tau <= t) for the level x_eff, read off the dual law of X_t; the grid is widened to cover x_eff.
double finite_time_ruin(const BackwardExponent& be, double x_eff, double t, GridSpec grid = {},
                        const InversionOptions& opt = {});
double finite_time_ruin(const RuinQuery& q, const GridSpec& grid = {}, const InversionOptions& opt = {});

// Survival probabilities P(tau > t) at every node of the grid.
CdfTable finite_time_survival_curve(const BackwardExponent& be, double t, const GridSpec& grid = {},
                                    const InversionOptions& opt = {});

double infinite_time_ruin(const BackwardExponent& be, double x_eff, const WFamily& wf);
double infinite_time_ruin(const RuinQuery& q, const WFamily& wf);
double infinite_time_ruin(const RuinQuery& q, GridSpec grid = {}, const InversionOptions& opt = {});

// Survival when the initial capital is exponential with rate beta.
double exp_initial_survival(const BackwardExponent& be, double beta, TimeHorizon horizon);

}  // namespace ouruin
