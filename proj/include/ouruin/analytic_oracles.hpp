#pragma once

#include "ouruin/special_functions.hpp"

namespace ouruin {

struct OracleResult {
  double value;
  int series_terms_used = 0;
  double truncation_bound = 0.0;
};

// Finite-time survival for exponential claims (tail eta e^{-delta x}).
double exp_case_survival(double eta, double delta, double r, double x, double t);

// Density and distribution function of the law with Laplace transform (1 + beta^alpha / delta)^{-kappa}.
double linnik_kW_density(double kappa, double delta, double alpha, double x, const SeriesControl& ctrl = {});
double linnik_kW_cdf(double kappa, double delta, double alpha, double x, const SeriesControl& ctrl = {});

struct LinnikSeriesOptions {
  int max_terms = 40;
  double tolerance = 1e-8;  // bound on the discarded tail
};

// Finite-time survival for Linnik claims (tail eta E_alpha(-delta x^alpha)).
OracleResult linnik_survival_series(double eta, double delta, double alpha, double r, double x, double t,
                                    const LinnikSeriesOptions& opt = {});

// P(tau > t) for stable claims; t may be +infinity.
double stable_survival(double alpha, double r, double x, double t);

// Explicit integral for the stable law of index 1/2.
double stable_half_cdf(double x);

}  // namespace ouruin
