#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ouruin/transform_engine.hpp"

namespace ouruin {

// Riemann-Liouville integral of order q of the piecewise-linear interpolant of values on {0, h, 2h, ...};
// beyond the last node the function is held constant.
double fractional_integral_at(const std::vector<double>& values, double h, double q, double x);
std::vector<double> fractional_integral(const std::vector<double>& values, double h, double q);

class ScaleFunction {
 public:
  ScaleFunction(double q, double h, std::vector<double> values, double r, std::string family);

  double q() const { return q_; }
  double h() const { return h_; }
  double r() const { return r_; }
  const std::string& family() const { return family_; }
  const std::vector<double>& values() const { return values_; }
  double x_max() const { return h_ * static_cast<double>(values_.size() - 1); }
  // 0 for x < 0; linear between nodes
  double value(double x) const;

 private:
  double q_, h_;
  std::vector<double> values_;
  double r_;
  std::string family_;
};

ScaleFunction fractional_integral_W(const WFamily& wf, double q);

// E[exp(-q tau_a^+) 1{tau_a^+ < tau_0}] = W_{q/r}(x) / W_{q/r}(a); sf must have order q/r
double exit_upward_lt(const ScaleFunction& sf, double q, double x, double a);

// |int e^{-beta x} W_q(x) dx - beta^{-q-1} e^{-phi_r(beta)}| / (beta^{-q-1} e^{-phi_r(beta)})
double lt_identity_check(const ScaleFunction& sf, const BackwardExponent& be, double beta);

struct MartingaleResidual {
  double residual;
  double standard_error;
};

// |e^{-qt} mean W_{q/r}(X_t) - W_{q/r}(x)| from samples of X_t started at x
MartingaleResidual martingale_residual(const ScaleFunction& sf, double q, double x, double t,
                                       const std::vector<double>& terminal_samples);

void write_csv(std::ostream& os, const ScaleFunction& sf);

}  // namespace ouruin
