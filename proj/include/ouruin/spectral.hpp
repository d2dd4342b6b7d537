#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ouruin/transform_engine.hpp"

namespace ouruin {

// -log cos(pi alpha / 2) / (r alpha)
double t_alpha(double alpha, double r);

// Coefficients of exp(phi_r(v)) = sum mu_n v^n.
std::vector<double> mu_coefficients(const BackwardExponent& be, int N);

class SpectralSeries {
 public:
  // wf must tabulate derivatives up to order N; alpha defaults to the model's tail index.
  SpectralSeries(WFamily wf, int N, std::optional<double> alpha = std::nullopt);

  const WFamily& w_family() const { return wf_; }
  const std::vector<double>& mu() const { return mu_; }
  int max_order() const { return static_cast<int>(mu_.size()) - 1; }
  double r() const { return wf_.r(); }
  std::optional<double> alpha() const { return alpha_; }
  // 0 when the model has no small-jump index (finite activity)
  double t_alpha() const { return t_alpha_; }

  // sum_{n<=N} mu_n W^{(n)}(x) e^{-rnt}, unclipped
  double partial_sum(double x, double t, int N, bool force_below_threshold = false) const;
  // partial sums at the nonnegative grid nodes 0, h, ..., Mh
  std::vector<double> partial_sums(double t, int N, bool force_below_threshold = false) const;

 private:
  void check(double t, int N, bool force) const;

  WFamily wf_;
  std::vector<double> mu_;
  std::optional<double> alpha_;
  double t_alpha_;
};

double survival_series(const SpectralSeries& s, double x, double t, int N, bool force_below_threshold = false);

// Survival P(tau > t) from direct inversion at the nonnegative grid nodes.
std::vector<double> reference_survival(const BackwardExponent& be, double t, const GridSpec& grid,
                                       CumulativeRule rule = CumulativeRule::trapezoid);

struct TruncationErrorReport {
  std::vector<int> N_values;
  std::vector<double> t_values;
  std::vector<std::vector<double>> e;  // e[i][j] for N_values[i], t_values[j]

  double at(int N, double t) const;
  void write_csv(std::ostream& os) const;
  void write_table(std::ostream& os) const;
};

using ReferenceFn = std::function<std::vector<double>(double t)>;

TruncationErrorReport truncation_error_table(const SpectralSeries& s, const ReferenceFn& reference,
                                             const std::vector<int>& N_values, const std::vector<double>& t_values,
                                             bool force_below_threshold = true);

// sup over y in [0, e^{-rt} Mh] of |int p_t(x, y) W^{(n+1)}(x) dx - e^{-rnt} W^{(n+1)}(y)|
double eigenmeasure_check(const SpectralSeries& s, int n, double t, const InversionOptions& opt = {});

}  // namespace ouruin
