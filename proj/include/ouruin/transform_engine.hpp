#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

#include "ouruin/backward_exponent.hpp"

namespace ouruin {

// Spatial grid {-n_neg h, ..., 0, h, ..., M h} and frequency controls.
struct GridSpec {
  double h = 0.2;
  int M = 125;
  double u_max = 0.0;      // 0 selects the cutoff adaptively
  std::size_t n_freq = 0;  // 0 selects a power of two automatically
  double x_neg = -1.0;     // negative extent; < 0 means 5h

  void validate() const;
  int n_neg() const;
  std::size_t size() const { return static_cast<std::size_t>(n_neg() + M + 1); }
  double x(std::size_t i) const { return (static_cast<double>(i) - n_neg()) * h; }
  std::size_t index_of_zero() const { return static_cast<std::size_t>(n_neg()); }
};

enum class CumulativeRule { trapezoid, right_rectangle };

struct InversionOptions {
  double decay_tol = 1e-4;    // largest |f(u_max)| accepted
  double target = 1e-10;      // adaptive cutoff: |f(u)| u^power below this
  bool nonnegative = true;    // the variable lives on [0, inf)
  double atom_at_zero = 0.0;  // point mass at 0, removed before inversion
  CumulativeRule rule = CumulativeRule::trapezoid;
  double damping = -1.0;  // invert e^{-dx} p(x); < 0 picks 0 for finite-mean laws and 12 / span otherwise
};

// Resolved discretization. The fine step dx divides h.
struct FourierPlan {
  double u_max;
  double du;
  double dx;
  double x0;  // left end of the periodic window
  int oversample;
  std::size_t n;

  double x(std::size_t j) const { return x0 + static_cast<double>(j) * dx; }
};

using CharFn = std::function<std::complex<double>(double)>;

FourierPlan make_plan(const GridSpec& grid, const std::function<double(double)>& envelope, double target,
                      double window_factor = 4.0);

struct DensityTable {
  FourierPlan plan;
  std::vector<double> density;  // on the fine window
  double atom = 0.0;

  double at(double x) const;
};

struct CdfTable {
  std::vector<double> x;
  std::vector<double> cdf;
  // density at the nodes; when present, value() interpolates by cubic Hermite away from support_min
  std::vector<double> density;
  double max_monotonicity_violation = 0.0;
  double support_min = -std::numeric_limits<double>::infinity();

  double value(double x) const;
};

// E[exp(-iu X_t)] for the dual process started at 0
std::complex<double> dual_char_function(const BackwardExponent& be, double t, double u);

DensityTable invert_to_density(const CharFn& f, const GridSpec& grid, const InversionOptions& opt = {});
CdfTable invert_to_cdf(const CharFn& f, const GridSpec& grid, const InversionOptions& opt = {});
CdfTable density_to_cdf(const DensityTable& d, const GridSpec& grid, const InversionOptions& opt);

// Law of X_t under the dual measure from 0; the compound-Poisson atom is handled exactly.
DensityTable dual_density(const BackwardExponent& be, double t, const GridSpec& grid, InversionOptions opt = {});
CdfTable dual_cdf(const BackwardExponent& be, double t, const GridSpec& grid, InversionOptions opt = {});

class WFamily {
 public:
  WFamily(GridSpec grid, BackwardExponent be, std::vector<std::vector<double>> derivs, FourierPlan plan,
          double mass_below_zero, double max_violation);

  const GridSpec& grid() const { return grid_; }
  const LevyModel& model() const { return be_.model(); }
  const BackwardExponent& backward_exponent() const { return be_; }
  double r() const { return be_.r(); }
  const FourierPlan& plan() const { return plan_; }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& w() const { return derivs_[0]; }
  // order 0 is W, order k >= 1 is W^{(k)}
  const std::vector<double>& derivative(int order) const;
  // cubic Hermite when the next derivative is tabulated (quadratic on the cell at 0), linear otherwise
  int max_order() const { return static_cast<int>(derivs_.size()) - 1; }
  double value(int order, double x) const;
  // mass of W' on the negative part of the window (aliasing diagnostic)
  double mass_below_zero() const { return mass_below_zero_; }
  double max_monotonicity_violation() const { return max_violation_; }

 private:
  GridSpec grid_;
  BackwardExponent be_;
  std::vector<double> x_;
  std::vector<std::vector<double>> derivs_;
  FourierPlan plan_;
  double mass_below_zero_;
  double max_violation_;
};

WFamily w_derivatives(const BackwardExponent& be, const GridSpec& grid, int N_max, const InversionOptions& opt = {});

// W'(x; gamma) = exp(phi_r(gamma) - gamma x) W'(x), normalized to unit mass
std::vector<double> esscher_tilt_density(const WFamily& wf, double gamma, double phi_r_gamma);

void write_csv(std::ostream& os, const WFamily& wf);

// Sign changes ignoring values below rel_threshold * max |v|.
int count_sign_changes(const std::vector<double>& v, double rel_threshold = 1e-6);

}  // namespace ouruin
