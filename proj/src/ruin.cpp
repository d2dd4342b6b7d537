#include "ouruin/ruin.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "ouruin/detail/quadrature.hpp"
#include "ouruin/errors.hpp"

namespace ouruin {

namespace {

GridSpec covering(GridSpec grid, double x) {
  grid.validate();
  int need = static_cast<int>(std::ceil(x / grid.h)) + 2;
  grid.M = std::max(grid.M, need);
  return grid;
}

void require_xi0(const BackwardExponent& be, const char* where) {
  if (be.xi() != 0)
    throw UnsupportedError(fmt::format("{}: finite-time ruin needs a finite log-moment (xi = 0)", where));
}

}  // namespace

TimeHorizon TimeHorizon::finite(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("TimeHorizon: t must be finite and nonnegative");
  return TimeHorizon{t, false};
}

double finite_time_ruin(const BackwardExponent& be, double x_eff, double t, GridSpec grid, const InversionOptions& opt) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("finite_time_ruin: t must be finite and nonnegative");
  if (!(x_eff > 0.0)) return 1.0;
  require_xi0(be, "finite_time_ruin");
  if (t == 0.0) return 0.0;
  grid = covering(grid, x_eff);
  CdfTable cdf = dual_cdf(be, t, grid, opt);
  return std::clamp(1.0 - cdf.value(x_eff), 0.0, 1.0);
}

double finite_time_ruin(const RuinQuery& q, const GridSpec& grid, const InversionOptions& opt) {
  if (q.horizon.infinite) throw DomainError("finite_time_ruin: horizon is infinite; use infinite_time_ruin");
  return finite_time_ruin(BackwardExponent(q.model, q.params.r), q.x_eff(), q.horizon.t, grid, opt);
}

CdfTable finite_time_survival_curve(const BackwardExponent& be, double t, const GridSpec& grid,
                                    const InversionOptions& opt) {
  require_xi0(be, "finite_time_survival_curve");
  return dual_cdf(be, t, grid, opt);
}

double infinite_time_ruin(const BackwardExponent& be, double x_eff, const WFamily& wf) {
  if (!be.model().log_moment_finite()) return 1.0;
  if (!(x_eff > 0.0)) return 1.0;
  double end = wf.x().back();
  if (x_eff > end + 1e-12 * end)
    throw DomainError(fmt::format("infinite_time_ruin: x_eff={:.6g} lies beyond the tabulated W (end {:.6g})", x_eff, end));
  return std::clamp(1.0 - wf.value(0, std::min(x_eff, end)), 0.0, 1.0);
}

double infinite_time_ruin(const RuinQuery& q, const WFamily& wf) {
  return infinite_time_ruin(wf.backward_exponent(), q.x_eff(), wf);
}

double infinite_time_ruin(const RuinQuery& q, GridSpec grid, const InversionOptions& opt) {
  if (!q.model.log_moment_finite() || !(q.x_eff() > 0.0)) return 1.0;
  BackwardExponent be(q.model, q.params.r);
  grid = covering(grid, q.x_eff());
  return infinite_time_ruin(be, q.x_eff(), w_derivatives(be, grid, 0, opt));
}

double exp_initial_survival(const BackwardExponent& be, double beta, TimeHorizon horizon) {
  if (!(beta > 0.0)) throw DomainError("exp_initial_survival: beta must be positive");
  if (horizon.infinite) return be.xi() != 0 ? 0.0 : std::exp(-be(beta));
  if (horizon.t == 0.0) return 1.0;
  double lo = beta * std::exp(-be.r() * horizon.t);
  if (be.xi() == 0) return std::exp(-(be(beta) - be(lo)));
  const LevyModel& m = be.model();
  double integral = detail::integrate([&](double u) { return m.phi(u) / u; }, lo, beta, 1e-11);
  return std::exp(-integral / be.r());
}

}  // namespace ouruin
