#include "ouruin/spectral.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "ouruin/errors.hpp"
#include "ouruin/special_functions.hpp"

namespace ouruin {

double t_alpha(double alpha, double r) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("t_alpha: alpha must lie in (0,1)");
  if (!(r > 0.0)) throw DomainError("t_alpha: r must be positive");
  return -std::log(std::cos(std::numbers::pi * alpha / 2.0)) / (r * alpha);
}

std::vector<double> mu_coefficients(const BackwardExponent& be, int N) {
  if (N < 0) throw DomainError("mu_coefficients: N must be nonnegative");
  std::vector<double> mu(static_cast<std::size_t>(N) + 1, 0.0);
  mu[0] = 1.0;
  if (N == 0) return mu;
  std::vector<double> c = be.taylor_coeffs(N);
  for (int n = 1; n <= N; ++n) {
    CompensatedSum<long double> s;
    for (int k = 1; k <= n; ++k)
      s.add(static_cast<long double>(k) * c[static_cast<std::size_t>(k - 1)] * mu[static_cast<std::size_t>(n - k)]);
    mu[static_cast<std::size_t>(n)] = static_cast<double>(s.value() / n);
  }
  return mu;
}

SpectralSeries::SpectralSeries(WFamily wf, int N, std::optional<double> alpha)
    : wf_(std::move(wf)), alpha_(alpha ? alpha : wf_.model().tail_index()), t_alpha_(0.0) {
  if (N < 0) throw DomainError("SpectralSeries: N must be nonnegative");
  if (N > wf_.max_order())
    throw DomainError(fmt::format("SpectralSeries: W family tabulates derivatives to order {}, {} requested",
                                  wf_.max_order(), N));
  if (alpha_) {
    t_alpha_ = ouruin::t_alpha(*alpha_, wf_.r());
  } else if (!std::isfinite(wf_.model().total_mass())) {
    throw UnsupportedError("SpectralSeries: model has no tail index; supply alpha");
  }
  mu_ = mu_coefficients(wf_.backward_exponent(), N);
}

void SpectralSeries::check(double t, int N, bool force) const {
  if (N < 0 || N > max_order())
    throw DomainError(fmt::format("survival_series: order {} outside 0..{}", N, max_order()));
  if (!(t >= 0.0)) throw DomainError("survival_series: t must be nonnegative");
  if (t <= t_alpha_ && !force)
    throw DomainError(fmt::format("survival_series: t={:.6g} is not above t_alpha={:.6g}; the series need not converge",
                                  t, t_alpha_));
}

double SpectralSeries::partial_sum(double x, double t, int N, bool force) const {
  check(t, N, force);
  CompensatedSum<double> s;
  for (int n = 0; n <= N; ++n)
    s.add(mu_[static_cast<std::size_t>(n)] * wf_.value(n, x) * std::exp(-wf_.r() * n * t));
  return s.value();
}

std::vector<double> SpectralSeries::partial_sums(double t, int N, bool force) const {
  check(t, N, force);
  const GridSpec& g = wf_.grid();
  std::vector<double> out(static_cast<std::size_t>(g.M) + 1);
  const std::size_t i0 = g.index_of_zero();
  for (std::size_t i = 0; i < out.size(); ++i) {
    CompensatedSum<double> s;
    for (int n = 0; n <= N; ++n)
      s.add(mu_[static_cast<std::size_t>(n)] * wf_.derivative(n)[i0 + i] * std::exp(-wf_.r() * n * t));
    out[i] = s.value();
  }
  return out;
}

double survival_series(const SpectralSeries& s, double x, double t, int N, bool force) {
  return s.partial_sum(x, t, N, force);
}

std::vector<double> reference_survival(const BackwardExponent& be, double t, const GridSpec& grid, CumulativeRule rule) {
  InversionOptions opt;
  opt.rule = rule;
  CdfTable cdf = dual_cdf(be, t, grid, opt);
  return std::vector<double>(cdf.cdf.begin() + static_cast<std::ptrdiff_t>(grid.index_of_zero()), cdf.cdf.end());
}

double TruncationErrorReport::at(int N, double t) const {
  for (std::size_t i = 0; i < N_values.size(); ++i)
    for (std::size_t j = 0; j < t_values.size(); ++j)
      if (N_values[i] == N && t_values[j] == t) return e[i][j];
  throw DomainError(fmt::format("TruncationErrorReport: no cell (N={}, t={})", N, t));
}

void TruncationErrorReport::write_csv(std::ostream& os) const {
  os << "N,t,e\n";
  for (std::size_t i = 0; i < N_values.size(); ++i)
    for (std::size_t j = 0; j < t_values.size(); ++j) os << fmt::format("{},{:g},{:.6f}\n", N_values[i], t_values[j], e[i][j]);
}

void TruncationErrorReport::write_table(std::ostream& os) const {
  os << fmt::format("{:>6} |", "N \\ t");
  for (double t : t_values) os << fmt::format(" {:>10g}", t);
  os << '\n';
  for (std::size_t i = 0; i < N_values.size(); ++i) {
    os << fmt::format("{:>6} |", N_values[i]);
    for (std::size_t j = 0; j < t_values.size(); ++j) os << fmt::format(" {:>10.3f}", e[i][j]);
    os << '\n';
  }
}

TruncationErrorReport truncation_error_table(const SpectralSeries& s, const ReferenceFn& reference,
                                             const std::vector<int>& N_values, const std::vector<double>& t_values,
                                             bool force) {
  TruncationErrorReport rep{N_values, t_values, std::vector<std::vector<double>>(N_values.size(),
                                                                                 std::vector<double>(t_values.size()))};
  for (std::size_t j = 0; j < t_values.size(); ++j) {
    std::vector<double> ref = reference(t_values[j]);
    for (std::size_t i = 0; i < N_values.size(); ++i) {
      std::vector<double> ps = s.partial_sums(t_values[j], N_values[i], force);
      if (ref.size() != ps.size()) throw DomainError("truncation_error_table: reference has the wrong number of nodes");
      double e = 0.0;
      for (std::size_t k = 0; k < ps.size(); ++k) e = std::max(e, std::abs(ref[k] - ps[k]));
      rep.e[i][j] = e;
    }
  }
  return rep;
}

double eigenmeasure_check(const SpectralSeries& s, int n, double t, const InversionOptions& opt) {
  const WFamily& wf = s.w_family();
  if (n < 0 || n + 1 > wf.max_order()) throw DomainError("eigenmeasure_check: derivative order not tabulated");
  const GridSpec& g = wf.grid();
  const auto& x = wf.x();
  const auto& d = wf.derivative(n + 1);
  const double v = std::exp(-wf.r() * t);
  const double rhs_scale = std::exp(-wf.r() * n * t);
  const double y_max = std::max(v * x.back(), 2.0 * g.h);

  if (t == 0.0) return 0.0;
  DensityTable p = dual_density(wf.backward_exponent(), t, g, opt);
  double res = 0.0;
  for (std::size_t iy = g.index_of_zero(); iy < x.size() && x[iy] <= y_max + 1e-12; ++iy) {
    const double y = x[iy];
    CompensatedSum<double> lhs;
    for (std::size_t j = 0; j < x.size(); ++j) {
      double w = (j == 0 || j + 1 == x.size()) ? 0.5 * g.h : g.h;
      double z = y - x[j] * v;
      if (z < 0.0) continue;
      lhs.add(w * p.at(z) * d[j]);
    }
    if (p.atom > 0.0) lhs.add(p.atom * wf.value(n + 1, y / v) / v);
    res = std::max(res, std::abs(lhs.value() - rhs_scale * d[iy]));
  }
  return res;
}

}  // namespace ouruin
