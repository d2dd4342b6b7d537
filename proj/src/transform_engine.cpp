#include "ouruin/transform_engine.hpp"

#include <fftw3.h>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>

#include "ouruin/errors.hpp"

namespace ouruin {

using cplx = std::complex<double>;
using std::numbers::pi;

namespace {

constexpr std::size_t kMaxFft = std::size_t{1} << 22;

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t next_pow2(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

bool is_pow2(std::size_t v) { return v && !(v & (v - 1)); }

double choose_u_max(const std::function<double(double)>& envelope, double target, double u_cap) {
  for (double u = 0.5; u < u_cap; u *= 1.25) {
    bool ok = true;
    for (double m : {1.0, 1.25, 1.5, 2.0})
      if (!(envelope(u * m) <= target)) {
        ok = false;
        break;
      }
    if (ok) return u;
  }
  return u_cap;
}

// Inverse transform of samples f_k = f(k du), k < n/2, onto the window x0 + j dx.
std::vector<double> fourier_invert(const std::vector<cplx>& samples, const FourierPlan& plan) {
  const std::size_t n = plan.n;
  auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
  auto* out = static_cast<double*>(fftw_malloc(sizeof(double) * n));
  if (!in || !out) throw std::bad_alloc();
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> in_guard(in, fftw_free);
  std::unique_ptr<double, decltype(&fftw_free)> out_guard(out, fftw_free);
  fftw_plan p;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    p = fftw_plan_dft_c2r_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  const double scale = plan.du / (2.0 * pi);
  for (std::size_t k = 0; k < n / 2; ++k) {
    double u = static_cast<double>(k) * plan.du;
    cplx c = samples[k] * std::polar(scale, u * plan.x0);
    in[k][0] = c.real();
    in[k][1] = c.imag();
  }
  in[n / 2][0] = 0.0;
  in[n / 2][1] = 0.0;
  fftw_execute(p);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(p);
  }
  return std::vector<double>(out, out + n);
}

std::size_t fine_index(const FourierPlan& plan, double x) {
  return static_cast<std::size_t>(std::llround((x - plan.x0) / plan.dx));
}

std::vector<double> undamp(std::vector<double> g, const FourierPlan& plan, double d) {
  if (d > 0.0)
    for (std::size_t j = 0; j < g.size(); ++j) g[j] *= std::exp(d * plan.x(j));
  return g;
}

// Fourth-order integral over [x_j, x_{j+1}] from a cubic through four neighbours.
double cell_integral(const std::vector<double>& f, std::size_t j, double dx) {
  if (j == 0 || j + 2 >= f.size()) return 0.5 * dx * (f[j] + f[j + 1]);
  return dx / 24.0 * (13.0 * (f[j] + f[j + 1]) - f[j - 1] - f[j + 2]);
}

void check_decay(double tail, double tol, double u_max) {
  if (!(tail <= tol))
    throw AccuracyError(fmt::format("characteristic function has not decayed at u_max={:.6g} (|f|={:.3g} > {:.3g}); "
                                    "increase u_max",
                                    u_max, tail, tol));
}

// Cumulative distribution on the user grid from a fine-window density.
double hermite(double y0, double y1, double d0, double d1, double h, double w) {
  double w2 = w * w, w3 = w2 * w;
  return (2 * w3 - 3 * w2 + 1) * y0 + (w3 - 2 * w2 + w) * h * d0 + (-2 * w3 + 3 * w2) * y1 + (w3 - w2) * h * d1;
}

// quadratic matching y0, y1 and the slope d1 at the right end; the left slope may be unbounded
double boundary_quadratic(double y0, double y1, double d1, double h, double w) {
  double c = d1 * h - (y1 - y0);
  return std::clamp(y0 + (y1 - y0) * w + c * w * (w - 1.0), std::min(y0, y1), std::max(y0, y1));
}

CdfTable cumulate(const std::vector<double>& density, double atom, const FourierPlan& plan, const GridSpec& grid,
                  const InversionOptions& opt) {
  const std::size_t m = grid.size();
  CdfTable out;
  out.x.resize(m);
  out.cdf.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) out.x[i] = grid.x(i);

  if (opt.rule == CumulativeRule::right_rectangle) {
    std::size_t start = opt.nonnegative ? grid.index_of_zero() : 0;
    double acc = 0.0;
    for (std::size_t i = start; i < m; ++i) {
      acc += grid.h * density[fine_index(plan, grid.x(i))];
      out.cdf[i] = acc + atom;
    }
  } else {
    std::size_t j_start = opt.nonnegative ? fine_index(plan, 0.0) : 0;
    std::size_t j = j_start;
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t ji = fine_index(plan, grid.x(i));
      if (ji < j_start) continue;
      for (; j < ji; ++j) acc += cell_integral(density, j, plan.dx);
      out.cdf[i] = acc + atom;
    }
  }
  double run = 0.0, viol = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 0) viol = std::max(viol, out.cdf[i - 1] - out.cdf[i]);
    double v = std::clamp(out.cdf[i], 0.0, 1.0);
    run = std::max(run, v);
    out.cdf[i] = run;
  }
  out.max_monotonicity_violation = viol;
  if (opt.nonnegative) out.support_min = 0.0;
  if (opt.rule == CumulativeRule::trapezoid) {
    out.density.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.density[i] = density[fine_index(plan, grid.x(i))];
  }
  return out;
}

}  // namespace

void GridSpec::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("GridSpec: h must be positive");
  if (M < 1) throw DomainError("GridSpec: M must be >= 1");
  if (u_max < 0.0) throw DomainError("GridSpec: u_max must be positive (or 0 for adaptive)");
  if (n_freq != 0) {
    if (!is_pow2(n_freq)) throw DomainError("GridSpec: n_freq must be a power of two");
    if (n_freq < 2 * static_cast<std::size_t>(M + 1)) throw DomainError("GridSpec: n_freq must be >= 2(M+1)");
  }
}

int GridSpec::n_neg() const {
  double xn = x_neg < 0.0 ? 5.0 * h : x_neg;
  return static_cast<int>(std::ceil(xn / h - 1e-9));
}

FourierPlan make_plan(const GridSpec& grid, const std::function<double(double)>& envelope, double target,
                      double window_factor) {
  grid.validate();
  const double span = static_cast<double>(grid.n_neg() + grid.M) * grid.h;
  double u_max = grid.u_max;
  if (u_max == 0.0) {
    double u_cap = pi * static_cast<double>(kMaxFft) / (window_factor * span);
    u_cap = std::max(u_cap, pi / grid.h);
    u_max = choose_u_max(envelope, target, u_cap);
  }
  FourierPlan plan{};
  plan.oversample = std::max(1, static_cast<int>(std::ceil(u_max * grid.h / pi - 1e-9)));
  plan.dx = grid.h / plan.oversample;
  plan.u_max = pi / plan.dx;
  if (grid.n_freq != 0) {
    plan.n = grid.n_freq;
    if (static_cast<double>(plan.n) * plan.dx < 1.25 * span)
      throw DomainError(fmt::format("GridSpec: n_freq={} too small for the grid span at u_max={:.6g}", plan.n, plan.u_max));
  } else {
    std::size_t need = static_cast<std::size_t>(std::ceil(window_factor * span / plan.dx));
    plan.n = std::min(kMaxFft, next_pow2(std::max<std::size_t>(16 * static_cast<std::size_t>(grid.M + 1), need)));
    if (static_cast<double>(plan.n) * plan.dx < 1.25 * span)
      throw DomainError("GridSpec: grid span too large for the frequency cutoff; reduce u_max or M");
  }
  const double L = static_cast<double>(plan.n) * plan.dx;
  plan.du = 2.0 * pi / L;
  double pad = std::floor((L - span) / 4.0 / plan.dx) * plan.dx;
  plan.x0 = -grid.n_neg() * grid.h - pad;
  return plan;
}

double DensityTable::at(double x) const {
  double pos = (x - plan.x0) / plan.dx;
  if (pos < 0.0 || pos > static_cast<double>(density.size() - 1)) return 0.0;
  std::size_t j = static_cast<std::size_t>(pos);
  if (j + 1 >= density.size()) return density.back();
  double w = pos - static_cast<double>(j);
  return density[j] * (1.0 - w) + density[j + 1] * w;
}

double CdfTable::value(double xv) const {
  if (xv < support_min) return 0.0;
  if (xv <= x.front()) return cdf.front();
  if (xv >= x.back()) return cdf.back();
  double h = x[1] - x[0];
  std::size_t j = static_cast<std::size_t>((xv - x.front()) / h);
  j = std::min(j, x.size() - 2);
  double w = (xv - x[j]) / h;
  if (!density.empty() && x[j] > support_min + 0.5 * h)
    return std::clamp(hermite(cdf[j], cdf[j + 1], density[j], density[j + 1], h, w), cdf[j], cdf[j + 1]);
  if (!density.empty() && x[j] > support_min - 0.5 * h) return boundary_quadratic(cdf[j], cdf[j + 1], density[j + 1], h, w);
  return cdf[j] + w * (cdf[j + 1] - cdf[j]);
}

cplx dual_char_function(const BackwardExponent& be, double t, double u) {
  if (t < 0.0) throw DomainError("dual_char_function: t must be nonnegative");
  if (u == 0.0 || t == 0.0) return 1.0;
  cplx z(0.0, u);
  return std::exp(be(z * std::exp(-be.r() * t)) - be(z));
}

static double damping_for(const InversionOptions& opt, const LevyModel& model, const GridSpec& grid) {
  if (opt.damping >= 0.0) return opt.damping;
  auto m1 = model.nu_moment(1);
  if (m1 && std::isfinite(*m1)) return 0.0;
  return 12.0 / (static_cast<double>(grid.n_neg() + grid.M) * grid.h);
}

DensityTable invert_to_density(const CharFn& f, const GridSpec& grid, const InversionOptions& opt) {
  auto env = [&](double u) { return std::abs(f(u) - opt.atom_at_zero); };
  FourierPlan plan = make_plan(grid, env, opt.target);
  std::vector<cplx> samples(plan.n / 2);
  for (std::size_t k = 0; k < plan.n / 2; ++k) samples[k] = f(static_cast<double>(k) * plan.du) - opt.atom_at_zero;
  check_decay(std::abs(samples.back()), opt.decay_tol, plan.u_max);
  DensityTable d{plan, fourier_invert(samples, plan), opt.atom_at_zero};
  return d;
}

CdfTable density_to_cdf(const DensityTable& d, const GridSpec& grid, const InversionOptions& opt) {
  return cumulate(d.density, d.atom, d.plan, grid, opt);
}

CdfTable invert_to_cdf(const CharFn& f, const GridSpec& grid, const InversionOptions& opt) {
  return density_to_cdf(invert_to_density(f, grid, opt), grid, opt);
}

DensityTable dual_density(const BackwardExponent& be, double t, const GridSpec& grid, InversionOptions opt) {
  if (t < 0.0) throw DomainError("dual_density: t must be nonnegative");
  double lambda = be.model().total_mass();
  opt.nonnegative = true;
  if (t == 0.0) {
    FourierPlan plan = make_plan(grid, [](double) { return 0.0; }, 1.0);
    return DensityTable{plan, std::vector<double>(plan.n, 0.0), 1.0};
  }
  const double atom = std::isfinite(lambda) ? std::exp(-lambda * t) : 0.0;
  const double d = damping_for(opt, be.model(), grid);
  const double decay = std::exp(-be.r() * t);
  auto f = [&](double u) {
    cplx z(d, u);
    return std::exp(be(z * decay) - be(z)) - atom;
  };
  FourierPlan plan = make_plan(grid, [&](double u) { return std::abs(f(u)); }, opt.target);
  std::vector<cplx> samples(plan.n / 2);
  for (std::size_t k = 0; k < plan.n / 2; ++k) samples[k] = f(static_cast<double>(k) * plan.du);
  check_decay(std::abs(samples.back()), opt.decay_tol, plan.u_max);
  return DensityTable{plan, undamp(fourier_invert(samples, plan), plan, d), atom};
}

CdfTable dual_cdf(const BackwardExponent& be, double t, const GridSpec& grid, InversionOptions opt) {
  DensityTable d = dual_density(be, t, grid, opt);
  opt.nonnegative = true;
  return density_to_cdf(d, grid, opt);
}

WFamily::WFamily(GridSpec grid, BackwardExponent be, std::vector<std::vector<double>> derivs, FourierPlan plan,
                 double mass_below_zero, double max_violation)
    : grid_(grid),
      be_(std::move(be)),
      derivs_(std::move(derivs)),
      plan_(plan),
      mass_below_zero_(mass_below_zero),
      max_violation_(max_violation) {
  x_.resize(grid_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) x_[i] = grid_.x(i);
}

const std::vector<double>& WFamily::derivative(int order) const {
  if (order < 0 || order > max_order())
    throw DomainError(fmt::format("WFamily: derivative order {} not tabulated (max {})", order, max_order()));
  return derivs_[static_cast<std::size_t>(order)];
}

double WFamily::value(int order, double xv) const {
  const auto& v = derivative(order);
  if (xv < x_.front()) return 0.0;
  if (xv >= x_.back()) return order == 0 ? v.back() : (xv == x_.back() ? v.back() : 0.0);
  double pos = (xv - x_.front()) / grid_.h;
  std::size_t j = std::min(static_cast<std::size_t>(pos), x_.size() - 2);
  double w = pos - static_cast<double>(j);
  if (order < max_order() && x_[j] > -0.5 * grid_.h) {
    const auto& d = derivative(order + 1);
    // W^{(k+1)} ~ x^{lambda/r - k - 1} at 0, so the left slope is only usable when that power is positive
    bool smooth_start = be_.model().total_mass() / be_.r() > order + 1;
    if (x_[j] < 0.5 * grid_.h && !smooth_start) return boundary_quadratic(v[j], v[j + 1], d[j + 1], grid_.h, w);
    return hermite(v[j], v[j + 1], d[j], d[j + 1], grid_.h, w);
  }
  return v[j] * (1.0 - w) + v[j + 1] * w;
}

WFamily w_derivatives(const BackwardExponent& be, const GridSpec& grid, int N_max, const InversionOptions& opt) {
  if (N_max < 0) throw DomainError("w_derivatives: N_max must be >= 0");
  if (be.xi() != 0) throw UnsupportedError("w_derivatives: W is not defined for models with infinite log-moment (xi = 1)");
  double lambda = be.model().total_mass();
  if (std::isfinite(lambda) && !(lambda / be.r() > N_max))
    throw UnsupportedError(fmt::format("w_derivatives: derivatives up to order {} need nu(0,inf)/r > {} (have {:.6g})",
                                       N_max + 1, N_max, lambda / be.r()));

  const double d = damping_for(opt, be.model(), grid);
  auto base = [&](double u) { return std::exp(-be(cplx(d, u))); };
  auto env = [&](double u) { return std::abs(base(u)) * std::pow(std::hypot(d, u), N_max); };
  FourierPlan plan = make_plan(grid, env, opt.target);

  std::vector<cplx> b(plan.n / 2);
  for (std::size_t k = 0; k < plan.n / 2; ++k) b[k] = base(static_cast<double>(k) * plan.du);

  const std::size_t m = grid.size();
  std::vector<std::vector<double>> derivs(static_cast<std::size_t>(N_max) + 2, std::vector<double>(m, 0.0));
  double mass_below = 0.0, viol = 0.0;
  std::vector<cplx> s(plan.n / 2);
  for (int n = 0; n <= N_max; ++n) {
    for (std::size_t k = 0; k < plan.n / 2; ++k) {
      double u = static_cast<double>(k) * plan.du;
      s[k] = std::pow(cplx(d, u), n) * b[k];
    }
    check_decay(std::abs(s.back()), opt.decay_tol, plan.u_max);
    std::vector<double> dens = undamp(fourier_invert(s, plan), plan, d);
    for (std::size_t i = 0; i < m; ++i) derivs[static_cast<std::size_t>(n) + 1][i] = dens[fine_index(plan, grid.x(i))];
    if (n == 0) {
      InversionOptions o = opt;
      o.nonnegative = true;
      o.rule = CumulativeRule::trapezoid;
      CdfTable w = cumulate(dens, 0.0, plan, grid, o);
      derivs[0] = w.cdf;
      viol = w.max_monotonicity_violation;
      std::size_t j0 = fine_index(plan, 0.0);
      for (std::size_t j = 0; j < j0; ++j) mass_below += cell_integral(dens, j, plan.dx);
    }
  }
  return WFamily(grid, be, std::move(derivs), plan, mass_below, viol);
}

std::vector<double> esscher_tilt_density(const WFamily& wf, double gamma, double phi_r_gamma) {
  if (gamma < 0.0) throw DomainError("esscher_tilt_density: gamma must be nonnegative");
  const auto& d = wf.derivative(1);
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = wf.x()[i] < 0.0 ? 0.0 : std::exp(phi_r_gamma - gamma * wf.x()[i]) * d[i];
  return out;
}

void write_csv(std::ostream& os, const WFamily& wf) {
  os << "x,W";
  for (int k = 1; k <= wf.max_order(); ++k) os << ",W" << k;
  os << '\n';
  for (std::size_t i = 0; i < wf.x().size(); ++i) {
    os << fmt::format("{:.10g}", wf.x()[i]);
    for (int k = 0; k <= wf.max_order(); ++k) os << ',' << fmt::format("{:.12g}", wf.derivative(k)[i]);
    os << '\n';
  }
}

int count_sign_changes(const std::vector<double>& v, double rel_threshold) {
  double mx = 0.0;
  for (double a : v) mx = std::max(mx, std::abs(a));
  double thr = rel_threshold * mx;
  int changes = 0, last = 0;
  for (double a : v) {
    if (std::abs(a) <= thr) continue;
    int s = a > 0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace ouruin
