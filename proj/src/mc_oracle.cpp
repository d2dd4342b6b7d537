#include "ouruin/mc_oracle.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>
#include <type_traits>
#include <variant>

#include "ouruin/errors.hpp"
#include "ouruin/special_functions.hpp"

namespace ouruin {

namespace {

using Rng = std::mt19937_64;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform_open(Rng& g) {
  for (;;) {
    double u = std::generate_canonical<double, 64>(g);
    if (u > 0.0 && u < 1.0) return u;
  }
}

double exponential(Rng& g) { return -std::log(uniform_open(g)); }

// Positive stable with Laplace transform exp(-s^alpha).
double positive_stable(double alpha, Rng& g) {
  double u = std::numbers::pi * uniform_open(g);
  double e = exponential(g);
  double a = std::pow(std::sin(alpha * u) / std::sin(u), 1.0 / (1.0 - alpha)) * std::sin((1.0 - alpha) * u) /
             std::sin(alpha * u);
  return std::pow(a / e, (1.0 - alpha) / alpha);
}

// Jumps of size >= eps (all jumps for finite activity), arriving at rate `rate`.
struct JumpSampler {
  double rate = 0.0;
  double drift = 0.0;
  std::function<double(Rng&)> draw;
};

double invert_tail(const LevyModel& m, double lo, double level) {
  double hi = std::max(1.0, 2.0 * lo);
  for (int i = 0; m.tail(hi) > level; ++i) {
    if (i > 200) throw AccuracyError("jump sampler: tail does not decay");
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    (m.tail(mid) > level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

JumpSampler make_sampler(const LevyModel& model, const SimConfig& cfg) {
  const double mass = model.total_mass();
  double eps = 0.0;
  if (!std::isfinite(mass)) {
    if (!cfg.small_jump_cutoff)
      throw ConfigError("simulation: " + model.family_name() + " has infinite activity and needs small_jump_cutoff");
    eps = *cfg.small_jump_cutoff;
  }
  JumpSampler s;
  if (eps > 0.0 && cfg.drift_compensation) s.drift = model.small_jump_mean(eps);

  return std::visit(
      [&](const auto& f) -> JumpSampler {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialJumps>) {
          s.rate = f.eta;
          double d = f.delta;
          s.draw = [d](Rng& g) { return exponential(g) / d; };
        } else if constexpr (std::is_same_v<T, Linnik>) {
          s.rate = f.eta;
          double d = f.delta, a = f.alpha;
          if (a == 1.0)
            s.draw = [d](Rng& g) { return exponential(g) / d; };
          else
            s.draw = [d, a](Rng& g) { return std::pow(exponential(g) / d, 1.0 / a) * positive_stable(a, g); };
        } else if constexpr (std::is_same_v<T, Stable> || std::is_same_v<T, TruncatedStable>) {
          s.rate = model.tail(eps);
          double a = f.alpha;
          double cap = kInf;
          if constexpr (std::is_same_v<T, TruncatedStable>) cap = f.A;
          if (eps >= cap) {
            s.rate = 0.0;
          } else {
            s.draw = [eps, a, cap](Rng& g) { return std::min(cap, eps * std::pow(uniform_open(g), -1.0 / a)); };
          }
        } else if constexpr (std::is_same_v<T, Esscher>) {
          SimConfig base_cfg = cfg;
          base_cfg.drift_compensation = false;
          if (!std::isfinite(f.base->total_mass()) && !base_cfg.small_jump_cutoff)
            throw ConfigError("simulation: Esscher base has infinite activity and needs small_jump_cutoff");
          JumpSampler b = make_sampler(*f.base, base_cfg);
          // P(J > y | J > eps) = e^{-gamma (y - eps)} tail_base(y) / tail_base(eps)
          s.rate = std::exp(-f.gamma * eps) * b.rate;
          double gamma = f.gamma;
          auto base_draw = b.draw;
          s.draw = [gamma, eps, base_draw](Rng& g) { return std::min(base_draw(g), eps + exponential(g) / gamma); };
        } else {
          s.rate = std::isfinite(mass) ? mass : model.tail(eps);
          double rate = s.rate, lo = eps;
          const LevyModel* m = &model;
          s.draw = [m, rate, lo](Rng& g) { return invert_tail(*m, lo, uniform_open(g) * rate); };
        }
        return s;
      },
      model.family());
}

// Y = X + c/r between jumps: dY = (rY - drift) ds.
struct Flow {
  double r, k;

  double advance(double y, double dt) const { return (y - k) * std::exp(r * dt) + k; }
  // time to reach level b from y, inf if never
  double hit(double y, double b) const {
    if (y == b) return 0.0;
    if (b > y) return y > k ? std::log((b - k) / (y - k)) / r : kInf;
    return y < k ? std::log((k - b) / (k - y)) / r : kInf;
  }
};

template <class F>
void parallel_paths(std::int64_t n, unsigned threads, F&& work) {
  unsigned nt = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  nt = static_cast<unsigned>(std::min<std::int64_t>(nt, std::max<std::int64_t>(1, n / 256)));
  if (nt <= 1) {
    for (std::int64_t i = 0; i < n; ++i) work(i);
    return;
  }
  std::vector<std::jthread> pool;
  std::exception_ptr failure;
  std::mutex mu;
  for (unsigned k = 0; k < nt; ++k)
    pool.emplace_back([&, k] {
      try {
        for (std::int64_t i = k; i < n; i += nt) work(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    });
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

PathRecord run_path(const JumpSampler& js, double r, double c, double x, double horizon, std::int64_t id,
                    std::uint64_t seed, std::optional<double> exit_level, bool record) {
  Rng g(path_seed(seed, id));
  const double shift = c / r;
  const Flow flow{r, js.drift / r};
  const double b = exit_level ? *exit_level + shift : kInf;
  PathRecord rec;
  rec.path_id = id;
  double y = x + shift;
  double s = 0.0;
  auto finish = [&](double time, EventType type, double value) {
    rec.terminal = value - shift;
    if (record) rec.events.push_back({time, type, rec.terminal});
    if (type == EventType::ruin) rec.ruin_time = time;
    if (type == EventType::exit) rec.exit_time = time;
  };
  if (y < 0.0) {
    finish(0.0, EventType::ruin, y);
    return rec;
  }
  if (y >= b) {
    finish(0.0, EventType::exit, y);
    return rec;
  }
  for (;;) {
    double dt = js.rate > 0.0 ? exponential(g) / js.rate : kInf;
    double t_next = s + dt;
    double t_ruin = s + flow.hit(y, 0.0);
    double t_exit = s + flow.hit(y, b);
    double t_stop = std::min({t_next, t_ruin, t_exit, horizon});
    if (t_stop == horizon && horizon < std::min({t_next, t_ruin, t_exit})) {
      finish(horizon, EventType::horizon, flow.advance(y, horizon - s));
      return rec;
    }
    if (t_exit <= t_stop) {
      finish(t_exit, EventType::exit, b);
      return rec;
    }
    if (t_ruin <= t_stop) {
      finish(t_ruin, EventType::ruin, 0.0);
      return rec;
    }
    double before = flow.advance(y, t_next - s);
    s = t_next;
    y = before - js.draw(g);
    if (y < 0.0) {
      finish(s, EventType::ruin, y);
      return rec;
    }
    if (record) rec.events.push_back({s, EventType::jump, y - shift});
  }
}

void check_r(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("simulation: r must be positive");
}

}  // namespace

void SimConfig::validate() const {
  if (n_paths < 1) throw ConfigError("SimConfig: n_paths must be at least 1");
  if (!(horizon > 0.0)) throw ConfigError("SimConfig: horizon must be positive");
  if (small_jump_cutoff && !(*small_jump_cutoff > 0.0))
    throw ConfigError("SimConfig: small_jump_cutoff must be positive");
}

std::uint64_t path_seed(std::uint64_t seed, std::int64_t path) {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(path));
}

PathRecord simulate_risk_path(const LevyModel& model, const ProcessParams& p, double x, const SimConfig& cfg,
                              std::int64_t path_id, std::optional<double> exit_level, bool record_events) {
  cfg.validate();
  check_r(p.r);
  JumpSampler js = make_sampler(model, cfg);
  return run_path(js, p.r, p.c, x, cfg.horizon, path_id, cfg.seed, exit_level, record_events);
}

MCEstimate summarize(const std::vector<double>& values) {
  MCEstimate e;
  e.n_effective = static_cast<std::int64_t>(values.size());
  if (values.empty()) return e;
  CompensatedSum<double> s1;
  for (double v : values) s1.add(v);
  const double n = static_cast<double>(values.size());
  e.mean = s1.value() / n;
  if (values.size() < 2) return e;
  CompensatedSum<double> s2;
  for (double v : values) s2.add((v - e.mean) * (v - e.mean));
  e.std_error = std::sqrt(s2.value() / (n - 1.0) / n);
  return e;
}

MCEstimate estimate_finite_time_ruin(const LevyModel& model, const ProcessParams& p, double x, double t,
                                     const SimConfig& cfg) {
  cfg.validate();
  check_r(p.r);
  if (!(t >= 0.0)) throw DomainError("estimate_finite_time_ruin: t must be nonnegative");
  const double x_eff = x + p.c / p.r;
  if (x_eff < 0.0) return {1.0, 0.0, cfg.n_paths};
  if (t == 0.0) return {0.0, 0.0, cfg.n_paths};
  JumpSampler js = make_sampler(model, cfg);
  std::vector<double> hit(static_cast<std::size_t>(cfg.n_paths));
  parallel_paths(cfg.n_paths, cfg.threads, [&](std::int64_t i) {
    PathRecord rec = run_path(js, p.r, p.c, x, t, i, cfg.seed, std::nullopt, false);
    hit[static_cast<std::size_t>(i)] = rec.ruin_time && *rec.ruin_time <= t ? 1.0 : 0.0;
  });
  MCEstimate e = summarize(hit);
  e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(cfg.n_paths));
  return e;
}

std::vector<double> sample_dual_integral(const LevyModel& model, double r, double t, const SimConfig& cfg) {
  cfg.validate();
  check_r(r);
  if (!(t >= 0.0)) throw DomainError("sample_dual_integral: t must be nonnegative");
  std::vector<double> out(static_cast<std::size_t>(cfg.n_paths), 0.0);
  if (t == 0.0) return out;
  JumpSampler js = make_sampler(model, cfg);
  const double drift_part = js.drift * -std::expm1(-r * t) / r;
  parallel_paths(cfg.n_paths, cfg.threads, [&](std::int64_t i) {
    Rng g(path_seed(cfg.seed, i));
    CompensatedSum<double> acc;
    acc.add(drift_part);
    if (js.rate > 0.0) {
      double s = exponential(g) / js.rate;
      for (; s <= t; s += exponential(g) / js.rate) {
        acc.add(std::exp(-r * s) * js.draw(g));
      }
    }
    out[static_cast<std::size_t>(i)] = acc.value();
  });
  return out;
}

ExitEstimate estimate_exit_upward(const LevyModel& model, double r, double x, double a, double q,
                                  const SimConfig& cfg) {
  cfg.validate();
  check_r(r);
  if (!(x >= 0.0 && x <= a)) throw DomainError("estimate_exit_upward: need 0 <= x <= a");
  if (!(q >= 0.0)) throw DomainError("estimate_exit_upward: q must be nonnegative");
  ExitEstimate out;
  if (x == a) {
    out.estimate = {1.0, 0.0, cfg.n_paths};
    return out;
  }
  JumpSampler js = make_sampler(model, cfg);
  std::vector<double> value(static_cast<std::size_t>(cfg.n_paths));
  std::vector<char> open(static_cast<std::size_t>(cfg.n_paths));
  parallel_paths(cfg.n_paths, cfg.threads, [&](std::int64_t i) {
    PathRecord rec = run_path(js, r, 0.0, x, cfg.horizon, i, cfg.seed, a, false);
    auto k = static_cast<std::size_t>(i);
    value[k] = rec.exit_time ? std::exp(-q * *rec.exit_time) : 0.0;
    open[k] = !rec.exit_time && !rec.ruin_time;
  });
  out.estimate = summarize(value);
  out.unresolved_mass =
      static_cast<double>(std::count(open.begin(), open.end(), char{1})) / static_cast<double>(cfg.n_paths);
  if (out.unresolved_mass > 0.01) {
    out.warning = fmt::format("unresolved mass {:.3g} exceeds 1%; widen the horizon", out.unresolved_mass);
    out.estimate.std_error = std::hypot(out.estimate.std_error, out.unresolved_mass * std::exp(-q * cfg.horizon));
  }
  return out;
}

std::vector<double> terminal_samples(const LevyModel& model, double r, double x, double t, const SimConfig& cfg) {
  cfg.validate();
  check_r(r);
  if (!(t >= 0.0)) throw DomainError("terminal_samples: t must be nonnegative");
  JumpSampler js = make_sampler(model, cfg);
  std::vector<double> out(static_cast<std::size_t>(cfg.n_paths));
  parallel_paths(cfg.n_paths, cfg.threads, [&](std::int64_t i) {
    out[static_cast<std::size_t>(i)] = t == 0.0 ? x : run_path(js, r, 0.0, x, t, i, cfg.seed, std::nullopt, false).terminal;
  });
  return out;
}

void write_path_csv(std::ostream& os, const std::vector<PathRecord>& paths) {
  static constexpr const char* names[] = {"jump", "ruin", "horizon", "exit"};
  os << "path_id,event_time,event_type,surplus_after\n";
  for (const auto& p : paths)
    for (const auto& e : p.events)
      os << fmt::format("{},{:.12g},{},{:.12g}\n", p.path_id, e.time, names[static_cast<int>(e.type)],
                        e.surplus_after);
}

}  // namespace ouruin
