#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "ouruin/analytic_oracles.hpp"
#include "ouruin/backward_exponent.hpp"
#include "ouruin/errors.hpp"
#include "ouruin/levy_models.hpp"
#include "ouruin/mc_oracle.hpp"
#include "ouruin/ruin.hpp"
#include "ouruin/scale_exit.hpp"
#include "ouruin/spectral.hpp"
#include "ouruin/transform_engine.hpp"

namespace ouruin::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Options {
  std::string command;
  std::string model;
  double r = 0.2;
  double c = 0.0;
  std::vector<std::string> x;
  std::vector<std::string> t;
  double q = 0.0;
  std::optional<double> a;
  std::optional<int> N;
  double grid_h = 0.2;
  int grid_M = 125;
  double umax = 0.0;
  std::size_t nfreq = 0;
  std::int64_t paths = 100000;
  std::uint64_t seed = 1;
  std::string out;
  bool force = false;
  std::vector<int> N_values;
  std::vector<double> t_values;
  std::string rule;
  std::string format = "csv";
  std::optional<double> cutoff;
  double horizon = 200.0;
  std::string dump_paths;
};

double parse_number(const std::string& s, const std::string& flag) {
  std::string v = s;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (v == "inf" || v == "infinity") return kInf;
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || std::isnan(d)) throw ConfigError(flag + ": not a number: \"" + s + "\"");
  return d;
}

std::vector<double> numbers(const std::vector<std::string>& v, const std::string& flag, std::vector<double> fallback) {
  if (v.empty()) return fallback;
  std::vector<double> out;
  for (const auto& s : v) out.push_back(parse_number(s, flag));
  return out;
}

LevyModel load_model(const Options& o, const LevyModel& fallback) {
  if (o.model.empty()) return fallback;
  if (o.model.front() == '{') return parse_model_json(o.model);
  std::ifstream in(o.model);
  if (!in) throw ConfigError("--model: cannot read \"" + o.model + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_json(ss.str());
}

GridSpec grid_of(const Options& o) {
  GridSpec g;
  g.h = o.grid_h;
  g.M = o.grid_M;
  g.u_max = o.umax;
  g.n_freq = o.nfreq;
  g.validate();
  return g;
}

InversionOptions inversion_of(const Options& o, CumulativeRule fallback = CumulativeRule::trapezoid) {
  InversionOptions opt;
  opt.rule = fallback;
  if (o.rule == "trapezoid")
    opt.rule = CumulativeRule::trapezoid;
  else if (o.rule == "right-rectangle")
    opt.rule = CumulativeRule::right_rectangle;
  else if (!o.rule.empty())
    throw ConfigError("--rule: expected trapezoid or right-rectangle, got \"" + o.rule + "\"");
  return opt;
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.10g}", v);
}

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

void header(std::ostream& os, const Options& o, const LevyModel& m) {
  os << fmt::format("# ou-ruin {} cmd={} model={} seed={}\n", OURUIN_VERSION, o.command, m.family_name(), o.seed);
}

void require_threshold(const SpectralSeries& s, double t, const Options& o) {
  if (!o.force && t < s.t_alpha())
    throw UnsupportedError(fmt::format("t={} is below t_alpha={:.6g}; the series need not converge (use --force-below-talpha)",
                                       num(t), s.t_alpha()));
}

void cmd_ruin(const Options& o, std::ostream& os) {
  auto m = load_model(o, LevyModel::exponential(0.4, 1.0));
  BackwardExponent be(m, o.r);
  auto g = grid_of(o);
  auto opt = inversion_of(o);
  auto xs = numbers(o.x, "--x", {1.0});
  auto ts = numbers(o.t, "--t", {kInf});
  header(os, o, m);
  os << "x,t,x_eff,ruin_probability\n";
  for (double t : ts)
    for (double x : xs) {
      RuinQuery q{m, ProcessParams(o.r, o.c), x, std::isinf(t) ? TimeHorizon::infinity() : TimeHorizon::finite(t)};
      double p = 1.0;
      if (q.x_eff() > 0.0) p = std::isinf(t) ? infinite_time_ruin(q, g, opt) : finite_time_ruin(q, g, opt);
      os << fmt::format("{},{},{},{}\n", num(x), num(t), num(q.x_eff()), num(clip01(p)));
    }
}

void cmd_survival_series(const Options& o, std::ostream& os) {
  auto m = load_model(o, LevyModel::truncated_stable(1.0, 1.0, 0.5));
  BackwardExponent be(m, o.r);
  auto g = grid_of(o);
  int N = o.N.value_or(4);
  if (N < 0) throw ConfigError("--N must be nonnegative");
  SpectralSeries s(w_derivatives(be, g, std::max(0, N - 1)), N);
  auto ts = numbers(o.t, "--t", {7.0});
  header(os, o, m);
  os << "x,t,N,value,partial_sum_raw\n";
  for (double t : ts) {
    require_threshold(s, t, o);
    if (o.x.empty()) {
      auto v = s.partial_sums(t, N, true);
      for (std::size_t i = 0; i < v.size(); ++i)
        os << fmt::format("{},{},{},{},{}\n", num(g.h * static_cast<double>(i)), num(t), N, num(clip01(v[i])), num(v[i]));
    } else {
      for (double x : numbers(o.x, "--x", {})) {
        double v = s.partial_sum(x, t, N, true);
        os << fmt::format("{},{},{},{},{}\n", num(x), num(t), N, num(clip01(v)), num(v));
      }
    }
  }
}

void cmd_table1(const Options& o, std::ostream& os) {
  auto m = load_model(o, LevyModel::truncated_stable(1.0, 1.0, 0.5));
  BackwardExponent be(m, o.r);
  auto g = grid_of(o);
  auto opt = inversion_of(o, CumulativeRule::right_rectangle);
  std::vector<int> Ns = o.N_values.empty() ? std::vector<int>{0, 1, 2, 3, 4, 6, 9, 12, 16} : o.N_values;
  std::vector<double> ts = o.t_values.empty() ? std::vector<double>{3, 5, 7, 10, 15} : o.t_values;
  int N_max = *std::max_element(Ns.begin(), Ns.end());
  if (*std::min_element(Ns.begin(), Ns.end()) < 0) throw ConfigError("--N-values must be nonnegative");
  SpectralSeries s(w_derivatives(be, g, std::max(0, N_max - 1)), N_max);
  auto rep = truncation_error_table(
      s, [&](double t) { return reference_survival(be, t, g, opt.rule); }, Ns, ts, true);
  header(os, o, m);
  if (o.format == "table")
    rep.write_table(os);
  else if (o.format == "csv")
    rep.write_csv(os);
  else
    throw ConfigError("--format: expected csv or table");
}

void cmd_figure1(const Options& o, std::ostream& os) {
  auto m = load_model(o, LevyModel::truncated_stable(1.0, 1.0, 0.5));
  BackwardExponent be(m, o.r);
  auto g = grid_of(o);
  auto opt = inversion_of(o);
  std::vector<int> Ns = o.N_values.empty() ? std::vector<int>{0, 1, 3, 6} : o.N_values;
  double t = numbers(o.t, "--t", {7.0}).front();
  int N_max = *std::max_element(Ns.begin(), Ns.end());
  if (*std::min_element(Ns.begin(), Ns.end()) < 0) throw ConfigError("--N-values must be nonnegative");
  SpectralSeries s(w_derivatives(be, g, std::max(0, N_max - 1)), N_max);
  require_threshold(s, t, o);
  header(os, o, m);
  os << "N,x,value,partial_sum_raw\n";
  for (int N : Ns) {
    auto v = s.partial_sums(t, N, true);
    for (std::size_t i = 0; i < v.size(); ++i)
      os << fmt::format("{},{},{},{}\n", N, num(g.h * static_cast<double>(i)), num(clip01(v[i])), num(v[i]));
  }
  auto ref = reference_survival(be, t, g, opt.rule);
  for (std::size_t i = 0; i < ref.size(); ++i)
    os << fmt::format("inf,{},{},{}\n", num(g.h * static_cast<double>(i)), num(clip01(ref[i])), num(ref[i]));
}

void cmd_scale(const Options& o, std::ostream& os) {
  auto m = load_model(o, LevyModel::exponential(0.4, 1.0));
  BackwardExponent be(m, o.r);
  auto sf = fractional_integral_W(w_derivatives(be, grid_of(o), 0), o.q / o.r);
  header(os, o, m);
  write_csv(os, sf);
}

void cmd_exit(const Options& o, std::ostream& os) {
  auto m = load_model(o, LevyModel::exponential(0.4, 1.0));
  if (!o.a) throw ConfigError("exit: --a is required");
  BackwardExponent be(m, o.r);
  auto xs = numbers(o.x, "--x", {1.0});
  auto sf = fractional_integral_W(w_derivatives(be, grid_of(o), 0), o.q / o.r);
  header(os, o, m);
  os << "x,a,q,value\n";
  for (double x : xs) {
    double v = x == *o.a ? 1.0 : exit_upward_lt(sf, o.q, x, *o.a);
    os << fmt::format("{},{},{},{}\n", num(x), num(*o.a), num(o.q), num(clip01(v)));
  }
}

void cmd_oracle(const Options& o, std::ostream& os) {
  auto m = load_model(o, LevyModel::exponential(0.4, 1.0));
  if (o.c != 0.0) throw UnsupportedError("oracle: closed forms assume c = 0");
  auto xs = numbers(o.x, "--x", {1.0});
  auto ts = numbers(o.t, "--t", {kInf});
  std::function<OracleResult(double, double)> eval;
  if (auto* e = std::get_if<ExponentialJumps>(&m.family())) {
    eval = [&, e](double x, double t) { return OracleResult{exp_case_survival(e->eta, e->delta, o.r, x, t), 0, 0.0}; };
  } else if (auto* s = std::get_if<Stable>(&m.family())) {
    eval = [&, s](double x, double t) { return OracleResult{stable_survival(s->alpha, o.r, x, t), 0, 0.0}; };
  } else if (auto* l = std::get_if<Linnik>(&m.family())) {
    eval = [&, l](double x, double t) {
      if (std::isinf(t)) throw UnsupportedError("oracle: the Linnik series needs a finite horizon");
      return linnik_survival_series(l->eta, l->delta, l->alpha, o.r, x, t);
    };
  } else {
    throw UnsupportedError("oracle: no closed form for family " + m.family_name());
  }
  header(os, o, m);
  os << "x,t,survival,series_terms,truncation_bound\n";
  for (double t : ts)
    for (double x : xs) {
      auto res = eval(x, t);
      os << fmt::format("{},{},{},{},{}\n", num(x), num(t), num(clip01(res.value)), res.series_terms_used,
                        num(res.truncation_bound));
    }
}

void cmd_mc(const Options& o, std::ostream& os) {
  auto m = load_model(o, LevyModel::exponential(0.4, 1.0));
  SimConfig cfg;
  cfg.n_paths = o.paths;
  cfg.seed = o.seed;
  cfg.small_jump_cutoff = o.cutoff;
  cfg.horizon = o.horizon;
  cfg.validate();
  auto xs = numbers(o.x, "--x", {1.0});
  header(os, o, m);
  if (o.a) {
    os << "x,a,q,value,std_error,n_paths,unresolved_mass\n";
    for (double x : xs) {
      auto e = estimate_exit_upward(m, o.r, x, *o.a, o.q, cfg);
      os << fmt::format("{},{},{},{},{},{},{}\n", num(x), num(*o.a), num(o.q), num(e.estimate.mean),
                        num(e.estimate.std_error), e.estimate.n_effective, num(e.unresolved_mass));
      if (e.warning) os << "# warning: " << *e.warning << "\n";
    }
  } else {
    auto ts = numbers(o.t, "--t", {10.0});
    os << "x,t,ruin_probability,std_error,n_paths\n";
    for (double t : ts) {
      if (std::isinf(t)) throw UnsupportedError("mc: the horizon must be finite");
      for (double x : xs) {
        auto e = estimate_finite_time_ruin(m, ProcessParams(o.r, o.c), x, t, cfg);
        os << fmt::format("{},{},{},{},{}\n", num(x), num(t), num(e.mean), num(e.std_error), e.n_effective);
      }
    }
  }
  if (!o.dump_paths.empty()) {
    std::ofstream dump(o.dump_paths);
    if (!dump) throw ConfigError("--dump-paths: cannot write \"" + o.dump_paths + "\"");
    SimConfig one = cfg;
    if (!o.a) one.horizon = numbers(o.t, "--t", {10.0}).front();
    std::vector<PathRecord> recs;
    std::int64_t n = std::min<std::int64_t>(cfg.n_paths, 1000);
    for (std::int64_t i = 0; i < n; ++i)
      recs.push_back(simulate_risk_path(m, ProcessParams(o.r, o.a ? 0.0 : o.c), xs.front(), one, i, o.a));
    header(dump, o, m);
    write_path_csv(dump, recs);
  }
}

void cmd_w_family(const Options& o, std::ostream& os) {
  auto m = load_model(o, LevyModel::exponential(0.4, 1.0));
  BackwardExponent be(m, o.r);
  auto wf = w_derivatives(be, grid_of(o), o.N.value_or(1));
  header(os, o, m);
  write_csv(os, wf);
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--model", o.model, "model JSON file (or inline JSON)");
  sub->add_option("--r", o.r, "mean-reversion rate");
  sub->add_option("--c", o.c, "premium rate");
  sub->add_option("--x", o.x, "initial capital(s)")->delimiter(',');
  sub->add_option("--t", o.t, "time horizon(s); inf allowed")->delimiter(',');
  sub->add_option("--q", o.q, "discount rate");
  sub->add_option("--a", o.a, "upper exit level");
  sub->add_option("--N", o.N, "series order");
  sub->add_option("--grid-h", o.grid_h, "grid step");
  sub->add_option("--grid-M", o.grid_M, "number of nonnegative grid steps");
  sub->add_option("--umax", o.umax, "frequency cutoff (0 = adaptive)");
  sub->add_option("--nfreq", o.nfreq, "FFT length (0 = automatic)");
  sub->add_option("--paths", o.paths, "Monte Carlo paths");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--out", o.out, "output file (default stdout)");
  sub->add_flag("--force-below-talpha", o.force, "evaluate the series below t_alpha");
  sub->add_option("--N-values", o.N_values, "series orders for table1/figure1")->delimiter(',');
  sub->add_option("--t-values", o.t_values, "horizons for table1")->delimiter(',');
  sub->add_option("--rule", o.rule, "cumulation rule for the reference: trapezoid or right-rectangle");
  sub->add_option("--format", o.format, "csv or table");
  sub->add_option("--cutoff", o.cutoff, "small-jump cutoff for infinite-activity simulation");
  sub->add_option("--horizon", o.horizon, "simulation horizon for exit estimates");
  sub->add_option("--dump-paths", o.dump_paths, "write simulated path events to this CSV");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Absolute ruin for OU-type risk processes", "ou-ruin"};
  app.require_subcommand(1);
  const std::map<std::string, std::function<void(const Options&, std::ostream&)>> commands = {
      {"ruin", cmd_ruin},     {"survival-series", cmd_survival_series},
      {"table1", cmd_table1}, {"figure1", cmd_figure1},
      {"scale", cmd_scale},   {"exit", cmd_exit},
      {"oracle", cmd_oracle}, {"mc", cmd_mc},
      {"w-family", cmd_w_family}};
  for (const auto& [name, fn] : commands) add_common(app.add_subcommand(name), o);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return invalid_spec;
  }
  o.command = app.get_subcommands().front()->get_name();

  try {
    std::ostringstream buf;
    commands.at(o.command)(o, buf);
    if (o.out.empty()) {
      out << buf.str();
    } else {
      std::ofstream f(o.out);
      if (!f) throw ConfigError("--out: cannot write \"" + o.out + "\"");
      f << buf.str();
    }
    return ok;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << "\n";
    return unsupported;
  } catch (const AccuracyError& e) {
    err << "accuracy failure: " << e.what() << "\n";
    return accuracy;
  } catch (const Error& e) {
    err << "invalid input: " << e.what() << "\n";
    return invalid_spec;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return invalid_spec;
  }
}

}  // namespace ouruin::cli
