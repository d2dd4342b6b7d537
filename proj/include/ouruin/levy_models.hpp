#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ouruin {

class LevyModel;

struct ExponentialJumps {
  double eta;
  double delta;
};

// tail(x) = eta * E_alpha(-delta x^alpha)
struct Linnik {
  double eta;
  double delta;
  double alpha;
};

// phi(b) = b^alpha / cos(pi alpha / 2)
struct Stable {
  double alpha;
};

// tail(x) = C x^{-alpha} for x < A, 0 for x >= A
struct TruncatedStable {
  double C;
  double A;
  double alpha;
};

// tail(x) = exp(-gamma x) * tail_base(x)
struct Esscher {
  std::shared_ptr<const LevyModel> base;
  double gamma;
};

// Arbitrary nonincreasing tail; every operation falls back to quadrature.
struct CustomTail {
  std::string name;
  std::function<double(double)> tail;
  bool log_moment_finite = true;
  std::optional<double> tail_index;
  std::optional<double> total_mass;
};

class LevyModel {
 public:
  using Family = std::variant<ExponentialJumps, Linnik, Stable, TruncatedStable, Esscher, CustomTail>;

  explicit LevyModel(Family f);

  static LevyModel exponential(double eta, double delta);
  static LevyModel linnik(double eta, double delta, double alpha);
  static LevyModel stable(double alpha);
  static LevyModel truncated_stable(double C, double A, double alpha);
  static LevyModel esscher(const LevyModel& base, double gamma);
  static LevyModel custom(CustomTail c);

  const Family& family() const { return family_; }
  // "exponential", "linnik", "stable", "truncated_stable", "esscher(<base>)" or the custom name
  std::string family_name() const;

  double tail(double x) const;
  double phi(double beta) const;
  std::complex<double> phi(std::complex<double> z) const;
  // beta * int_0^inf e^{-beta x} tail(x) dx by quadrature
  double phi_by_quadrature(double beta) const;

  bool log_moment_finite() const;
  // m_k = int y^k nu(dy); nullopt when infinite
  std::optional<double> nu_moment(int k) const;
  // nu(0, inf); +inf for infinite activity
  double total_mass() const;
  std::optional<double> tail_index() const;
  // int_0^eps y nu(dy)
  double small_jump_mean(double eps) const;
  // points where the tail is discontinuous
  std::vector<double> breakpoints() const;

 private:
  Family family_;
};

struct ProcessParams {
  double r;
  double c = 0.0;

  ProcessParams(double r_, double c_ = 0.0);
};

inline double tail(const LevyModel& m, double x) { return m.tail(x); }
inline double phi(const LevyModel& m, double beta) { return m.phi(beta); }
inline bool log_moment_finite(const LevyModel& m) { return m.log_moment_finite(); }
inline std::optional<double> nu_moment(const LevyModel& m, int k) { return m.nu_moment(k); }

// Strict JSON (de)serialization: {"family", "params", "esscher_gamma"}.
LevyModel parse_model_json(const std::string& text);
std::string model_to_json(const LevyModel& m);

}  // namespace ouruin
