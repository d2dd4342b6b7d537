#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include "ouruin/levy_models.hpp"

namespace ouruin {

// phi_r(beta) = (1/r) int_0^beta phi(u)/u du
class BackwardExponent {
 public:
  BackwardExponent(LevyModel model, double r);

  const LevyModel& model() const { return model_; }
  double r() const { return r_; }
  // 1 iff the log-moment of nu is infinite
  int xi() const { return xi_; }
  bool has_closed_form() const { return closed_form_; }

  double operator()(double beta) const;
  std::complex<double> operator()(std::complex<double> z) const;

  // Independent routes used as cross-checks.
  double by_quadrature(double beta) const;
  std::complex<double> by_segment_quadrature(std::complex<double> z) const;
  // Re phi_r(iu) = (1/r) int_0^inf (1 - cos(ux)) tail(x)/x dx
  double real_part_imaginary_axis(double u) const;

  // c_1..c_n with phi_r(v) = sum c_k v^k
  std::vector<double> taylor_coeffs(int n_max) const;
  // phi_r(beta + gamma) - phi_r(gamma)
  double esscher_shift(double gamma, double beta) const;

 private:
  void require_xi0() const;
  std::complex<double> near_zero(std::complex<double> w) const;

  LevyModel model_;
  double r_;
  int xi_;
  bool closed_form_;
  std::shared_ptr<const BackwardExponent> base_;
  std::optional<double> m1_, m2_;
};

inline double varphi_r(const BackwardExponent& be, double beta) { return be(beta); }
inline std::complex<double> varphi_r_complex(const BackwardExponent& be, std::complex<double> z) { return be(z); }
inline std::vector<double> taylor_coeffs(const BackwardExponent& be, int n_max) { return be.taylor_coeffs(n_max); }
inline double esscher_shift(const BackwardExponent& be, double gamma, double beta) {
  return be.esscher_shift(gamma, beta);
}

}  // namespace ouruin
