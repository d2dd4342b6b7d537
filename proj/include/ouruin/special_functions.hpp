#pragma once

#include <complex>
#include <limits>

namespace ouruin {

struct SeriesControl {
  int max_terms = 500;
  double abs_tol = 1e-300;
  double rel_tol = 1e-16;

  void validate() const;
};

// Neumaier compensated summation.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

double mittag_leffler(double alpha, double x, const SeriesControl& ctrl = {});

double kummer_1f1(double a, double b, double y, const SeriesControl& ctrl = {});
// Raw power series without the Kummer transform.
double kummer_1f1_series(double a, double b, double y, const SeriesControl& ctrl = {});

// sum_n (-1)^n Gamma(kappa+n)|x|^n / (Gamma(kappa) Gamma(alpha(n+kappa)) n!), x <= 0
double wright_1psi1(double kappa, double alpha, double x, const SeriesControl& ctrl = {});

// Gamma(a; z0, z1) = int_{z0}^{z1} e^{-t} t^{a-1} dt along the segment, principal branch.
// The upper variant integrates from z to infinity along the ray.
std::complex<double> incomplete_gamma(double a, std::complex<double> z0, std::complex<double> z1);
std::complex<double> incomplete_gamma_lower(double a, std::complex<double> z);
std::complex<double> incomplete_gamma_upper(double a, std::complex<double> z);

// One-sided stable law with E exp(-b Z) = exp(-b^alpha / cos(pi alpha / 2)).
double stable_cdf(double alpha, double x);
double stable_pdf(double alpha, double x);
// Same law in the normalization E exp(-b Z) = exp(-b^alpha).
double stable_cdf_std(double alpha, double x);
double stable_pdf_std(double alpha, double x);

double gamma_cdf(double shape, double scale, double x);
double gamma_pdf(double shape, double scale, double x);

}  // namespace ouruin
