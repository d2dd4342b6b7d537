#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ouruin/errors.hpp"
#include "ouruin/spectral.hpp"

using namespace ouruin;

namespace {

BackwardExponent ts_default() { return BackwardExponent(LevyModel::truncated_stable(1, 1, 0.5), 0.2); }

}  // namespace

TEST_CASE("threshold time") {
  CHECK(t_alpha(0.5, 0.2) == doctest::Approx(5 * std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(t_alpha(1.0, 0.2), DomainError);
  CHECK_THROWS_AS(t_alpha(0.5, 0.0), DomainError);
}

TEST_CASE("mu coefficients") {
  auto mu = mu_coefficients(BackwardExponent(LevyModel::exponential(0.4, 1.0), 0.2), 8);
  std::vector<double> want{1, 2, 1, 0, 0, 0, 0, 0, 0};
  for (std::size_t n = 0; n < mu.size(); ++n) CHECK(std::abs(mu[n] - want[n]) < 1e-10);
  auto mu3 = mu_coefficients(BackwardExponent(LevyModel::exponential(0.6, 2.0), 0.2), 6);
  for (int n = 0; n <= 6; ++n) {
    double binom = n <= 3 ? std::tgamma(4.0) / (std::tgamma(n + 1.0) * std::tgamma(4.0 - n)) : 0.0;
    CHECK(std::abs(mu3[n] - binom * std::pow(2.0, -n)) < 1e-10);
  }
  auto ts = mu_coefficients(ts_default(), 16);
  CHECK(ts[0] == 1.0);
  for (double m : ts) CHECK(m >= -1e-12);
  CHECK(mu_coefficients(ts_default(), 0) == std::vector<double>{1.0});
  CHECK_THROWS_AS(mu_coefficients(BackwardExponent(LevyModel::stable(0.5), 0.2), 3), UnsupportedError);
}

TEST_CASE("partial sums") {
  auto be = ts_default();
  GridSpec g;
  SpectralSeries s(w_derivatives(be, g, 15), 16);
  CHECK(s.t_alpha() == doctest::Approx(5 * std::log(2.0)));
  CHECK(s.alpha().value() == 0.5);
  for (double x : {0.0, 1.0, 7.3, 25.0}) CHECK(s.partial_sum(x, 7.0, 0) == s.w_family().value(0, x));
  CHECK_THROWS_AS(s.partial_sum(1.0, 3.0, 4), DomainError);
  CHECK_NOTHROW(s.partial_sum(1.0, 3.0, 4, true));
  CHECK_THROWS_AS(s.partial_sum(1.0, 7.0, 17), DomainError);
  CHECK_THROWS_AS(SpectralSeries(w_derivatives(be, g, 2), 4), DomainError);

  for (double t : {7.0, 10.0, 15.0}) {
    auto ref = reference_survival(be, t, g);
    double prev = 1e9;
    for (int N = 0; N + 4 <= 16; N += 4) {
      auto a = s.partial_sums(t, N), b = s.partial_sums(t, N + 4);
      double d = 0;
      for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
      CHECK(d <= prev + 1e-12);
      prev = d;
    }
    auto ps = s.partial_sums(t, 16);
    for (std::size_t i = 0; i < ps.size(); ++i) CHECK(std::abs(ps[i] - ref[i]) < 0.03);
  }
}

TEST_CASE("truncation error report") {
  auto be = ts_default();
  GridSpec g;
  SpectralSeries s(w_derivatives(be, g, 3), 4);
  auto rep = truncation_error_table(s, [&](double t) { return s.partial_sums(t, 4, true); }, {0, 2, 4}, {3, 7});
  CHECK(rep.at(4, 7) == 0.0);
  CHECK(rep.at(4, 3) == 0.0);
  CHECK(rep.at(0, 7) > 0.0);
  for (auto& row : rep.e)
    for (double e : row) CHECK(e >= 0.0);
  CHECK_THROWS_AS(rep.at(1, 7), DomainError);
  std::ostringstream os;
  rep.write_csv(os);
  CHECK(os.str().rfind("N,t,e\n0,3,", 0) == 0);
  auto real = truncation_error_table(s, [&](double t) { return reference_survival(be, t, g); }, {0, 4}, {7, 10, 15});
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(real.e[i][1] <= real.e[i][0]);
    CHECK(real.e[i][2] <= real.e[i][1]);
  }
}

TEST_CASE("eigenmeasure property") {
  auto be = ts_default();
  GridSpec g;
  SpectralSeries s(w_derivatives(be, g, 3), 4);
  CHECK(eigenmeasure_check(s, 1, 7.0) <= 5e-3);
  CHECK(eigenmeasure_check(s, 0, 7.0) <= 5e-3);
  CHECK(eigenmeasure_check(s, 1, 0.0) == 0.0);

  BackwardExponent ex(LevyModel::exponential(0.6, 1.0), 0.2);
  GridSpec ge;
  ge.h = 0.05;
  ge.M = 1600;
  SpectralSeries se(w_derivatives(ex, ge, 1), 2);
  CHECK(se.t_alpha() == 0.0);
  CHECK(eigenmeasure_check(se, 0, 10.0) <= 5e-3);
  CHECK(eigenmeasure_check(se, 1, 3.0) <= 5e-3);
}
