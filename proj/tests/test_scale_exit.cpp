#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ouruin/detail/quadrature.hpp"
#include "ouruin/errors.hpp"
#include "ouruin/scale_exit.hpp"

using namespace ouruin;

namespace {

std::vector<double> tabulate(double h, int M, double (*f)(double)) {
  std::vector<double> v(static_cast<std::size_t>(M) + 1);
  for (int i = 0; i <= M; ++i) v[static_cast<std::size_t>(i)] = f(h * i);
  return v;
}

double one_minus_exp(double y) { return -std::expm1(-y); }

double rl_oracle(double q, double x) {
  double v = detail::integrate_singular([&](double y) { return std::pow(x - y, q - 1.0) * -std::expm1(-y); }, 0.0, x, 1e-13);
  return v / std::tgamma(q);
}

}  // namespace

TEST_CASE("orders zero and one") {
  auto w = tabulate(0.05, 200, one_minus_exp);
  auto i0 = fractional_integral(w, 0.05, 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(i0[i] == w[i]);
  auto i1 = fractional_integral(w, 0.05, 1.0);
  double run = 0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    run += 0.025 * (w[i - 1] + w[i]);
    CHECK(std::abs(i1[i] - run) < 1e-8);
  }
  CHECK_THROWS_AS(fractional_integral(w, 0.05, -0.5), DomainError);
}

TEST_CASE("half-order integral against direct quadrature") {
  const double h = 0.001;
  auto w = tabulate(h, 5000, one_minus_exp);
  for (double x : {1.0, 2.0, 5.0}) CHECK(fractional_integral_at(w, h, 0.5, x) == doctest::Approx(rl_oracle(0.5, x)).epsilon(1e-6));
  CHECK(fractional_integral_at(w, h, 0.5, 1.2345) == doctest::Approx(rl_oracle(0.5, 1.2345)).epsilon(1e-6));

  BackwardExponent be(LevyModel::exponential(0.2, 1.0), 0.2);
  GridSpec g;
  g.h = 0.01;
  g.M = 600;
  auto sf = fractional_integral_W(w_derivatives(be, g, 0), 0.5);
  for (double x : {1.0, 2.0, 5.0}) CHECK(sf.value(x) == doctest::Approx(rl_oracle(0.5, x)).epsilon(1e-4));
  CHECK(sf.value(-1.0) == 0.0);
  CHECK_THROWS_AS(sf.value(7.0), DomainError);
}

TEST_CASE("semigroup") {
  const double h = 0.01;
  auto w = tabulate(h, 1000, one_minus_exp);
  for (auto [a, b] : {std::pair{0.5, 0.5}, std::pair{1.0, 1.0}}) {
    auto lhs = fractional_integral(fractional_integral(w, h, b), h, a);
    auto rhs = fractional_integral(w, h, a + b);
    for (std::size_t i = 0; i < w.size(); i += 10) CHECK(std::abs(lhs[i] - rhs[i]) < 1e-5);
  }
}

TEST_CASE("grid and off-grid fractional integrals agree") {
  const double h = 0.05;
  auto w = tabulate(h, 100, one_minus_exp);
  auto fast = fractional_integral(w, h, 0.7);
  for (std::size_t i = 0; i < w.size(); i += 7) CHECK(fast[i] == doctest::Approx(fractional_integral_at(w, h, 0.7, h * i)).epsilon(1e-10));
  CHECK(fractional_integral_at(w, h, 1.0, 6.0) == doctest::Approx(fractional_integral(w, h, 1.0).back() + w.back()));
}

TEST_CASE("Laplace identity for W_q") {
  GridSpec g;
  g.h = 0.005;
  g.M = 6000;
  for (auto model : {LevyModel::exponential(0.6, 1.0), LevyModel::truncated_stable(1, 1, 0.5)}) {
    BackwardExponent be(model, 0.2);
    auto wf = w_derivatives(be, g, 0);
    for (double q : {0.0, 0.5, 1.0, 2.0}) {
      auto sf = fractional_integral_W(wf, q);
      for (double beta : {1.0, 2.0, 4.0}) CHECK(lt_identity_check(sf, be, beta) <= 1e-4);
    }
  }
  GridSpec shortg;
  shortg.M = 50;
  BackwardExponent be(LevyModel::exponential(0.6, 1.0), 0.2);
  CHECK_THROWS_AS(lt_identity_check(fractional_integral_W(w_derivatives(be, shortg, 0), 0.5), be, 1.0), DomainError);
}

TEST_CASE("exit transform") {
  const double r = 0.2;
  BackwardExponent be(LevyModel::exponential(0.4, 1.0), r);
  GridSpec g;
  g.h = 0.05;
  g.M = 200;
  auto wf = w_derivatives(be, g, 0);
  std::vector<ScaleFunction> sfs;
  for (double q : {0.0, 0.1, 0.2, 0.5}) sfs.push_back(fractional_integral_W(wf, q / r));
  const double a = 3.0;
  for (std::size_t k = 0; k < sfs.size(); ++k) {
    double q = sfs[k].q() * r;
    CHECK(exit_upward_lt(sfs[k], q, a, a) == 1.0);
    CHECK(exit_upward_lt(sfs[k], q, -0.5, a) == 0.0);
    for (std::size_t i = 1; i < sfs[k].values().size(); ++i) CHECK(sfs[k].values()[i] >= sfs[k].values()[i - 1]);
    double prev = 0;
    for (double x = 0.1; x < a; x += 0.1) {
      double v = exit_upward_lt(sfs[k], q, x, a);
      CHECK(v >= prev);
      CHECK(v <= 1.0);
      prev = v;
      if (k > 0) CHECK(v <= exit_upward_lt(sfs[k - 1], sfs[k - 1].q() * r, x, a) + 1e-12);
    }
  }
  CHECK(exit_upward_lt(sfs[0], 0.0, 1.0, a) == doctest::Approx(wf.value(0, 1.0) / wf.value(0, a)));
  CHECK_THROWS_AS(exit_upward_lt(sfs[1], 0.3, 1.0, a), DomainError);
  CHECK_THROWS_AS(exit_upward_lt(sfs[0], 0.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(exit_upward_lt(sfs[0], 0.0, 4.0, a), DomainError);
}

TEST_CASE("martingale residual bookkeeping and csv") {
  BackwardExponent be(LevyModel::exponential(0.4, 1.0), 0.2);
  GridSpec g;
  g.M = 50;
  auto sf = fractional_integral_W(w_derivatives(be, g, 0), 0.5);
  auto z = martingale_residual(sf, 0.1, 2.0, 0.0, {});
  CHECK(z.residual == 0.0);
  CHECK(z.standard_error == 0.0);
  auto m = martingale_residual(sf, 0.0, 2.0, 1.0, {2.0, 2.0, 2.0});
  CHECK(m.residual == doctest::Approx(0.0));
  std::ostringstream os;
  write_csv(os, sf);
  CHECK(os.str().rfind("# q=0.5 r=0.2 model=exponential\nx,Wq\n", 0) == 0);
}
