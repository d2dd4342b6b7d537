#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ouruin/backward_exponent.hpp"
#include "ouruin/detail/quadrature.hpp"
#include "ouruin/errors.hpp"

using namespace ouruin;
using cplx = std::complex<double>;
using std::numbers::pi;

TEST_CASE("closed forms") {
  BackwardExponent e(LevyModel::exponential(0.2, 1.0), 0.2);
  CHECK(e(1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(e(0.0) == 0.0);
  BackwardExponent ts(LevyModel::truncated_stable(1, 1, 0.5), 0.2);
  double oracle = detail::integrate_singular(
                      [](double u) {
                        auto m = LevyModel::truncated_stable(1, 1, 0.5);
                        return u > 0 ? m.phi(u) / u : 2.0;
                      },
                      0.0, 1.0, 1e-14) /
                  0.2;
  CHECK(ts(1.0) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(ts.by_quadrature(1.0) == doctest::Approx(ts(1.0)).epsilon(1e-10));
  CHECK_THROWS_AS(ts(-1.0), DomainError);
}

TEST_CASE("quadrature route agrees with closed forms") {
  std::vector<BackwardExponent> list{
      {LevyModel::exponential(0.4, 1.0), 0.2},        {LevyModel::linnik(0.3, 1.5, 0.6), 0.2},
      {LevyModel::stable(0.5), 0.2},                  {LevyModel::truncated_stable(1, 1, 0.5), 0.2},
      {LevyModel::esscher(LevyModel::stable(0.5), 1.0), 0.3}};
  for (const auto& be : list)
    for (double b : {0.01, 0.5, 3.0, 50.0}) {
      INFO(be.model().family_name(), " beta=", b);
      CHECK(be.by_quadrature(b) == doctest::Approx(be(b)).epsilon(1e-8));
    }
}

TEST_CASE("complex evaluation") {
  BackwardExponent st(LevyModel::stable(0.5), 1.0);
  cplx expect = std::pow(cplx(0, 1), 0.5) / (std::cos(pi / 4) * 0.5);
  CHECK(std::abs(st(cplx(0, 1)) - expect) < 1e-14);
  CHECK(std::abs(st.by_segment_quadrature(cplx(0, 1)) - expect) < 1e-8);
  CHECK(st(cplx(0, 0)) == cplx(0, 0));
  CHECK_THROWS_AS(st(cplx(-1, 0)), DomainError);

  BackwardExponent ts(LevyModel::truncated_stable(1, 1, 0.5), 0.2);
  cplx z(0, 5);
  CHECK(std::abs(ts(z) - ts.by_segment_quadrature(z)) < 1e-8);
  CHECK(std::abs(ts(z).real() - ts.real_part_imaginary_axis(5.0)) < 1e-6);
  for (double u : {0.3, 2.0, 40.0}) CHECK(std::abs(ts(cplx(0, u)) - ts.by_segment_quadrature(cplx(0, u))) < 1e-8 * std::max(1.0, std::abs(ts(cplx(0, u)))));
}

TEST_CASE("cosine-integral real part for infinite-support tails") {
  for (auto be : {BackwardExponent(LevyModel::exponential(0.4, 1.0), 0.2), BackwardExponent(LevyModel::stable(0.5), 0.2),
                  BackwardExponent(LevyModel::esscher(LevyModel::stable(0.5), 0.5), 0.2)})
    for (double u : {0.5, 3.0, 20.0}) {
      INFO(be.model().family_name(), " u=", u);
      CHECK(be(cplx(0, u)).real() == doctest::Approx(be.real_part_imaginary_axis(u)).epsilon(1e-7));
    }
}

TEST_CASE("complex-real agreement and symmetry") {
  for (auto be : {BackwardExponent(LevyModel::exponential(0.4, 1.0), 0.2), BackwardExponent(LevyModel::linnik(0.3, 1.5, 0.6), 0.2),
                  BackwardExponent(LevyModel::stable(0.5), 0.2), BackwardExponent(LevyModel::truncated_stable(1, 1, 0.5), 0.2)}) {
    for (double b : {0.01, 1.0, 7.0}) CHECK(std::abs(be(cplx(b, 0)) - be(b)) <= 1e-12 * std::max(1.0, be(b)));
    // f(-u) for a real-measure transform: phi_r(-iu) = conj(phi_r(iu))
    for (double u : {0.1, 1.0, 10.0, 100.0}) {
      cplx p = be(cplx(0, u)), m = be(cplx(0, -u));
      CHECK(std::abs(p.real() - m.real()) <= 1e-12 * std::abs(p));
      CHECK(std::abs(p.imag() + m.imag()) <= 1e-12 * std::abs(p));
    }
  }
}

TEST_CASE("Taylor coefficients") {
  BackwardExponent e(LevyModel::exponential(1, 1), 1.0);
  auto c = e.taylor_coeffs(6);
  for (int k = 1; k <= 6; ++k) CHECK(c[k - 1] == doctest::Approx((k % 2 ? 1.0 : -1.0) / k).epsilon(1e-14));
  BackwardExponent ts(LevyModel::truncated_stable(1, 1, 0.5), 0.2);
  CHECK(ts.taylor_coeffs(1)[0] == doctest::Approx(*ts.model().nu_moment(1) / 0.2).epsilon(1e-15));
  auto tiny = BackwardExponent(LevyModel::truncated_stable(1e-300, 1, 0.5), 0.2).taylor_coeffs(5);
  for (double v : tiny) CHECK(std::abs(v) < 1e-290);
  CHECK_THROWS_AS(BackwardExponent(LevyModel::stable(0.5), 0.2).taylor_coeffs(2), UnsupportedError);
}

TEST_CASE("Taylor consistency within half the radius") {
  BackwardExponent ts(LevyModel::truncated_stable(1, 1, 0.5), 0.2);
  auto c = ts.taylor_coeffs(60);
  for (double b : {0.1, 0.5, 1.0, 2.0}) {
    double s = 0.0;
    for (int k = 60; k >= 1; --k) s = (s + c[k - 1]) * b;
    CHECK(std::abs(s - ts(b)) < 1e-8);
  }
  BackwardExponent e(LevyModel::exponential(0.4, 2.0), 0.2);
  auto ce = e.taylor_coeffs(60);
  for (double b : {0.2, 0.5, 1.0}) {
    double s = 0.0;
    for (int k = 60; k >= 1; --k) s = (s + ce[k - 1]) * b;
    CHECK(std::abs(s - e(b)) < 1e-8);
  }
}

TEST_CASE("Esscher shift identity") {
  BackwardExponent e(LevyModel::exponential(1, 1), 1.0);
  CHECK(e.esscher_shift(1.0, 1.0) == doctest::Approx(std::log(1.5)).epsilon(1e-14));
  CHECK(e.esscher_shift(1.0, 0.0) == 0.0);
  BackwardExponent st(LevyModel::stable(0.5), 1.0);
  CHECK(st.esscher_shift(4.0, 5.0) == doctest::Approx(1.0 / (std::cos(pi / 4) * 0.5)).epsilon(1e-14));
  for (const auto& m : {LevyModel::exponential(0.4, 1.0), LevyModel::stable(0.5), LevyModel::truncated_stable(1, 1, 0.5),
                        LevyModel::linnik(0.3, 1.5, 0.6)}) {
    BackwardExponent be(m, 0.2);
    for (double g : {0.1, 0.5, 2.0}) {
      BackwardExponent tilted(LevyModel::esscher(m, g), 0.2);
      for (double b : {0.0, 0.3, 1.0, 8.0}) CHECK(std::abs(be.esscher_shift(g, b) - tilted(b)) <= 1e-10);
    }
  }
}

TEST_CASE("custom models go through quadrature; xi = 1 is rejected") {
  CustomTail c{"custom_exp", [](double x) { return 0.4 * std::exp(-x); }};
  BackwardExponent be(LevyModel::custom(c), 0.2);
  CHECK_FALSE(be.has_closed_form());
  CHECK(be(1.5) == doctest::Approx(2.0 * std::log(2.5)).epsilon(1e-9));
  CHECK(std::abs(be(cplx(0, 2.0)) - 2.0 * std::log(cplx(1, 2))) < 1e-8);

  CustomTail heavy{"log_tail", [](double x) { return x < 1.0 ? 1.0 : 1.0 / (1.0 + std::log(x)); }, false};
  BackwardExponent bh(LevyModel::custom(heavy), 0.2);
  CHECK(bh.xi() == 1);
  CHECK_THROWS_AS(bh(1.0), UnsupportedError);
  CHECK_THROWS_AS(bh(cplx(0, 1)), UnsupportedError);
}
