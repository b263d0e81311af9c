#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "langevin_bounds/error.hpp"
#include "langevin_bounds/target_model.hpp"
#include "oracle_values.hpp"

using namespace lbound;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Io;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("exponential power family") {
  auto g = make_exponential_power(2.0);
  CHECK(g.b() == 2.0);
  CHECK(g.kind() == DensityKind::ExponentialPower);
  CHECK(rel(g.z_const(), std::sqrt(std::numbers::pi)) < 1e-15);

  auto h = make_exponential_power(1.1);
  CHECK(h.b() == 1.1);
  CHECK(rel(h.z_const(), oracle::kZ_b11) < 1e-14);

  CHECK(g.log_density_unnorm(1.5) == doctest::Approx(-2.25));
  CHECK(g.grad_log_density(1.5) == doctest::Approx(-3.0));
  CHECK(g.drift(1.5) == doctest::Approx(-1.5));

  CHECK(kind_of([] { make_exponential_power(1.0); }) == ErrorKind::A1Violation);
  CHECK(kind_of([] { make_exponential_power(0.5); }) == ErrorKind::A1Violation);
  CHECK(kind_of([] { make_exponential_power(NAN); }) == ErrorKind::A1Violation);
}

TEST_CASE("gradient is odd and minus gradient grows past 1") {
  for (double beta : {1.1, 1.5, 2.0, 3.0, 4.5}) {
    auto d = make_exponential_power(beta);
    double prev = -d.grad_log_density(1.0);
    for (double x = 0.0; x <= 20.0; x += 0.125) {
      CHECK(d.grad_log_density(-x) == -d.grad_log_density(x));
      CHECK(d.log_density_unnorm(-x) == d.log_density_unnorm(x));
      if (x > 1.0) {
        double g = -d.grad_log_density(x);
        CHECK(g >= prev);
        prev = g;
      }
    }
    CHECK(-d.grad_log_density(1.0) == doctest::Approx(beta));
  }
}

TEST_CASE("check_a1 examples") {
  auto g = make_exponential_power(2.0);
  auto r = check_a1(g);
  CHECK(r.analytic);
  CHECK(r.all_pass());

  auto bad_sign = make_custom_density([](double x) { return -std::abs(x) * 2.0; },
                                      [](double x) { return x > 0 ? 1.0 : -1.0; },
                                      1.0);
  auto rs = check_a1(bad_sign, 50.0, 5001);
  CHECK_FALSE(rs.analytic);
  CHECK_FALSE(rs.sign.pass);
  REQUIRE(rs.sign.worst_x.has_value());
  CHECK(*rs.sign.worst_x == doctest::Approx(0.01));

  auto gauss_b3 = make_custom_density([](double x) { return -x * x; },
                                      [](double x) { return -2.0 * x; }, 3.0);
  auto rf = check_a1(gauss_b3);
  CHECK(rf.symmetry.pass);
  CHECK(rf.sign.pass);
  CHECK_FALSE(rf.floor.pass);
  REQUIRE(rf.floor.worst_x.has_value());
  CHECK(*rf.floor.worst_x == doctest::Approx(1.0));
  CHECK(rf.floor.worst_margin < -0.99);

  auto gauss_b2 = make_custom_density([](double x) { return -x * x; },
                                      [](double x) { return -2.0 * x; }, 2.0);
  CHECK(check_a1(gauss_b2).all_pass());

  auto skew = make_custom_density([](double x) { return -x * x + 0.1 * x; },
                                  [](double x) { return -2.0 * x + 0.1; }, 1.0);
  CHECK_FALSE(check_a1(skew).symmetry.pass);
}

TEST_CASE("mass_interval examples") {
  auto g = make_exponential_power(2.0);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(std::abs(mass_interval(g, -inf, inf) - 1.0) < 1e-9);
  CHECK(std::abs(mass_interval(g, 0.0, inf) - 0.5) < 1e-9);
  CHECK(std::abs(mass_interval(g, 0.0, 2.0) - oracle::kHalfErf2) < 1e-12);
  CHECK(mass_interval(g, 1.0, 1.0) == 0.0);
}

TEST_CASE("mass_interval symmetry and monotone growth") {
  for (double beta : {1.1, 2.0, 3.5}) {
    auto d = make_exponential_power(beta);
    double prev = 0.0;
    for (double X : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
      double m = mass_interval(d, -X, X);
      CHECK(m >= prev);
      prev = m;
      CHECK(std::abs(mass_interval(d, 0.0, X) - mass_interval(d, -X, 0.0)) <
            1e-13);
    }
    CHECK(std::abs(prev - 1.0) < 1e-9);
  }
}

TEST_CASE("custom density normalizer") {
  auto d = make_custom_density([](double x) { return -x * x; },
                               [](double x) { return -2.0 * x; }, 2.0);
  CHECK(rel(d.z_const(), std::sqrt(std::numbers::pi)) < 1e-12);
  auto shifted = make_custom_density([](double x) { return 5.0 - x * x; },
                                     [](double x) { return -2.0 * x; }, 2.0);
  CHECK(rel(shifted.density(0.7), d.density(0.7)) < 1e-12);
}

TEST_CASE("custom density from samples") {
  auto dir = std::filesystem::temp_directory_path() / "lbound_tm_test";
  std::filesystem::create_directories(dir);
  auto path = dir / "gauss.csv";
  {
    std::ofstream os(path);
    os << "x,logpi\n";
    for (int i = 0; i <= 1000; ++i) {
      double x = i * 0.01;
      os << x << "," << -x * x << "\n";
    }
  }
  // The interpolated slope at x = 1 sits slightly below 2.
  auto d = load_custom_density_csv(path, 1.95);
  CHECK(d.kind() == DensityKind::CustomLogDensity);
  CHECK(rel(d.z_const(), std::sqrt(std::numbers::pi)) < 1e-6);
  CHECK(d.log_density_unnorm(-1.234) == doctest::Approx(d.log_density_unnorm(1.234)));
  CHECK(d.grad_log_density(1.5) == doctest::Approx(-3.0).epsilon(1e-3));
  CHECK(check_a1(d).all_pass());
  CHECK(std::abs(mass_interval(d, 0.0, 2.0) - oracle::kHalfErf2) < 1e-6);

  CHECK(kind_of([&] { load_custom_density_csv(dir / "missing.csv", 2.0); }) ==
        ErrorKind::Io);
  std::filesystem::remove_all(dir);
}
