#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include "ngl/harmonic.hpp"

using namespace ngl;
using namespace ngl::harmonic;

namespace {

// (2p)! / (p!)^2 + 4^p with arbitrary-precision factorials.
boost::multiprecision::cpp_int robertson_oracle(int p) {
  using boost::multiprecision::cpp_int;
  cpp_int f2p = 1, fp = 1;
  for (int i = 2; i <= 2 * p; ++i) f2p *= i;
  for (int i = 2; i <= p; ++i) fp *= i;
  return (cpp_int(1) << (2 * p)) + f2p / (fp * fp);
}

}  // namespace

TEST_CASE("Fourier reconstruction of a band-limited trace") {
  auto v = [](double t) { return 0.3 + std::cos(3 * t) - 0.25 * std::sin(7 * t) + 0.1 * std::cos(11 * t + 0.2); };
  const auto tr = sample_trace(v, 64);
  CHECK(tr.degree() == 32);
  CHECK(tr.a[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(tr.a[3] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tr.b[7] == doctest::Approx(-0.25).epsilon(1e-12));
  for (double t : {0.0, 0.123, 1.7, 4.0, 6.2}) CHECK(std::abs(tr(t) - v(t)) < 1e-10);
  // Nyquist mode round-trips.
  const auto ny = sample_trace([](double t) { return std::cos(4 * t); }, 8);
  for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(ny(ny.theta(k)) - ny.values[k]) < 1e-12);
}

TEST_CASE("sign changes") {
  CHECK(sign_changes(sample_trace([](double) { return 1.0; }, 64)).count == 0);
  for (int n = 1; n <= 10; ++n) {
    // A small phase keeps the samples off the zeros.
    const auto tr = sample_trace([n](double t) { return std::cos(n * t + 1e-3); }, 257);
    CHECK(sign_changes(tr).count == 2 * n);
  }
  const auto mixed = sample_trace([](double t) { return std::cos(3 * t) + 0.1 * std::cos(t); }, 512);
  // Dense root isolation oracle.
  int oracle = 0;
  const int m = 100000;
  auto f = [](double t) { return std::cos(3 * t) + 0.1 * std::cos(t); };
  for (int k = 0; k < m; ++k)
    if ((f(two_pi * k / m) > 0) != (f(two_pi * (k + 1) / m) > 0)) ++oracle;
  CHECK(oracle == 6);
  CHECK(sign_changes(mixed).count == oracle);
  // Invariance under positive scaling and negation.
  std::vector<double> s = mixed.values;
  for (double& x : s) x *= -3.5;
  CHECK(sign_changes(s).count == 6);
  CHECK_THROWS_AS(sign_changes(std::vector<double>(16, 0.0)), ValidationError);
  std::vector<double> flat{1, 0, 0, 0, -1, -2, 3, 4};
  const auto fl = sign_changes(flat);
  CHECK(fl.flagged);
  CHECK(fl.count == 2);
}

TEST_CASE("harmonic extension closed forms") {
  const auto c5 = sample_trace([](double t) { return std::cos(5 * t); }, 64);
  CHECK(harmonic_value(c5, {0.5, 0.0}) == doctest::Approx(0.03125).epsilon(1e-9));
  const auto c1 = sample_trace([](double t) { return std::cos(t); }, 32);
  for (Point z : {Point{0.3, -0.2}, Point{-0.7, 0.1}}) CHECK(harmonic_value(c1, z) == doctest::Approx(z.x).epsilon(1e-13));
  const auto k = sample_trace([](double) { return 2.5; }, 32);
  CHECK(harmonic_value(k, {0.4, 0.4}) == doctest::Approx(2.5).epsilon(1e-14));
  const auto g = harmonic_extend(c1, 0.5, 65);
  CHECK(g.max_abs() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(harmonic_extend(c1, 1.0), ValidationError);
}

TEST_CASE("mean value and maximum principle on random traces") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto tr = random_trace(8, seed);
    double mean = 0.0;
    for (double v : tr.values) mean += v;
    mean /= tr.size();
    CHECK(harmonic_value(tr, {0, 0}) == doctest::Approx(mean).epsilon(1e-10).scale(1.0));
    // Interior samples of 0.6 D never beat the circle sup.
    const double rim = circle_sup(tr, 0.6, 8192);
    const auto g = harmonic_extend(tr, 0.6, 101);
    CHECK(g.max_abs() <= rim + 1e-9);
  }
}

TEST_CASE("Robertson constant against big-integer arithmetic") {
  CHECK(robertson_constant(0).value == 2);
  CHECK(robertson_constant(1).value == 6);
  CHECK(robertson_constant(5).value == 1276);
  for (int p = 0; p <= 31; ++p) {
    const auto r = robertson_constant(p);
    CHECK(boost::multiprecision::cpp_int(r.value) == robertson_oracle(p));
    CHECK(r.within);
  }
  CHECK_THROWS_AS(robertson_constant(32), ValidationError);
}

TEST_CASE("growth against sign changes") {
  for (int n = 1; n <= 10; ++n) {
    const auto tr = sample_trace([n](double t) { return std::cos(n * t + 1e-3); }, 512);
    const auto g = growth_vs_signs_check(tr, 0.25);
    CHECK(g.lhs_ratio == doctest::Approx(std::pow(2.0, n)).epsilon(1e-6));
    CHECK(g.n_v == 2 * n);
    CHECK(g.holds);
  }
  const auto one = growth_vs_signs_check(sample_trace([](double) { return 1.0; }, 32), 0.1);
  CHECK(one.lhs_ratio == 1.0);
  CHECK(one.n_v == 0);
  CHECK(one.rhs_bound == doctest::Approx(12.0));
  CHECK(one.holds);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto tr = random_trace(1 + static_cast<int>(seed % 10), seed);
    CHECK(growth_vs_signs_check(tr, 0.2).holds);
  }
}

TEST_CASE("zero count check on closed forms") {
  schrodinger::LocalizeOptions opts;
  opts.planar_n = 129;
  const auto f = schrodinger::make_planar([](double x, double) { return x; }, {}, opts);
  const double rp = 1.0 / 32, rm = default_rho_minus(rp, 1.0, 1.0);
  CHECK(rm == doctest::Approx(1.0 / 160));
  const auto z = zero_count_check(f, rp, rm);
  CHECK(z.lhs == doctest::Approx(std::log(5.0)).epsilon(1e-9));
  CHECK(z.zero_count == 2);
  CHECK(z.ratio == doctest::Approx(std::log(5.0) / 3).epsilon(1e-9));
  const auto c = schrodinger::make_planar([](double, double) { return -2.0; }, {}, opts);
  CHECK(zero_count_check(c, rp, rm).ratio == 0.0);
  CHECK_THROWS_AS(zero_count_check(c, 0.6, 0.1), ValidationError);
}
