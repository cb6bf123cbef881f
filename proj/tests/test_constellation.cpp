#include <doctest.h>

#include <cmath>
#include <complex>

#include "mimosep/constellation.hpp"
#include "mimosep/error.hpp"
#include "mimosep/rng.hpp"

using namespace mimosep;
using cd = std::complex<double>;

TEST_CASE("constellation point sets") {
  const Constellation pam2 = Constellation::build(Modulation::Pam, 2);
  CHECK(std::abs(pam2.point(0) - cd(-1.0)) < 1e-15);
  CHECK(std::abs(pam2.point(1) - cd(1.0)) < 1e-15);

  const Constellation qam4 = Constellation::build(Modulation::Qam, 4);
  const double h = 1.0 / std::sqrt(2.0);
  for (const cd p : qam4.points()) {
    CHECK(std::abs(std::abs(p.real()) - h) < 1e-15);
    CHECK(std::abs(std::abs(p.imag()) - h) < 1e-15);
  }
  CHECK(qam4.label() == "4-QAM");
  CHECK(Constellation::build(Modulation::Psk, 8).label() == "8-PSK");
}

TEST_CASE("unit energy, zero mean, distinct points") {
  for (const Modulation kind : {Modulation::Pam, Modulation::Psk, Modulation::Qam}) {
    for (unsigned m = 2; m <= 1024; m *= 2) {
      if (kind == Modulation::Qam) {
        const auto side = static_cast<unsigned>(std::lround(std::sqrt(double(m))));
        if (side * side != m || m < 4) continue;
      }
      CAPTURE(m);
      const Constellation c = Constellation::build(kind, m);
      REQUIRE(c.order() == m);
      double energy = 0.0;
      cd mean = 0.0;
      for (const cd p : c.points()) {
        energy += std::norm(p);
        mean += p;
      }
      CHECK(std::abs(energy / m - 1.0) < 1e-12);
      CHECK(std::abs(mean / double(m)) < 1e-12);
      if (m <= 64) CHECK(c.min_distance() > 0.0);
    }
  }
}

TEST_CASE("minimum distances") {
  for (const unsigned m : {2u, 4u, 8u, 16u}) {
    const double dm = m;
    CHECK(Constellation::build(Modulation::Pam, m).min_distance() ==
          doctest::Approx(2.0 * std::sqrt(3.0 / (dm * dm - 1.0))).epsilon(1e-12));
  }
  for (const unsigned m : {4u, 16u, 64u}) {
    CHECK(Constellation::build(Modulation::Qam, m).min_distance() ==
          doctest::Approx(std::sqrt(6.0 / (m - 1.0))).epsilon(1e-12));
  }
}

TEST_CASE("invalid orders") {
  CHECK_THROWS_AS(Constellation::build(Modulation::Qam, 8), Error);
  CHECK_THROWS_AS(Constellation::build(Modulation::Qam, 2), Error);
  CHECK_THROWS_AS(Constellation::build(Modulation::Pam, 1), Error);
  try {
    Constellation::build(Modulation::Qam, 32);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidOrder);
  }
  CHECK(parse_modulation("qam") == Modulation::Qam);
  CHECK_THROWS_AS(parse_modulation("ask"), Error);
}

TEST_CASE("hard decisions") {
  const Constellation pam2 = Constellation::build(Modulation::Pam, 2);
  CHECK(hard_decision(cd(0.9, -0.1), pam2) == 1);
  CHECK(hard_decision(cd(0.0, 0.0), pam2) == 0);  // tie goes to the lowest index

  const Constellation qam4 = Constellation::build(Modulation::Qam, 4);
  const cd y = cd(1.0, 0.9) / std::sqrt(2.0);
  const std::size_t got = hard_decision(y, qam4);
  std::size_t best = 0;
  for (std::size_t i = 1; i < 4; ++i) {
    if (std::abs(y - qam4.point(i)) < std::abs(y - qam4.point(best))) best = i;
  }
  CHECK(got == best);
  CHECK(std::abs(qam4.point(got) - cd(1.0, 1.0) / std::sqrt(2.0)) < 1e-15);

  RngStream s(3, 0);
  for (const Modulation kind : {Modulation::Pam, Modulation::Psk, Modulation::Qam}) {
    for (const unsigned m : {4u, 16u, 64u}) {
      const Constellation c = Constellation::build(kind, m);
      const double radius = 0.499 * c.min_distance();
      for (std::size_t i = 0; i < m; ++i) {
        CHECK(hard_decision(c.point(i), c) == i);
        const cd eps = std::polar(radius * s.uniform(), 2.0 * 3.141592653589793 * s.uniform());
        CHECK(hard_decision(c.point(i) + eps, c) == i);
      }
    }
  }
}

TEST_CASE("random symbols are uniform and reproducible") {
  const Constellation c = Constellation::build(Modulation::Psk, 8);
  RngStream a(11, 2), b(11, 2);
  const auto x = random_symbols(1000000, c, a);
  CHECK(x == random_symbols(1000000, c, b));
  std::vector<double> counts(8, 0.0);
  for (const auto i : x) counts[i] += 1.0;
  const double p = 1.0 / 8.0, sd = std::sqrt(1e6 * p * (1 - p));
  for (const double n : counts) CHECK(std::abs(n - 1e6 * p) < 3.0 * sd);

  const Constellation pam2 = Constellation::build(Modulation::Pam, 2);
  RngStream s(12, 0);
  double mean = 0.0;
  for (const auto i : random_symbols(1000000, pam2, s)) mean += pam2.point(i).real();
  CHECK(std::abs(mean / 1e6) < 3e-3);
}
