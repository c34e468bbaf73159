#include <gtest/gtest.h>

#include <cmath>

#include "../oracles.hpp"
#include "piggybank/error.hpp"
#include "piggybank/qubit.hpp"

namespace piggybank {
namespace {

constexpr double kTol = 1e-12;

void expect_state(const Qubit& q, double a0, double a1, double tol = kTol) {
  EXPECT_NEAR(q.amp0().real(), a0, tol);
  EXPECT_NEAR(q.amp1().real(), a1, tol);
  EXPECT_NEAR(q.amp0().imag(), 0.0, tol);
  EXPECT_NEAR(q.amp1().imag(), 0.0, tol);
}

Qubit random_qubit(Rng& rng) {
  const double theta = std::acos(2 * rng.uniform() - 1) / 2;
  const double phase = 2 * kPi * rng.uniform();
  return Qubit(std::cos(theta), std::polar(std::sin(theta), phase));
}

TEST(Angle, CanonicalizesIntoHalfTurn) {
  EXPECT_DOUBLE_EQ(Angle(0.0).radians(), 0.0);
  EXPECT_NEAR(Angle(-kPi / 3).radians(), 2 * kPi / 3, kTol);
  EXPECT_NEAR(Angle(kPi + 0.25).radians(), 0.25, kTol);
  EXPECT_DOUBLE_EQ(Angle(kPi).radians(), 0.0);
  EXPECT_LT(Angle(std::nextafter(kPi, 0.0)).radians(), kPi);
}

TEST(Angle, HalfTurnIsSameRay) {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const double a = 10 * (rng.uniform() - 0.5);
    EXPECT_NEAR(circular_distance(Angle(a + kPi), Angle(a)), 0.0, 1e-9);
    const Qubit plus = rotate(Qubit{}, Rotation(a + kPi));
    const Qubit base = rotate(Qubit{}, Rotation(a));
    expect_state(plus, -base.amp0().real(), -base.amp1().real());
  }
}

TEST(LinearState, KnownPoints) {
  expect_state(linear_state(Angle(0.0)), 1.0, 0.0);
  expect_state(linear_state(Angle(kPi / 2)), 0.0, 1.0);
  expect_state(linear_state(Angle(kPi / 4)), 1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
}

TEST(Qubit, RejectsUnnormalizedAmplitudes) {
  EXPECT_THROW(Qubit(1.0, 1.0), Error);
  EXPECT_NO_THROW(Qubit(0.6, 0.8));
}

TEST(Rotate, IdentityAndQuarterTurn) {
  expect_state(rotate(Qubit{}, Rotation(0.0)), 1.0, 0.0);
  expect_state(rotate(Qubit{}, Rotation(kPi / 2)), 0.0, 1.0);
}

TEST(Rotate, MatchesAngleAddition) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const double a = kPi * rng.uniform();
    const double t = 4 * kPi * (rng.uniform() - 0.5);
    const Qubit r = rotate(linear_state(Angle(a)), Rotation(t));
    EXPECT_NEAR(circular_distance(polarization_angle(r), Angle(a + t)), 0.0, 1e-9);
  }
}

TEST(Rotate, CommutesOnRandomInputs) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const Qubit q = random_qubit(rng);
    const Rotation a(2 * kPi * rng.uniform());
    const Rotation b(2 * kPi * rng.uniform());
    const Qubit ab = rotate(rotate(q, a), b);
    const Qubit ba = rotate(rotate(q, b), a);
    EXPECT_NEAR(std::abs(ab.amp0() - ba.amp0()), 0.0, kTol);
    EXPECT_NEAR(std::abs(ab.amp1() - ba.amp1()), 0.0, kTol);

    // Independent matrix-product oracle.
    const auto m = oracle::mul(oracle::rotation(b.radians()), oracle::rotation(a.radians()));
    const auto expect0 = m[0][0] * q.amp0() + m[0][1] * q.amp1();
    const auto expect1 = m[1][0] * q.amp0() + m[1][1] * q.amp1();
    EXPECT_NEAR(std::abs(ab.amp0() - expect0), 0.0, kTol);
    EXPECT_NEAR(std::abs(ab.amp1() - expect1), 0.0, kTol);
  }
}

TEST(Rotation, CommutativityOnGrid) {
  double worst = 0.0;
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 64; ++j) {
      const Rotation a(2 * kPi * i / 64), b(2 * kPi * j / 64);
      const auto ab = oracle::mul(a.matrix(), b.matrix());
      const auto ba = oracle::mul(b.matrix(), a.matrix());
      worst = std::max(worst, oracle::max_abs_diff(ab, ba));
      EXPECT_EQ(a * b, b * a);
    }
  }
  EXPECT_LT(worst, kTol);
}

TEST(Rotation, Orthogonal) {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const auto m = Rotation(100 * (rng.uniform() - 0.5)).matrix();
    oracle::Mat2 mt{{{m[0][0], m[1][0]}, {m[0][1], m[1][1]}}};
    const auto prod = oracle::mul(mt, m);
    EXPECT_LT(oracle::max_abs_diff(prod, {{{1, 0}, {0, 1}}}), kTol);
  }
}

TEST(Adjoint, NegatesAngle) {
  EXPECT_EQ(adjoint(Rotation(0.0)), Rotation(0.0));
  EXPECT_NEAR(adjoint(Rotation(kPi / 3)).angle().radians(), 2 * kPi / 3, kTol);
  EXPECT_DOUBLE_EQ(adjoint(Rotation(kPi / 3)).radians(), -kPi / 3);
}

TEST(Adjoint, RoundTripRestoresState) {
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    const Qubit q = random_qubit(rng);
    const Rotation r(10 * (rng.uniform() - 0.5));
    const Qubit back = rotate(rotate(q, r), adjoint(r));
    EXPECT_NEAR(std::abs(back.amp0() - q.amp0()), 0.0, kTol);
    EXPECT_NEAR(std::abs(back.amp1() - q.amp1()), 0.0, kTol);
  }
}

TEST(Rotate, PreservesNormOverLongChains) {
  Rng rng(13);
  Qubit q = random_qubit(rng);
  for (int i = 0; i < 10000; ++i) {
    const Rotation r(2 * kPi * rng.uniform());
    q = rng.bernoulli(0.5) ? rotate(q, r) : rotate(q, adjoint(r));
    ASSERT_NEAR(q.norm_squared(), 1.0, kTol);
  }
}

TEST(Measure, DeterministicCases) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Angle beta(kPi * rng.uniform());
    EXPECT_EQ(measure(linear_state(beta), beta, rng), Outcome::Aligned);
    EXPECT_EQ(measure(linear_state(Angle(beta.radians() + kPi / 2)), beta, rng),
              Outcome::Orthogonal);
  }
}

TEST(Measure, DiagonalStateIsFair) {
  Rng rng(17);
  constexpr int kN = 100000;
  int aligned = 0;
  for (int i = 0; i < kN; ++i) {
    aligned += measure(linear_state(Angle(kPi / 4)), Angle(0.0), rng) == Outcome::Aligned;
  }
  const double sigma = std::sqrt(0.25 / kN);
  EXPECT_NEAR(static_cast<double>(aligned) / kN, 0.5, 3 * sigma);
}

TEST(Measure, MalusLawOnGrid) {
  Rng rng(19);
  constexpr int kN = 100000;
  for (int s = 0; s < 8; ++s) {
    for (int b = 0; b < 8; ++b) {
      const double state = kPi * s / 8, basis = kPi * b / 8;
      const double p = std::pow(std::cos(state - basis), 2);
      int aligned = 0;
      for (int i = 0; i < kN; ++i) {
        aligned += measure(linear_state(Angle(state)), Angle(basis), rng) == Outcome::Aligned;
      }
      const double bound = 3 * std::sqrt(p * (1 - p) / kN) + 1e-12;
      EXPECT_NEAR(static_cast<double>(aligned) / kN, p, bound) << "state " << s << " basis " << b;
    }
  }
}

TEST(Measure, SameSeedSameOutcomes) {
  Rng a(99), b(99);
  for (int i = 0; i < 1000; ++i) {
    const Angle s(0.3 * i);
    EXPECT_EQ(measure(linear_state(s), Angle(0.1), a), measure(linear_state(s), Angle(0.1), b));
  }
}

}  // namespace
}  // namespace piggybank
