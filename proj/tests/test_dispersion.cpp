#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "spdcshape/dispersion.hpp"

using namespace spdc;

namespace {

// Frozen by a 40-digit central-difference evaluation of the handbook LiIO3
// law, independent of this library.
constexpr double kNo810 = 1.8670032390343088;
constexpr double kNsOracle = 6.381020896474825e-9;  // s/m, o-pol at 810 nm
constexpr double kNpOracle = 6.531496882745989e-9;  // s/m, e-pol at 405 nm, 90 deg to axis
constexpr double kPhiOracleDeg = 17.316250912115574;

}  // namespace

TEST(RefractiveIndex, ConstantModel) {
  const auto m = constant_index(1.5);
  EXPECT_DOUBLE_EQ(refractive_index(m, 0.8e-6, Polarization::ordinary), 1.5);
  EXPECT_DOUBLE_EQ(refractive_index(m, 2.3e-6, Polarization::extraordinary, 0.3), 1.5);
}

TEST(RefractiveIndex, ExtraordinaryLimits) {
  const auto m = lithium_iodate();
  const double lam = 0.6e-6;
  EXPECT_EQ(refractive_index(m, lam, Polarization::extraordinary, 0.0),
            refractive_index(m, lam, Polarization::ordinary));
  const double ne = std::sqrt(m.extraordinary.n_squared(0.6));
  EXPECT_EQ(refractive_index(m, lam, Polarization::extraordinary, kPi / 2), ne);
  // Intermediate angle lies between the principal indices (negative uniaxial).
  const double mid = refractive_index(m, lam, Polarization::extraordinary, 0.7);
  EXPECT_LT(mid, refractive_index(m, lam, Polarization::ordinary));
  EXPECT_GT(mid, ne);
}

TEST(RefractiveIndex, LiIO3OrdinaryAt810AgreesAcrossSources) {
  const double a = refractive_index(lithium_iodate(), 810e-9, Polarization::ordinary);
  const double b = refractive_index(lithium_iodate_alt(), 810e-9, Polarization::ordinary);
  EXPECT_NEAR(a, kNo810, 1e-12);
  EXPECT_NEAR(a, b, 1e-3);
}

TEST(RefractiveIndex, OutOfRange) {
  const auto m = lithium_iodate();
  try {
    refractive_index(m, 0.2e-6, Polarization::ordinary);
    FAIL() << "expected OutOfRange";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfRange);
  }
  EXPECT_THROW(refractive_index(m, 6e-6, Polarization::ordinary), Error);
}

TEST(IndexModel, UnknownBuiltin) {
  try {
    builtin_index_model("BBO-nonexistent");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownModel);
  }
}

TEST(IndexModel, FileRoundTrip) {
  const auto m = lithium_iodate();
  std::istringstream in(format_index_model(m));
  const auto back = parse_index_model(in);
  EXPECT_EQ(back.name, m.name);
  EXPECT_EQ(back.source, m.source);
  for (double um : {0.4, 0.81, 1.5, 3.0}) {
    EXPECT_EQ(refractive_index(back, um * 1e-6, Polarization::ordinary),
              refractive_index(m, um * 1e-6, Polarization::ordinary));
    EXPECT_EQ(refractive_index(back, um * 1e-6, Polarization::extraordinary),
              refractive_index(m, um * 1e-6, Polarization::extraordinary));
  }
}

TEST(IndexModel, SellmeierFormFromFile) {
  // Fused-silica-like three-term Sellmeier law.
  std::istringstream in(
      "name = silica\nsource = test\nform = sellmeier\nrange_um_min = 0.3\nrange_um_max = 2.0\n"
      "B1_o = 0.6961663\nC1_o = 0.0046791482\nB2_o = 0.4079426\nC2_o = 0.013512063\n"
      "B3_o = 0.8974794\nC3_o = 97.934003\n"
      "B1_e = 0.6961663\nC1_e = 0.0046791482\nB2_e = 0.4079426\nC2_e = 0.013512063\n"
      "B3_e = 0.8974794\nC3_e = 97.934003\n");
  const auto m = parse_index_model(in);
  EXPECT_NEAR(refractive_index(m, 1.0e-6, Polarization::ordinary), 1.4504, 1e-4);
  // Analytic and finite-difference group indices agree for this form too.
  const double na = inverse_group_velocity(m, 1.0e-6, Polarization::ordinary);
  const double nf = inverse_group_velocity_fd(m, 1.0e-6, Polarization::ordinary);
  EXPECT_NEAR(na, nf, 1e-8 * na);
}

TEST(IndexModel, MissingPairIsConfigError) {
  std::istringstream in("name = x\nrange_um_min = 0.3\nrange_um_max = 2\nB1_o = 1.0\n");
  try {
    parse_index_model(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
  }
}

TEST(Wavevector, DirectFormula) {
  EXPECT_NEAR(wavevector(constant_index(1.5), 1e-6, Polarization::ordinary), 3.0 * kPi * 1e6, 1e-6);
}

TEST(Wavevector, DecreasingWithWavelength) {
  const auto m = lithium_iodate();
  double prev = std::numeric_limits<double>::infinity();
  for (double um = 0.32; um < 4.9; um += 0.01) {
    for (auto pol : {Polarization::ordinary, Polarization::extraordinary}) {
      const double k = wavevector(m, um * 1e-6, pol);
      EXPECT_GT(k, 0.0);
      (void)k;
    }
    const double k = wavevector(m, um * 1e-6, Polarization::ordinary);
    EXPECT_LT(k, prev) << um;
    prev = k;
  }
}

TEST(Wavevector, RatioConsistentWithPhaseMatching) {
  const auto m = lithium_iodate();
  const double kp = wavevector(m, 405e-9, Polarization::extraordinary);
  const double ks = wavevector(m, 810e-9, Polarization::ordinary);
  const double np = refractive_index(m, 405e-9, Polarization::extraordinary);
  const double ns = refractive_index(m, 810e-9, Polarization::ordinary);
  EXPECT_NEAR(kp / ks, 2.0 * np / ns, 1e-12);
  const double phi = phase_matching_angle(m, 405e-9);
  EXPECT_NEAR(kp / ks, 2.0 * std::cos(phi), 1e-12);
}

TEST(InverseGroupVelocity, DispersionlessLimit) {
  EXPECT_DOUBLE_EQ(inverse_group_velocity(constant_index(1.7), 0.9e-6, Polarization::ordinary),
                   1.7 / kSpeedOfLight);
}

TEST(InverseGroupVelocity, MatchesFiniteDifferenceOracle) {
  const auto m = lithium_iodate();
  EXPECT_NEAR(inverse_group_velocity(m, 810e-9, Polarization::ordinary), kNsOracle, 1e-9 * kNsOracle);
  EXPECT_NEAR(inverse_group_velocity(m, 405e-9, Polarization::extraordinary), kNpOracle, 1e-9 * kNpOracle);
}

TEST(InverseGroupVelocity, AnalyticAndFiniteDifferenceAgree) {
  const auto m = lithium_iodate();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> um(0.32, 4.8);
  std::uniform_real_distribution<double> angle(0.0, kPi / 2);
  for (int i = 0; i < 20; ++i) {
    const double lam = um(rng) * 1e-6;
    const double th = angle(rng);
    for (auto pol : {Polarization::ordinary, Polarization::extraordinary}) {
      const double a = inverse_group_velocity(m, lam, pol, th);
      const double f = inverse_group_velocity_fd(m, lam, pol, th);
      EXPECT_GT(a, 0.0);
      EXPECT_NEAR(a, f, 1e-8 * a) << lam << " " << th;
    }
  }
}

TEST(PhaseMatchingAngle, CollinearWhenIndicesEqual) {
  EXPECT_EQ(phase_matching_angle(constant_index(1.6), 405e-9), 0.0);
}

TEST(PhaseMatchingAngle, LiIO3At405) {
  const double phi = phase_matching_angle(lithium_iodate(), 405e-9);
  EXPECT_NEAR(rad_to_deg(phi), kPhiOracleDeg, 1e-9);
  EXPECT_NEAR(rad_to_deg(phi), 17.1, 0.3);
  const double kp = wavevector(lithium_iodate(), 405e-9, Polarization::extraordinary);
  const double ks = wavevector(lithium_iodate(), 810e-9, Polarization::ordinary);
  EXPECT_LT(std::abs(kp - 2.0 * ks * std::cos(phi)), 1e-6 * kp);
}

TEST(PhaseMatchingAngle, NoSolutionWhenPumpIndexHigher) {
  try {
    phase_matching_angle(constant_index(1.5, 1.6), 405e-9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoSolution);
  }
  EXPECT_THROW(phase_matching_angle(lithium_iodate(), 405e-9, false), Error);
}

TEST(CrystalConfig, Validation) {
  CrystalConfig c;
  c.length = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c.length = 1e-3;
  c.internal_angle = kPi / 2;
  EXPECT_THROW(c.validate(), Error);
  c.internal_angle = 0.3;
  EXPECT_NO_THROW(c.validate());
}
