#include <gtest/gtest.h>

#include <cmath>

#include "bellsim/detector.hpp"
#include "bellsim/experiment.hpp"

namespace bellsim {
namespace {

HiddenVariable at_u(double u) {
    return HiddenVariable::on_sphere({u, std::sqrt(1.0 - u * u), 0.0});
}

const DetectorSetting kAlongX = DetectorSetting::sphere({1.0, 0.0, 0.0});

Outcome detect_u(const DetectionModel& m, double u) {
    RandomStream s(0, 0);
    return detect(m, kAlongX, at_u(u), s);
}

TEST(Detect, IdealAlongSettingIsPlus) {
    RandomStream s(0, 0);
    EXPECT_EQ(detect(DetectionModel::ideal(), kAlongX, HiddenVariable::on_sphere({1, 0, 0}), s), Outcome::Plus);
    EXPECT_EQ(detect(DetectionModel::ideal(), kAlongX, HiddenVariable::on_sphere({-1, 0, 0}), s), Outcome::Minus);
}

TEST(Detect, IdealNeverNull) {
    RandomStream s(3, 0);
    for (int i = 0; i < 10000; ++i) {
        ASSERT_NE(detect(DetectionModel::ideal(), kAlongX, sample_uniform(HvSpace::Sphere, s), s), Outcome::Null);
        ASSERT_NE(detect(DetectionModel::ideal(), DetectorSetting::circle(0.3), sample_uniform(HvSpace::Circle, s), s),
                  Outcome::Null);
    }
}

TEST(Detect, TieAtZeroIsPlus) { EXPECT_EQ(detect_u(DetectionModel::ideal(), 0.0), Outcome::Plus); }

TEST(Detect, InsideBandIsNull) {
    const auto m = DetectionModel::symmetric_band(std::asin(0.2));
    EXPECT_EQ(detect_u(m, 0.1), Outcome::Null);
    EXPECT_EQ(detect_u(m, -0.1), Outcome::Null);
    EXPECT_EQ(detect_u(m, 0.0), Outcome::Null);
    EXPECT_EQ(detect_u(m, 0.3), Outcome::Plus);
    EXPECT_EQ(detect_u(m, -0.3), Outcome::Minus);
}

TEST(Detect, BandEdgesFollowIntervalEnds) {
    // [0, sin d+) is null on the plus side, (-sin d-, 0) on the minus side.
    DetectionModel m;
    m.band_half_angle_plus = std::asin(0.25);
    m.band_half_angle_minus = std::asin(0.5);
    const double s_plus = std::sin(m.band_half_angle_plus);
    const double s_minus = std::sin(m.band_half_angle_minus);
    EXPECT_EQ(detect_u(m, s_plus), Outcome::Plus);
    EXPECT_EQ(detect_u(m, std::nextafter(s_plus, 0.0)), Outcome::Null);
    EXPECT_EQ(detect_u(m, -s_minus), Outcome::Minus);
    EXPECT_EQ(detect_u(m, std::nextafter(-s_minus, 0.0)), Outcome::Null);
}

TEST(Detect, CapsAreNull) {
    DetectionModel m;
    m.cap_half_angle = kPi / 6;
    EXPECT_EQ(detect_u(m, 0.9), Outcome::Null);
    EXPECT_EQ(detect_u(m, -0.9), Outcome::Null);
    EXPECT_EQ(detect_u(m, 0.8), Outcome::Plus);
}

TEST(Detect, CircleArcs) {
    const auto m = DetectionModel::arcs(kPi / 15);
    const DetectorSetting analyser = DetectorSetting::circle(0.0);
    RandomStream s(0, 0);
    EXPECT_EQ(detect(m, analyser, HiddenVariable::on_circle(kPi / 4 + kPi / 30), s), Outcome::Null);
    EXPECT_EQ(detect(m, analyser, HiddenVariable::on_circle(kPi / 2), s), Outcome::Minus);
    EXPECT_EQ(detect(m, analyser, HiddenVariable::on_circle(0.0), s), Outcome::Plus);
    EXPECT_EQ(detect(m, analyser, HiddenVariable::on_circle(kPi), s), Outcome::Plus);
    EXPECT_EQ(detect(m, analyser, HiddenVariable::on_circle(3 * kPi / 4 + 0.1), s), Outcome::Null);
    EXPECT_EQ(detect(m, analyser, HiddenVariable::on_circle(3 * kPi / 4 + 0.3), s), Outcome::Plus);
}

TEST(Detect, CircleSectorsHavePeriodPi) {
    const DetectorSetting analyser = DetectorSetting::circle(0.4);
    RandomStream s(0, 0);
    for (double x = 0.0; x < kPi; x += 0.01) {
        ASSERT_EQ(detect(DetectionModel::ideal(), analyser, HiddenVariable::on_circle(x), s),
                  detect(DetectionModel::ideal(), analyser, HiddenVariable::on_circle(x + kPi), s));
    }
}

TEST(Detect, SpaceMismatchThrows) {
    RandomStream s(0, 0);
    EXPECT_THROW(detect(DetectionModel::ideal(), kAlongX, HiddenVariable::on_circle(0.0), s), std::invalid_argument);
    EXPECT_THROW(detect(DetectionModel::ideal(), DetectorSetting::circle(0.0), at_u(0.5), s), std::invalid_argument);
}

TEST(Detect, FuzzRampMatchesLinearLaw) {
    DetectionModel m = DetectionModel::symmetric_band(std::asin(0.2));
    m.fuzz_width = 0.2;
    const double inner = 0.2;
    const double outer = std::sin(std::asin(0.2) + 0.2);
    const double u = inner + 0.3 * (outer - inner);
    const int n = 100000;
    int detected = 0;
    for (int i = 0; i < n; ++i) {
        RandomStream s(77, static_cast<std::uint64_t>(i));
        detected += detect(m, kAlongX, at_u(u), s) == Outcome::Plus;
    }
    const double sigma = std::sqrt(0.3 * 0.7 / n);
    EXPECT_NEAR(static_cast<double>(detected) / n, 0.3, 4 * sigma);
    EXPECT_EQ(detect_u(m, outer + 1e-9), Outcome::Plus);
    EXPECT_EQ(detect_u(m, inner - 1e-9), Outcome::Null);
}

TEST(Detect, DeterministicOutcomesDrawNothing) {
    const auto m = DetectionModel::symmetric_band(0.3);
    RandomStream used(5, 0), fresh(5, 0);
    for (double u : {-0.9, -0.1, 0.0, 0.1, 0.9}) detect(m, kAlongX, at_u(u), used);
    EXPECT_EQ(used.next_u64(), fresh.next_u64());
}

TEST(DetectionModel, Validation) {
    EXPECT_NO_THROW(DetectionModel::ideal().validate());
    EXPECT_THROW(DetectionModel::symmetric_band(-0.1).validate(), std::invalid_argument);
    EXPECT_THROW(DetectionModel::symmetric_band(kPi / 2).validate(), std::invalid_argument);
    DetectionModel fuzzy = DetectionModel::symmetric_band(1.0);
    fuzzy.fuzz_width = 0.6;
    EXPECT_THROW(fuzzy.validate(), std::invalid_argument);
    EXPECT_THROW(DetectionModel::arcs(kPi / 4).validate(), std::invalid_argument);
    DetectionModel cap;
    cap.cap_half_angle = kPi / 2;
    EXPECT_THROW(cap.validate(), std::invalid_argument);
    EXPECT_TRUE(DetectionModel::ideal().is_ideal());
    EXPECT_FALSE(DetectionModel::arcs(0.1).is_ideal());
}

TEST(DetectorSetting, CircleAngleReducedModPi) {
    EXPECT_NEAR(DetectorSetting::circle(kPi + 0.25).angle(), 0.25, 1e-15);
    EXPECT_NEAR(DetectorSetting::circle(-0.25).angle(), kPi - 0.25, 1e-15);
    EXPECT_THROW(DetectorSetting::sphere({2.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(DetectorSetting, RelativeAngle) {
    EXPECT_NEAR(relative_angle(DetectorSetting::sphere_in_plane(0.2), DetectorSetting::sphere_in_plane(2.9)), 2.7, 1e-12);
    EXPECT_NEAR(relative_angle(DetectorSetting::circle(0.0), DetectorSetting::circle(3 * kPi / 8)), 3 * kPi / 8, 1e-15);
    EXPECT_NEAR(relative_angle(DetectorSetting::circle(0.0), DetectorSetting::circle(7 * kPi / 8)), kPi / 8, 1e-15);
}

TEST(NullFraction, Examples) {
    EXPECT_EQ(null_fraction(DetectionModel::ideal(), HvSpace::Sphere), 0.0);
    EXPECT_EQ(null_fraction(DetectionModel::ideal(), HvSpace::Circle), 0.0);
    EXPECT_NEAR(null_fraction(DetectionModel::arcs(kPi / 15), HvSpace::Circle), 4.0 / 15.0, 1e-15);
    EXPECT_NEAR(null_fraction(DetectionModel::symmetric_band(kPi / 6), HvSpace::Sphere), 0.5, 1e-15);
}

TEST(NullFraction, BandsPlusCapsClosedForm) {
    DetectionModel m;
    m.band_half_angle_plus = 0.2;
    m.band_half_angle_minus = 0.35;
    m.cap_half_angle = 0.4;
    const double expected = (std::sin(0.2) + std::sin(0.35)) / 2.0 + (1.0 - std::cos(0.4));
    EXPECT_NEAR(null_fraction(m, HvSpace::Sphere), expected, 1e-15);
}

TEST(NullFraction, FuzzAddsHalfTheRamp) {
    DetectionModel m = DetectionModel::symmetric_band(0.2);
    m.fuzz_width = 0.1;
    const double ramp = std::sin(0.3) - std::sin(0.2);
    EXPECT_NEAR(null_fraction(m, HvSpace::Sphere), std::sin(0.2) + ramp / 2.0, 1e-15);
}

TEST(NullFraction, MonotoneInEveryParameter) {
    const DetectionModel base{.band_half_angle_plus = 0.1, .band_half_angle_minus = 0.2,
                              .cap_half_angle = 0.1, .fuzz_width = 0.05, .arc_half_angle = 0.1};
    double DetectionModel::* fields[] = {&DetectionModel::band_half_angle_plus, &DetectionModel::band_half_angle_minus,
                                         &DetectionModel::cap_half_angle, &DetectionModel::fuzz_width,
                                         &DetectionModel::arc_half_angle};
    for (auto field : fields) {
        for (HvSpace space : {HvSpace::Sphere, HvSpace::Circle}) {
            double previous = -1.0;
            for (double v = 0.0; v < 0.6; v += 0.05) {
                DetectionModel m = base;
                m.*field = v;
                const double f = null_fraction(m, space);
                EXPECT_GE(f, previous - 1e-15);
                previous = f;
            }
        }
    }
}

double mc_null_rate(const DetectionModel& m, HvSpace space, int n, std::uint64_t seed) {
    const DetectorSetting setting = DetectorSetting::at(space, 0.7);
    int nulls = 0;
    for (int i = 0; i < n; ++i) {
        RandomStream s(seed, static_cast<std::uint64_t>(i));
        nulls += detect(m, setting, sample_uniform(space, s), s) == Outcome::Null;
    }
    return static_cast<double>(nulls) / n;
}

TEST(NullFraction, MatchesMonteCarlo) {
    DetectionModel fuzzy = DetectionModel::symmetric_band(0.2);
    fuzzy.fuzz_width = 0.15;
    fuzzy.cap_half_angle = 0.3;
    DetectionModel fuzzy_arcs = DetectionModel::arcs(0.1);
    fuzzy_arcs.fuzz_width = 0.2;
    const std::pair<DetectionModel, HvSpace> cases[] = {
        {DetectionModel::symmetric_band(kPi / 6), HvSpace::Sphere},
        {fuzzy, HvSpace::Sphere},
        {DetectionModel::arcs(kPi / 15), HvSpace::Circle},
        {fuzzy_arcs, HvSpace::Circle},
    };
    const int n = 1'000'000;
    std::uint64_t seed = 100;
    for (const auto& [model, space] : cases) {
        const double p = null_fraction(model, space);
        const double sigma = std::sqrt(p * (1 - p) / n);
        EXPECT_NEAR(mc_null_rate(model, space, n, seed++), p, 3 * sigma);
    }
}

Vec3 rotate(const Vec3& v, const Vec3& axis, double angle) {
    // Rodrigues
    const double c = std::cos(angle), s = std::sin(angle);
    return c * v + s * cross(axis, v) + (1 - c) * dot(axis, v) * axis;
}

TEST(Covariance, SphereRotation) {
    DetectionModel m = DetectionModel::symmetric_band(0.25);
    m.fuzz_width = 0.1;
    m.cap_half_angle = 0.3;
    RandomStream gen(8, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec3 axis = sample_uniform(HvSpace::Sphere, gen).direction();
        const double angle = gen.uniform(0.0, kTwoPi);
        const Vec3 d = sample_uniform(HvSpace::Sphere, gen).direction();
        const DetectorSetting setting = DetectorSetting::sphere(d);
        const Vec3 rd = rotate(d, axis, angle);
        const DetectorSetting rotated = DetectorSetting::sphere((1.0 / norm(rd)) * rd);
        for (int i = 0; i < 5000; ++i) {
            RandomStream s1(9, static_cast<std::uint64_t>(i)), s2(9, static_cast<std::uint64_t>(i));
            const Vec3 v = sample_uniform(HvSpace::Sphere, s1).direction();
            sample_uniform(HvSpace::Sphere, s2);
            const Vec3 rv = rotate(v, axis, angle);
            ASSERT_EQ(detect(m, setting, HiddenVariable::on_sphere(v), s1),
                      detect(m, rotated, HiddenVariable::on_sphere((1.0 / norm(rv)) * rv), s2));
        }
    }
}

TEST(Covariance, CircleShift) {
    DetectionModel m = DetectionModel::arcs(0.15);
    m.fuzz_width = 0.1;
    for (double shift : {0.1, 1.0, 2.5}) {
        for (int i = 0; i < 20000; ++i) {
            RandomStream s1(10, static_cast<std::uint64_t>(i)), s2(10, static_cast<std::uint64_t>(i));
            const double x = sample_uniform(HvSpace::Circle, s1).angle();
            sample_uniform(HvSpace::Circle, s2);
            ASSERT_EQ(detect(m, DetectorSetting::circle(0.3), HiddenVariable::on_circle(x), s1),
                      detect(m, DetectorSetting::circle(0.3 + shift), HiddenVariable::on_circle(x + shift), s2));
        }
    }
}

// Station A's record does not depend on station B's setting: same seed,
// different B settings, identical A marginals (hard and fuzzy models alike).
TEST(Factorability, StationAIgnoresStationB) {
    DetectionModel fuzzy = DetectionModel::symmetric_band(0.2);
    fuzzy.fuzz_width = 0.2;
    for (const DetectionModel& m : {DetectionModel::symmetric_band(0.3), fuzzy}) {
        std::vector<std::array<std::uint64_t, 3>> marginals;
        for (double phi : {0.0, 0.5, kPi / 2, 2.8}) {
            const auto banded = SubexperimentConfig::at_relative_angle(HvSpace::Sphere, phi, m, m, 0.0, 100000, 31);
            const CoincidenceTally t = run_subexperiment(banded, 1);
            // With B ideal, B is never null and nn + ns counts A's plus records.
            const auto ideal_b = SubexperimentConfig::at_relative_angle(HvSpace::Sphere, phi, m,
                                                                        DetectionModel::ideal(), 0.0, 100000, 31);
            const CoincidenceTally u = run_subexperiment(ideal_b, 1);
            marginals.push_back({t.null_a_only + t.null_both, u.nn + u.ns, u.sn + u.ss});
        }
        for (const auto& m2 : marginals) EXPECT_EQ(m2, marginals.front());
    }
}

}  // namespace
}  // namespace bellsim
