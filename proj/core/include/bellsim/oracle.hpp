#pragma once

#include <string>
#include <vector>

#include "bellsim/bell.hpp"
#include "bellsim/detector.hpp"
#include "bellsim/estimators.hpp"
#include "bellsim/hv_space.hpp"

// Deterministic ground truth for the simulator: closed forms where they exist,
// quadrature of the detection profiles everywhere else.

namespace bellsim {

inline constexpr int kDefaultOracleResolution = 200;
inline constexpr int kMinOracleResolution = 100;

/// Perfect detection, identical hidden variables. Sphere: p_ns = p_sn =
/// phi/(2pi), p_nn = p_ss = (pi - phi)/(2pi), phi in [0, pi]. Circle: p_ns =
/// p_sn = phi/pi, p_nn = p_ss = (pi/2 - phi)/pi, phi in [0, pi/2].
/// Throws std::invalid_argument outside those ranges.
CategoryProbabilities ideal_probabilities(HvSpace space, double phi);

/**
 * Category probabilities for arbitrary detection models and source smear,
 * station A at angle 0 and station B at relative angle phi.
 *
 * Uses factorability: the joint probability at a hidden variable is the
 * product of the two stations' outcome profiles. On the sphere the azimuth
 * around station A's axis is integrated in closed form (the profiles are
 * piecewise linear in u); the remaining coordinate is split at every
 * breakpoint and tangency and integrated with `resolution` Gauss nodes per
 * piece. On the circle the integrand is piecewise polynomial and the rule is
 * exact. Throws std::invalid_argument when resolution < 100, phi is out of
 * range, or a model/smear is invalid.
 */
CategoryProbabilities banded_probabilities(HvSpace space, double phi, const DetectionModel& model_a,
                                           const DetectionModel& model_b, double smear = 0.0,
                                           int resolution = kDefaultOracleResolution);

/// (x - y) / (x + y - 2 delta): the biased correlation when a constant area
/// delta is trimmed from each of the four coincidence regions. Requires
/// x >= y >= delta >= 0 and x + y - 2 delta > 0.
double appendix_bias(double x, double y, double delta);

/// cos(phi) on the sphere; cos(2 phi) on the circle.
double qm_correlation(double phi, HvSpace space = HvSpace::Sphere);

/// Quantum reference categories with value-independent detection efficiency
/// eta at each station: coincidences scale by eta^2 and the rest is padded
/// out evenly into the null categories.
CategoryProbabilities qm_probabilities(HvSpace space, double phi, double efficiency = 1.0);

/// Exact Bell report for `setup` (pairs and seeds are ignored).
BellReport oracle_bell(const BellSetup& setup, DenominatorMode mode, int resolution = kDefaultOracleResolution);

/// Half-angle of the missing arcs in the synthetic Aspect-style preset.
inline constexpr double kAspectArcHalfAngle = kPi / 15.0;

struct AspectPresetReport {
    BellReport observed;   // ObservedTobs denominator
    BellReport emitted;    // EmittedT denominator
    std::vector<CategoryProbabilities> terms;  // (a,b), (a,b'), (a',b), (a',b')
    std::vector<double> observed_fraction;     // T_obs / T per term
};

/// Circle model, arcs of half-angle pi/15 at station A only, station B
/// ideal, canonical circle angles.
AspectPresetReport aspect_preset_report(int resolution = kDefaultOracleResolution);

/// A point of the biased correlation curve that follows from band geometry
/// alone (bands touching, or symmetry), evaluated with the oracle.
struct CurveLandmark {
    double phi;
    double e_biased;
    std::string label;
};

/// Landmarks of E(phi) for symmetric hard bands of half-angle delta on both
/// stations of the sphere: phi = 0, 2 delta, pi/2, pi - 2 delta, pi.
std::vector<CurveLandmark> biased_curve_landmarks(double band_half_angle,
                                                  int resolution = kDefaultOracleResolution);

}  // namespace bellsim
