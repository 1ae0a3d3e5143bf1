#include "bellsim/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "bellsim/gauss_legendre.hpp"

namespace bellsim {

namespace {

using Triple = std::array<double, 3>;  // plus, minus, null

Triple as_triple(const OutcomeProbabilities& p) { return {p.plus, p.minus, p.null}; }

struct LinearPiece {
    double lo;
    double hi;
    double mid;
    Triple value_at_mid;
    Triple slope;
};

// A station's outcome profile cut into its linear pieces.
class PiecewiseProfile {
public:
    PiecewiseProfile(const DetectionModel& model, HvSpace space)
        : model_(model), space_(space), breaks_(profile_breakpoints(model, space)) {
        for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
            const double lo = breaks_[i];
            const double hi = breaks_[i + 1];
            const Triple q1 = at(lo + 0.25 * (hi - lo));
            const Triple q3 = at(lo + 0.75 * (hi - lo));
            LinearPiece piece{lo, hi, 0.5 * (lo + hi), {}, {}};
            for (int k = 0; k < 3; ++k) {
                piece.value_at_mid[k] = 0.5 * (q1[k] + q3[k]);
                piece.slope[k] = (q3[k] - q1[k]) / (0.5 * (hi - lo));
            }
            pieces_.push_back(piece);
        }
    }

    [[nodiscard]] Triple at(double x) const { return as_triple(outcome_profile(model_, space_, x)); }
    [[nodiscard]] const std::vector<double>& breaks() const { return breaks_; }
    [[nodiscard]] const std::vector<LinearPiece>& pieces() const { return pieces_; }

private:
    DetectionModel model_;
    HvSpace space_;
    std::vector<double> breaks_;
    std::vector<LinearPiece> pieces_;
};

struct Accumulator {
    CategoryProbabilities p;

    void add(double weight, const Triple& a, const Triple& b) {
        p.nn += weight * a[0] * b[0];
        p.ns += weight * a[0] * b[1];
        p.sn += weight * a[1] * b[0];
        p.ss += weight * a[1] * b[1];
        p.null_a_only += weight * a[2] * (b[0] + b[1]);
        p.null_b_only += weight * (a[0] + a[1]) * b[2];
        p.null_both += weight * a[2] * b[2];
    }
};

// Sorted, deduplicated points of [lo, hi] including both ends.
std::vector<double> split_points(std::vector<double> points, double lo, double hi) {
    points.push_back(lo);
    points.push_back(hi);
    std::erase_if(points, [&](double x) { return !(x >= lo && x <= hi); });
    std::sort(points.begin(), points.end());
    std::vector<double> out;
    for (double x : points) {
        if (out.empty() || x - out.back() > 1e-14) out.push_back(x);
    }
    out.back() = hi;
    return out;
}

// acos(d / r) without the precision loss of acos near +-1.
double window_angle(double d, double r) {
    if (d >= 0.0) return 2.0 * std::asin(std::sqrt(std::clamp((r - d) / (2.0 * r), 0.0, 1.0)));
    return kPi - 2.0 * std::asin(std::sqrt(std::clamp((r + d) / (2.0 * r), 0.0, 1.0)));
}

// Mean over psi in [0, pi] of profile(c + r cos psi), exact for a piecewise
// linear profile.
Triple azimuthal_average(const PiecewiseProfile& profile, double c, double r) {
    if (r <= 1e-14) return profile.at(std::clamp(c, -1.0, 1.0));
    Triple acc{};
    const auto& pieces = profile.pieces();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const LinearPiece& piece = pieces[i];
        // Outermost pieces are open-ended: c +- r may round past the domain.
        const bool open_lo = i == 0 || piece.lo <= c - r;
        const bool open_hi = i + 1 == pieces.size() || piece.hi >= c + r;
        const double lo = open_lo ? c - r : piece.lo;
        const double hi = open_hi ? c + r : piece.hi;
        if (!(hi > lo)) continue;
        const double psi_far = open_lo ? kPi : window_angle(lo - c, r);
        const double psi_near = open_hi ? 0.0 : window_angle(hi - c, r);
        const double d_psi = psi_far - psi_near;
        const double d_sin = std::sin(psi_far) - std::sin(psi_near);
        for (int k = 0; k < 3; ++k) {
            acc[k] += (piece.value_at_mid[k] + piece.slope[k] * (c - piece.mid)) * d_psi + piece.slope[k] * r * d_sin;
        }
    }
    for (double& v : acc) v /= kPi;
    return acc;
}

// Points t in [-1, 1] where cos(acos(t) -+ angle) hits a breakpoint: the
// latitude circle at t becomes tangent to a level set of the other profile.
std::vector<double> tangency_points(const std::vector<double>& breaks, double angle) {
    std::vector<double> out;
    for (double u : breaks) {
        const double theta = std::acos(std::clamp(u, -1.0, 1.0));
        out.push_back(std::cos(theta + angle));
        out.push_back(std::cos(theta - angle));
    }
    return out;
}

// Station B profile averaged over the smear cap of half-angle rho around a
// hidden variable whose B-coordinate is v.
Triple smeared_sphere_profile(const PiecewiseProfile& profile, double v, double rho, int nodes) {
    const double cos_rho = std::cos(rho);
    const double alpha = std::acos(std::clamp(v, -1.0, 1.0));
    const double sin_alpha = std::sqrt(std::max(0.0, 1.0 - v * v));
    std::vector<double> cuts;
    for (double u : profile.breaks()) {
        const double theta = std::acos(std::clamp(u, -1.0, 1.0));
        cuts.push_back(std::cos(theta - alpha));
        cuts.push_back(std::cos(theta + alpha));
    }
    const std::vector<double> grid = split_points(cuts, cos_rho, 1.0);
    const GaussRule& rule = gauss_legendre(nodes);
    Triple acc{};
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double lo = grid[i];
        const double h = grid[i + 1] - lo;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double t = 0.5 * (rule.nodes[j] + 1.0);
            const double w = lo + h * t * t * (3.0 - 2.0 * t);
            const double weight = 0.5 * rule.weights[j] * 6.0 * h * t * (1.0 - t);
            const double r = sin_alpha * std::sqrt(std::max(0.0, 1.0 - w * w));
            const Triple p = azimuthal_average(profile, v * w, r);
            for (int k = 0; k < 3; ++k) acc[k] += weight * p[k];
        }
    }
    for (double& x : acc) x /= (1.0 - cos_rho);
    return acc;
}

CategoryProbabilities sphere_probabilities(double phi, const PiecewiseProfile& a, const PiecewiseProfile& b,
                                           double smear, int resolution) {
    // Outer coordinate v = lambda . b; azimuth around b integrated exactly
    // against station A's profile.
    const double cos_phi = std::cos(phi);
    const double sin_phi = std::sin(phi);
    const int inner_nodes = std::max(16, resolution / 4);

    std::vector<double> cuts = tangency_points(a.breaks(), phi);
    cuts.insert(cuts.end(), b.breaks().begin(), b.breaks().end());
    if (smear > 0.0) {
        const auto shifted = tangency_points(b.breaks(), smear);
        cuts.insert(cuts.end(), shifted.begin(), shifted.end());
    }
    const std::vector<double> grid = split_points(cuts, -1.0, 1.0);

    Accumulator acc;
    const GaussRule& rule = gauss_legendre(resolution);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double lo = grid[i];
        const double h = grid[i + 1] - lo;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double t = 0.5 * (rule.nodes[j] + 1.0);
            const double v = lo + h * t * t * (3.0 - 2.0 * t);
            const double weight = 0.5 * rule.weights[j] * 6.0 * h * t * (1.0 - t) * 0.5;
            const double r = std::sqrt(std::max(0.0, 1.0 - v * v)) * sin_phi;
            const Triple pa = azimuthal_average(a, v * cos_phi, r);
            const Triple pb = smear > 0.0 ? smeared_sphere_profile(b, v, smear, inner_nodes) : b.at(v);
            acc.add(weight, pa, pb);
        }
    }
    return acc.p;
}

// Circle coordinate of hidden variable x seen from a station at `offset`.
double folded(double x, double offset) { return wrap_angle(x - offset, kPi); }

// Integral over x in [lo, hi] of profile(folded(x, offset)); exact for the
// piecewise linear profile with enough nodes per piece.
Triple circle_window_integral(const PiecewiseProfile& profile, double offset, double lo, double hi) {
    std::vector<double> cuts;
    const double first = std::floor((lo - offset) / kPi) - 1.0;
    const double last = std::ceil((hi - offset) / kPi) + 1.0;
    for (double k = first; k <= last; k += 1.0) {
        for (double br : profile.breaks()) cuts.push_back(br + offset + k * kPi);
    }
    const std::vector<double> grid = split_points(cuts, lo, hi);
    const GaussRule& rule = gauss_legendre(2);
    Triple acc{};
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double mid = 0.5 * (grid[i] + grid[i + 1]);
        const double half = 0.5 * (grid[i + 1] - grid[i]);
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const Triple p = profile.at(folded(mid + half * rule.nodes[j], offset));
            for (int k = 0; k < 3; ++k) acc[k] += half * rule.weights[j] * p[k];
        }
    }
    return acc;
}

CategoryProbabilities circle_probabilities(double phi, const PiecewiseProfile& a, const PiecewiseProfile& b,
                                           double smear, int resolution) {
    std::vector<double> cuts;
    for (double k = -3.0; k <= 3.0; k += 1.0) {
        for (double br : a.breaks()) cuts.push_back(br + k * kPi);
        for (double shift : {0.0, smear, -smear}) {
            for (double br : b.breaks()) cuts.push_back(br + phi + shift + k * kPi);
        }
    }
    const std::vector<double> grid = split_points(cuts, 0.0, kPi);

    Accumulator acc;
    const GaussRule& rule = gauss_legendre(resolution);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double mid = 0.5 * (grid[i] + grid[i + 1]);
        const double half = 0.5 * (grid[i + 1] - grid[i]);
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double x = mid + half * rule.nodes[j];
            const double weight = half * rule.weights[j] / kPi;
            Triple pb;
            if (smear > 0.0) {
                pb = circle_window_integral(b, phi, x - smear, x + smear);
                for (double& v : pb) v /= 2.0 * smear;
            } else {
                pb = b.at(folded(x, phi));
            }
            acc.add(weight, a.at(folded(x, 0.0)), pb);
        }
    }
    return acc.p;
}

void require_phi_range(HvSpace space, double phi) {
    const double max_phi = space == HvSpace::Sphere ? kPi : kPi / 2.0;
    if (!(phi >= 0.0 && phi <= max_phi)) {
        throw std::invalid_argument(space == HvSpace::Sphere ? "phi must lie in [0, pi] on the sphere"
                                                             : "phi must lie in [0, pi/2] on the circle");
    }
}

}  // namespace

CategoryProbabilities ideal_probabilities(HvSpace space, double phi) {
    require_phi_range(space, phi);
    CategoryProbabilities p;
    if (space == HvSpace::Sphere) {
        p.ns = p.sn = phi / kTwoPi;
        p.nn = p.ss = (kPi - phi) / kTwoPi;
    } else {
        p.ns = p.sn = phi / kPi;
        p.nn = p.ss = (kPi / 2.0 - phi) / kPi;
    }
    return p;
}

CategoryProbabilities banded_probabilities(HvSpace space, double phi, const DetectionModel& model_a,
                                           const DetectionModel& model_b, double smear, int resolution) {
    if (resolution < kMinOracleResolution) {
        throw std::invalid_argument("oracle resolution must be >= " + std::to_string(kMinOracleResolution));
    }
    require_phi_range(space, phi);
    model_a.validate();
    model_b.validate();
    PairSource{space, smear}.validate();

    const PiecewiseProfile a(model_a, space);
    const PiecewiseProfile b(model_b, space);
    return space == HvSpace::Sphere ? sphere_probabilities(phi, a, b, smear, resolution)
                                    : circle_probabilities(phi, a, b, smear, resolution);
}

double appendix_bias(double x, double y, double delta) {
    if (!(x >= y && y >= delta && delta >= 0.0) || !(x + y - 2.0 * delta > 0.0)) {
        throw std::invalid_argument("appendix_bias requires x >= y >= delta >= 0 and x + y - 2 delta > 0");
    }
    return (x - y) / (x + y - 2.0 * delta);
}

double qm_correlation(double phi, HvSpace space) {
    return space == HvSpace::Sphere ? std::cos(phi) : std::cos(2.0 * phi);
}

CategoryProbabilities qm_probabilities(HvSpace space, double phi, double efficiency) {
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw std::invalid_argument("efficiency must lie in [0, 1]");
    const double c = qm_correlation(phi, space);
    const double eta2 = efficiency * efficiency;
    CategoryProbabilities p;
    p.nn = p.ss = eta2 * (1.0 + c) / 4.0;
    p.ns = p.sn = eta2 * (1.0 - c) / 4.0;
    p.null_a_only = p.null_b_only = efficiency * (1.0 - efficiency);
    p.null_both = (1.0 - efficiency) * (1.0 - efficiency);
    return p;
}

BellReport oracle_bell(const BellSetup& setup, DenominatorMode mode, int resolution) {
    std::vector<CategoryProbabilities> terms;
    for (const auto& [angle_a, angle_b] : bell_setting_pairs(setup.test, setup.angles)) {
        const double phi =
            relative_angle(DetectorSetting::at(setup.space, angle_a), DetectorSetting::at(setup.space, angle_b));
        terms.push_back(banded_probabilities(setup.space, phi, setup.model_a, setup.model_b, setup.smear, resolution));
    }
    return evaluate_bell(setup.test, std::span<const CategoryProbabilities>(terms), mode);
}

AspectPresetReport aspect_preset_report(int resolution) {
    const CanonicalAngles angles = canonical_angles(HvSpace::Circle);
    BellSetup setup{.test = BellTest::Standard,
                    .space = HvSpace::Circle,
                    .model_a = DetectionModel::arcs(kAspectArcHalfAngle),
                    .model_b = DetectionModel::ideal(),
                    .angles = {angles.a, angles.a_prime, angles.b, angles.b_prime}};
    AspectPresetReport report;
    for (const auto& [angle_a, angle_b] : bell_setting_pairs(setup.test, setup.angles)) {
        const double phi = relative_angle(DetectorSetting::circle(angle_a), DetectorSetting::circle(angle_b));
        report.terms.push_back(banded_probabilities(HvSpace::Circle, phi, setup.model_a, setup.model_b, 0.0, resolution));
        report.observed_fraction.push_back(report.terms.back().observed());
    }
    const std::span<const CategoryProbabilities> terms(report.terms);
    report.observed = evaluate_bell(BellTest::Standard, terms, DenominatorMode::ObservedTobs);
    report.emitted = evaluate_bell(BellTest::Standard, terms, DenominatorMode::EmittedT);
    return report;
}

std::vector<CurveLandmark> biased_curve_landmarks(double band_half_angle, int resolution) {
    const DetectionModel model = DetectionModel::symmetric_band(band_half_angle);
    model.validate();
    const double touch = 2.0 * band_half_angle;
    const std::vector<std::pair<double, std::string>> points{
        {0.0, "bands coincide"},
        {touch, "bands touch; NS and SN regions vanish below this angle"},
        {kPi / 2.0, "right angle; NN and NS regions trimmed equally"},
        {kPi - touch, "bands touch; NN and SS regions vanish above this angle"},
        {kPi, "opposite settings"},
    };
    std::vector<CurveLandmark> out;
    for (const auto& [phi, label] : points) {
        const CategoryProbabilities p = banded_probabilities(HvSpace::Sphere, phi, model, model, 0.0, resolution);
        out.push_back({phi, correlation(p, DenominatorMode::ObservedTobs), label});
    }
    return out;
}

}  // namespace bellsim
