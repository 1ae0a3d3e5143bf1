#pragma once

#include <vector>

namespace bellsim {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached, thread-safe. Throws std::invalid_argument when n < 1.
const GaussRule& gauss_legendre(int n);

/// Integral of f over [a, b] using an n-point rule after the substitution
/// x = a + (b - a)(3t^2 - 2t^3). The substitution flattens square-root
/// behaviour at both ends, so piecewise-smooth integrands split at their
/// kinks converge quickly.
template <typename F>
double integrate_smoothed(F&& f, double a, double b, int n) {
    const GaussRule& rule = gauss_legendre(n);
    const double h = b - a;
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double t = 0.5 * (rule.nodes[i] + 1.0);
        const double x = a + h * t * t * (3.0 - 2.0 * t);
        const double jacobian = 6.0 * h * t * (1.0 - t);
        sum += 0.5 * rule.weights[i] * jacobian * f(x);
    }
    return sum;
}

}  // namespace bellsim
