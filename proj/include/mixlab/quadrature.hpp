#pragma once

#include <cstddef>
#include <vector>

namespace mixlab {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes by Newton iteration on P_n; accurate to a few ulp for n <= 64.
GaussRule gauss_legendre(std::size_t n);

/// Integrate f over [lo, hi] with the given rule.
template <typename F>
double integrate(const GaussRule& rule, double lo, double hi, F&& f) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
    }
    return half * sum;
}

} // namespace mixlab
