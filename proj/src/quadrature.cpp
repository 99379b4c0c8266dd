// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#include "helmscat/quadrature.hpp"

namespace helmscat
{

GaussLegendre gauss_legendre(int n)
{
    if (n < 1)
        throw DomainError("gauss_legendre: need at least one node");

    GaussLegendre rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    if (n == 1)
    {
        rule.weights[0] = 2.0;
        return rule;
    }

    // Legendre P_n and its derivative at x
    auto legendre = [n](double x) {
        double p0 = 1.0, p1 = x;
        for (int l = 2; l <= n; ++l)
        {
            const double p2 = ((2 * l - 1) * x * p1 - (l - 1) * p0) / l;
            p0 = p1;
            p1 = p2;
        }
        return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
    };

    // Newton from the Tricomi initial guess; nodes are symmetric.
    for (int i = 0; i < (n + 1) / 2; ++i)
    {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter)
        {
            const auto [p, dp] = legendre(x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        const double dp = legendre(x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        rule.nodes[n / 2] = 0.0;
    return rule;
}

SphereGrid sphere_grid(int n_theta, int n_phi)
{
    if (n_theta < 1 || n_phi < 1)
        throw DomainError("sphere_grid: grid dimensions must be positive");

    const GaussLegendre gl = gauss_legendre(n_theta);
    SphereGrid g;
    g.n_theta = n_theta;
    g.n_phi = n_phi;
    const std::size_t n = static_cast<std::size_t>(n_theta) * n_phi;
    g.theta.reserve(n);
    g.phi.reserve(n);
    g.directions.reserve(n);
    g.weights.reserve(n);
    const double dphi = 2.0 * pi / n_phi;
    // theta ascending: cos(theta) descending
    for (int a = 0; a < n_theta; ++a)
    {
        const double t = gl.nodes[n_theta - 1 - a];
        const double theta = std::acos(t);
        for (int b = 0; b < n_phi; ++b)
        {
            const double phi = b * dphi;
            g.theta.push_back(theta);
            g.phi.push_back(phi);
            g.directions.push_back(direction(theta, phi));
            g.weights.push_back(gl.weights[n_theta - 1 - a] * dphi);
        }
    }
    return g;
}

} // namespace helmscat
