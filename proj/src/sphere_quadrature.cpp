#include "flrwb/sphere_quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace flrwb {

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    if (order < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
    nodes.assign(order, 0.0);
    weights.assign(order, 0.0);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
}

SphereQuadrature::SphereQuadrature(int polar_order, int azimuth_order)
    : polar_order_(polar_order), azimuth_order_(azimuth_order) {
    if (polar_order < 1 || azimuth_order < 1)
        throw std::invalid_argument("sphere quadrature orders must be >= 1");

    std::vector<double> ct, cw;
    gauss_legendre(polar_order, ct, cw);
    const double dphi = 2.0 * std::numbers::pi / azimuth_order;

    nodes_.reserve(static_cast<std::size_t>(polar_order) * azimuth_order);
    weights_.reserve(nodes_.capacity());
    for (int i = 0; i < polar_order; ++i) {
        const double c = ct[i];
        const double st = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int j = 0; j < azimuth_order; ++j) {
            const double phi = dphi * (j + 0.5);
            nodes_.push_back({st * std::cos(phi), st * std::sin(phi), c});
            weights_.push_back(cw[i] * dphi);
        }
    }
    for (double w : weights_) weight_sum_ += w;

    const double four_pi = 4.0 * std::numbers::pi;
    if (std::abs(weight_sum_ - four_pi) > 1e-12 * four_pi)
        throw std::runtime_error("sphere quadrature weights do not sum to 4 pi");

    // Low-degree monomial exactness against the known sphere integrals.
    auto integral = [&](auto&& f) {
        double s = 0.0;
        for (std::size_t k = 0; k < nodes_.size(); ++k) s += weights_[k] * f(nodes_[k]);
        return s;
    };
    auto check = [&](double got, double want, const char* what) {
        if (std::abs(got - want) > 1e-11 * four_pi)
            throw std::runtime_error(std::string("sphere quadrature fails exactness on ") + what);
    };
    if (polar_order >= 2 && azimuth_order >= 3) {
        check(integral([](const Vec3& v) { return v.x * v.x; }), four_pi / 3.0, "x^2");
        check(integral([](const Vec3& v) { return v.z * v.z; }), four_pi / 3.0, "z^2");
        check(integral([](const Vec3& v) { return v.x; }), 0.0, "x");
    }
    if (polar_order >= 3 && azimuth_order >= 5) {
        check(integral([](const Vec3& v) { return v.x * v.x * v.x * v.x; }), four_pi / 5.0, "x^4");
        check(integral([](const Vec3& v) { return v.x * v.x * v.y * v.y; }), four_pi / 15.0,
              "x^2 y^2");
    }

    // Fold inversion pairs. Node (i, j) maps to (polar-1-i, j + A/2 mod A)
    // under omega -> -omega, available when the azimuth count is even.
    if (azimuth_order % 2 == 0) {
        std::vector<char> taken(nodes_.size(), 0);
        for (int i = 0; i < polar_order; ++i)
            for (int j = 0; j < azimuth_order; ++j) {
                const std::size_t k = static_cast<std::size_t>(i) * azimuth_order + j;
                if (taken[k]) continue;
                const int ip = polar_order - 1 - i;
                const int jp = (j + azimuth_order / 2) % azimuth_order;
                const std::size_t kp = static_cast<std::size_t>(ip) * azimuth_order + jp;
                taken[k] = taken[kp] = 1;
                folded_x_.push_back(nodes_[k].x);
                folded_y_.push_back(nodes_[k].y);
                folded_z_.push_back(nodes_[k].z);
                folded_w_.push_back(k == kp ? weights_[k] : 2.0 * weights_[k]);
            }
    } else {
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            folded_x_.push_back(nodes_[k].x);
            folded_y_.push_back(nodes_[k].y);
            folded_z_.push_back(nodes_[k].z);
            folded_w_.push_back(weights_[k]);
        }
    }
}

}  // namespace flrwb
