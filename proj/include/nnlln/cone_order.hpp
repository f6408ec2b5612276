#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

namespace nnlln {

/// Directional partial order on R^2. A point u precedes v when u lies in the
/// closed half-cone with apex v whose boundary rays sit at angles theta and
/// theta + phi, measured anticlockwise from the upward vertical. The
/// coordinatewise order (u <= v in both coordinates) is the special case
/// theta = phi = pi/2, called the star order here.
///
/// phi = pi gives a closed half-plane; antisymmetry then fails on boundary
/// pairs, but the relation is almost surely a total order on random points.
class ConeOrder {
public:
    ConeOrder(double theta, double phi) : theta_(theta), phi_(phi) {
        if (!(theta >= 0.0 && theta < 2.0 * std::numbers::pi))
            throw std::invalid_argument("ConeOrder: theta must lie in [0, 2*pi)");
        if (!(phi > 0.0 && phi <= std::numbers::pi))
            throw std::invalid_argument("ConeOrder: phi must lie in (0, pi]");
    }

    static ConeOrder star() { return ConeOrder(std::numbers::pi / 2.0, std::numbers::pi / 2.0); }

    double theta() const { return theta_; }
    double phi() const { return phi_; }

    bool is_star() const {
        return theta_ == std::numbers::pi / 2.0 && phi_ == std::numbers::pi / 2.0;
    }

    /// u precedes v (u in the cone at v). Boundary rays are included. For the
    /// star order this reduces to exact coordinatewise comparison, which every
    /// search path uses so that results are reproducible bit for bit.
    bool precedes(std::span<const double> u, std::span<const double> v) const {
        const double wx = u[0] - v[0];
        const double wy = u[1] - v[1];
        if (wx == 0.0 && wy == 0.0) return false;
        if (is_star()) return u[0] <= v[0] && u[1] <= v[1];
        // Angle of (wx, wy) anticlockwise from the upward vertical.
        double rel = std::atan2(-wx, wy) - theta_;
        rel = std::fmod(rel, 2.0 * std::numbers::pi);
        if (rel < 0.0) rel += 2.0 * std::numbers::pi;
        return rel <= phi_;
    }

private:
    double theta_;
    double phi_;
};

}  // namespace nnlln
