#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nnlln/rng.hpp"

namespace nnlln {

/// Finite ordered point set in R^d, stored row-major. The list order is
/// significant: it is the arrival order used by the on-line graph builder.
class PointSet {
public:
    PointSet(int dim, std::vector<double> coords, bool origin_sink = false)
        : dim_(dim), coords_(std::move(coords)), origin_sink_(origin_sink) {
        if (dim_ < 1) throw std::invalid_argument("PointSet: dimension must be >= 1");
        if (coords_.size() % static_cast<std::size_t>(dim_) != 0)
            throw std::invalid_argument("PointSet: coordinate count is not a multiple of the dimension");
    }

    int dim() const { return dim_; }
    std::size_t size() const { return coords_.size() / static_cast<std::size_t>(dim_); }

    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }

    /// True when an origin sink was prepended at index 0 (see append_origin).
    bool has_origin_sink() const { return origin_sink_; }

    const std::vector<double>& coords() const { return coords_; }

    double distance_sq(std::size_t i, std::size_t j) const {
        const double* a = coords_.data() + i * static_cast<std::size_t>(dim_);
        const double* b = coords_.data() + j * static_cast<std::size_t>(dim_);
        double s = 0.0;
        for (int c = 0; c < dim_; ++c) {
            const double diff = a[c] - b[c];
            s += diff * diff;
        }
        return s;
    }

    double distance(std::size_t i, std::size_t j) const { return std::sqrt(distance_sq(i, j)); }

private:
    int dim_;
    std::vector<double> coords_;
    bool origin_sink_;
};

inline double distance_sq(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        const double diff = a[c] - b[c];
        s += diff * diff;
    }
    return s;
}

/// Axis-aligned box inside the unit cube carrying a constant density value.
struct DensityBox {
    std::vector<double> lo;
    std::vector<double> hi;
    double density = 1.0;

    double volume() const {
        double v = 1.0;
        for (std::size_t c = 0; c < lo.size(); ++c) v *= hi[c] - lo[c];
        return v;
    }
};

/// Sampling density on [0,1)^d: either uniform, or piecewise constant on an
/// axis-aligned box partition of the unit cube. Box densities must be
/// positive and bounded, and the boxes must tile the cube exactly.
class DensitySpec {
public:
    static DensitySpec uniform() { return DensitySpec{}; }

    static DensitySpec piecewise_constant(std::vector<DensityBox> boxes) {
        DensitySpec spec;
        spec.boxes_ = std::move(boxes);
        return spec;
    }

    bool is_uniform() const { return boxes_.empty(); }
    const std::vector<DensityBox>& boxes() const { return boxes_; }

    /// Checks the partition and normalisation requirements; throws
    /// std::invalid_argument with a description of the first violation.
    void validate(int dim) const {
        if (is_uniform()) return;
        constexpr double tol = 1e-12;
        double total_volume = 0.0;
        double total_mass = 0.0;
        for (const auto& box : boxes_) {
            if (box.lo.size() != static_cast<std::size_t>(dim) || box.hi.size() != static_cast<std::size_t>(dim))
                throw std::invalid_argument("DensitySpec: box bounds do not match the dimension");
            for (int c = 0; c < dim; ++c) {
                if (!(box.lo[c] >= 0.0 && box.lo[c] < box.hi[c] && box.hi[c] <= 1.0))
                    throw std::invalid_argument("DensitySpec: box bounds must satisfy 0 <= lo < hi <= 1");
            }
            if (!(box.density > 0.0) || !std::isfinite(box.density))
                throw std::invalid_argument("DensitySpec: density values must be positive and finite");
            total_volume += box.volume();
            total_mass += box.density * box.volume();
        }
        for (std::size_t i = 0; i < boxes_.size(); ++i) {
            for (std::size_t j = i + 1; j < boxes_.size(); ++j) {
                bool overlap = true;
                for (int c = 0; c < dim; ++c) {
                    if (boxes_[i].lo[c] >= boxes_[j].hi[c] || boxes_[j].lo[c] >= boxes_[i].hi[c]) {
                        overlap = false;
                        break;
                    }
                }
                if (overlap)
                    throw std::invalid_argument("DensitySpec: boxes " + std::to_string(i) + " and " +
                                                std::to_string(j) + " overlap");
            }
        }
        if (std::abs(total_volume - 1.0) > tol)
            throw std::invalid_argument("DensitySpec: boxes do not partition the unit cube (total volume " +
                                        std::to_string(total_volume) + ")");
        if (std::abs(total_mass - 1.0) > tol)
            throw std::invalid_argument("DensitySpec: box masses do not sum to 1 (total " +
                                        std::to_string(total_mass) + ")");
    }

    /// Density value at a point of the support (uniform: 1 everywhere).
    double value_at(std::span<const double> x) const {
        if (is_uniform()) return 1.0;
        for (const auto& box : boxes_) {
            bool inside = true;
            for (std::size_t c = 0; c < x.size(); ++c) {
                if (x[c] < box.lo[c] || x[c] >= box.hi[c]) {
                    inside = false;
                    break;
                }
            }
            if (inside) return box.density;
        }
        return 0.0;
    }

private:
    std::vector<DensityBox> boxes_;
};

/// Integral of f(x)^((d-alpha)/d) over the support, the density factor that
/// multiplies every uniform-case limit. Closed form for box densities.
inline double density_integral(const DensitySpec& density, int dim, double alpha) {
    if (dim < 1) throw std::invalid_argument("density_integral: dimension must be >= 1");
    if (density.is_uniform()) return 1.0;
    density.validate(dim);
    const double exponent = (static_cast<double>(dim) - alpha) / static_cast<double>(dim);
    double total = 0.0;
    for (const auto& box : density.boxes()) total += std::pow(box.density, exponent) * box.volume();
    return total;
}

namespace detail {

// Exact-duplicate detection for generated points; collisions have probability
// ~0 but a redraw keeps all inter-point distances distinct even then.
class DuplicateFilter {
public:
    explicit DuplicateFilter(const std::vector<double>& coords, int dim) : coords_(coords), dim_(dim) {}

    bool contains(std::size_t i) const {
        const std::uint64_t h = hash_point(i);
        auto [begin, end] = buckets_.equal_range(h);
        for (auto it = begin; it != end; ++it) {
            if (equal_points(it->second, i)) return true;
        }
        return false;
    }

    void insert(std::size_t i) { buckets_.emplace(hash_point(i), i); }

private:
    std::uint64_t hash_point(std::size_t i) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (int c = 0; c < dim_; ++c) {
            std::uint64_t bits;
            const double x = coords_[i * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)];
            static_assert(sizeof(bits) == sizeof(x));
            __builtin_memcpy(&bits, &x, sizeof(bits));
            h = (h ^ bits) * 0x100000001b3ULL;
        }
        return h;
    }

    bool equal_points(std::size_t a, std::size_t b) const {
        for (int c = 0; c < dim_; ++c) {
            if (coords_[a * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)] !=
                coords_[b * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)])
                return false;
        }
        return true;
    }

    const std::vector<double>& coords_;
    int dim_;
    std::unordered_multimap<std::uint64_t, std::size_t> buckets_;
};

}  // namespace detail

/// Draws n i.i.d. points from the given density. Box densities are sampled by
/// choosing a box with probability density * volume, then uniformly within
/// it. Exact duplicates are rejected and redrawn, so all inter-point
/// distances are distinct.
inline PointSet generate(std::size_t n, int dim, const DensitySpec& density, Seed seed) {
    if (n < 1) throw std::invalid_argument("generate: need n >= 1 points");
    if (dim < 1) throw std::invalid_argument("generate: dimension must be >= 1");
    density.validate(dim);

    std::vector<double> cumulative;  // box-selection CDF
    if (!density.is_uniform()) {
        cumulative.reserve(density.boxes().size());
        double acc = 0.0;
        for (const auto& box : density.boxes()) {
            acc += box.density * box.volume();
            cumulative.push_back(acc);
        }
        cumulative.back() = 1.0;
    }

    Rng rng(seed);
    std::vector<double> coords;
    coords.resize(n * static_cast<std::size_t>(dim));
    detail::DuplicateFilter seen(coords, dim);

    for (std::size_t i = 0; i < n; ++i) {
        double* out = coords.data() + i * static_cast<std::size_t>(dim);
        for (;;) {
            if (density.is_uniform()) {
                for (int c = 0; c < dim; ++c) out[c] = rng.next_double();
            } else {
                const double u = rng.next_double();
                std::size_t b = 0;
                while (u >= cumulative[b]) ++b;
                const DensityBox& box = density.boxes()[b];
                for (int c = 0; c < dim; ++c)
                    out[c] = box.lo[c] + rng.next_double() * (box.hi[c] - box.lo[c]);
            }
            if (!seen.contains(i)) break;
        }
        seen.insert(i);
    }
    return PointSet(dim, std::move(coords));
}

/// Returns a copy of ps with the origin prepended at index 0, marked as the
/// origin sink. Used for the rooted variant of the cone-order forest, hence
/// the d = 2 requirement.
inline PointSet append_origin(const PointSet& ps) {
    if (ps.dim() != 2) throw std::invalid_argument("append_origin: only defined for d = 2");
    if (ps.has_origin_sink()) throw std::invalid_argument("append_origin: origin already present");
    std::vector<double> coords;
    coords.reserve(ps.coords().size() + 2);
    coords.push_back(0.0);
    coords.push_back(0.0);
    coords.insert(coords.end(), ps.coords().begin(), ps.coords().end());
    return PointSet(2, std::move(coords), true);
}

}  // namespace nnlln
