#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nnlln/neighbour.hpp"
#include "nnlln/points.hpp"

namespace nnlln {

namespace detail {

struct GridCandidate {
    std::size_t index;
    double dist_sq;
};

}  // namespace detail

/// Uniform bucket grid over the bounding box of a point set, with
/// ring-expansion nearest queries and open-ball emptiness tests. Cell
/// geometry is fixed at construction from the full set, so points may be
/// inserted incrementally (as the on-line builder does) without rebuilding.
class GridIndex {
public:
    static constexpr int kMaxGridDim = 16;

    explicit GridIndex(const PointSet& ps, bool populate = true) : ps_(&ps) {
        const int dim = ps.dim();
        const std::size_t n = ps.size();
        lo_.assign(dim, 0.0);
        counts_.assign(dim, 1);

        double max_extent = 0.0;
        std::vector<double> extent(dim, 0.0);
        for (int c = 0; c < dim; ++c) {
            double lo = ps.point(0)[c];
            double hi = lo;
            for (std::size_t i = 1; i < n; ++i) {
                lo = std::min(lo, ps.point(i)[c]);
                hi = std::max(hi, ps.point(i)[c]);
            }
            lo_[c] = lo;
            extent[c] = hi - lo;
            max_extent = std::max(max_extent, extent[c]);
        }

        // Aim for ~2 points per cell; degenerate inputs fall back to a single
        // cell, which turns every query into a plain scan but stays correct.
        cell_ = 1.0;
        if (dim <= kMaxGridDim && max_extent > 0.0 && n >= 2) {
            const double per_axis = std::ceil(std::pow(static_cast<double>(n) / 2.0, 1.0 / dim));
            cell_ = max_extent / std::max(1.0, per_axis);
            for (int c = 0; c < dim; ++c)
                counts_[c] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(extent[c] / cell_)));
        }

        std::size_t total = 1;
        strides_.assign(dim, 1);
        for (int c = dim - 1; c >= 0; --c) {
            strides_[c] = static_cast<std::int64_t>(total);
            total *= static_cast<std::size_t>(counts_[c]);
        }
        cells_.assign(total, {});
        if (populate) {
            for (std::size_t i = 0; i < n; ++i) insert(i);
        }
    }

    void insert(std::size_t i) {
        cells_[flat_cell(ps_->point(i))].push_back(static_cast<std::uint32_t>(i));
    }

    /// Nearest point satisfying pred (which must also reject the query point
    /// itself, if it is present in the grid). Ties resolve by the shared
    /// neighbour order.
    template <typename Pred>
    std::optional<detail::GridCandidate> nearest_if(std::span<const double> q, Pred&& pred) const {
        const int dim = ps_->dim();
        std::array<std::int64_t, kMaxGridDim> anchor{};
        std::int64_t max_rho = 0;
        for (int c = 0; c < dim && c < kMaxGridDim; ++c) {
            anchor[c] = cell_coord(q[c], c);
            max_rho = std::max({max_rho, anchor[c], counts_[c] - 1 - anchor[c]});
        }

        std::optional<detail::GridCandidate> best;
        for (std::int64_t rho = 0; rho <= max_rho; ++rho) {
            if (best && rho >= 2) {
                const double lb = static_cast<double>(rho - 1) * cell_;
                if (lb * lb > best->dist_sq) break;
            }
            for_each_cell_in_shell(anchor.data(), rho, [&](std::size_t flat, const std::int64_t* coords) {
                if (best && cell_lower_bound_sq(q, coords) > best->dist_sq) return;
                for (std::uint32_t idx : cells_[flat]) {
                    if (!pred(static_cast<std::size_t>(idx))) continue;
                    const double d2 = distance_sq(q, ps_->point(idx));
                    if (!best || detail::neighbour_less(*ps_, idx, d2, best->index, best->dist_sq))
                        best = detail::GridCandidate{idx, d2};
                }
            });
        }
        return best;
    }

    /// True when some point other than skip_a/skip_b lies strictly inside the
    /// ball of squared radius radius_sq around centre.
    bool contains_in_open_ball(std::span<const double> centre, double radius_sq, std::size_t skip_a,
                               std::size_t skip_b) const {
        const int dim = ps_->dim();
        const double radius = std::sqrt(radius_sq);
        std::array<std::int64_t, kMaxGridDim> lo_cell{};
        std::array<std::int64_t, kMaxGridDim> hi_cell{};
        for (int c = 0; c < dim && c < kMaxGridDim; ++c) {
            lo_cell[c] = cell_coord(centre[c] - radius, c);
            hi_cell[c] = cell_coord(centre[c] + radius, c);
        }
        std::array<std::int64_t, kMaxGridDim> cursor = lo_cell;
        for (;;) {
            std::size_t flat = 0;
            for (int c = 0; c < dim; ++c) flat += static_cast<std::size_t>(cursor[c] * strides_[c]);
            for (std::uint32_t idx : cells_[flat]) {
                if (idx == skip_a || idx == skip_b) continue;
                if (distance_sq(centre, ps_->point(idx)) < radius_sq) return true;
            }
            int c = dim - 1;
            while (c >= 0 && ++cursor[c] > hi_cell[c]) {
                cursor[c] = lo_cell[c];
                --c;
            }
            if (c < 0) break;
        }
        return false;
    }

    double cell_size() const { return cell_; }

private:
    std::int64_t cell_coord(double x, int axis) const {
        const double rel = (x - lo_[axis]) / cell_;
        std::int64_t c = static_cast<std::int64_t>(std::floor(rel));
        return std::clamp<std::int64_t>(c, 0, counts_[axis] - 1);
    }

    std::size_t flat_cell(std::span<const double> p) const {
        std::size_t flat = 0;
        for (int c = 0; c < ps_->dim(); ++c)
            flat += static_cast<std::size_t>(cell_coord(p[c], c) * strides_[c]);
        return flat;
    }

    double cell_lower_bound_sq(std::span<const double> q, const std::int64_t* coords) const {
        double s = 0.0;
        for (int c = 0; c < ps_->dim(); ++c) {
            const double lo = lo_[c] + static_cast<double>(coords[c]) * cell_;
            const double hi = lo + cell_;
            double gap = 0.0;
            if (q[c] < lo)
                gap = lo - q[c];
            else if (q[c] > hi)
                gap = q[c] - hi;
            s += gap * gap;
        }
        return s;
    }

    // Visits every in-bounds cell at Chebyshev cell distance exactly rho from
    // the anchor, each exactly once: one axis pinned to +/- rho, earlier axes
    // restricted to the open range, later axes free.
    template <typename Fn>
    void for_each_cell_in_shell(const std::int64_t* anchor, std::int64_t rho, Fn&& fn) const {
        const int dim = ps_->dim();
        std::array<std::int64_t, kMaxGridDim> cursor{};
        if (rho == 0) {
            std::size_t flat = 0;
            for (int c = 0; c < dim; ++c) {
                cursor[c] = anchor[c];
                flat += static_cast<std::size_t>(cursor[c] * strides_[c]);
            }
            fn(flat, cursor.data());
            return;
        }
        std::array<std::int64_t, kMaxGridDim> lo{};
        std::array<std::int64_t, kMaxGridDim> hi{};
        for (int pinned = 0; pinned < dim; ++pinned) {
            for (int sign = -1; sign <= 1; sign += 2) {
                const std::int64_t fixed = anchor[pinned] + sign * rho;
                if (fixed < 0 || fixed >= counts_[pinned]) continue;
                bool empty = false;
                for (int c = 0; c < dim; ++c) {
                    const std::int64_t half = c < pinned ? rho - 1 : rho;
                    lo[c] = std::max<std::int64_t>(0, anchor[c] - half);
                    hi[c] = std::min<std::int64_t>(counts_[c] - 1, anchor[c] + half);
                    if (c == pinned) lo[c] = hi[c] = fixed;
                    if (lo[c] > hi[c]) empty = true;
                }
                if (empty) continue;
                cursor = lo;
                for (;;) {
                    std::size_t flat = 0;
                    for (int c = 0; c < dim; ++c) flat += static_cast<std::size_t>(cursor[c] * strides_[c]);
                    fn(flat, cursor.data());
                    int c = dim - 1;
                    while (c >= 0) {
                        if (c == pinned) {
                            --c;
                            continue;
                        }
                        if (++cursor[c] <= hi[c]) break;
                        cursor[c] = lo[c];
                        --c;
                    }
                    if (c < 0) break;
                }
            }
        }
    }

    const PointSet* ps_;
    std::vector<double> lo_;
    std::vector<std::int64_t> counts_;
    std::vector<std::int64_t> strides_;
    double cell_ = 1.0;
    std::vector<std::vector<std::uint32_t>> cells_;
};

}  // namespace nnlln
