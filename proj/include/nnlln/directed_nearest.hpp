#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nnlln/cone_order.hpp"
#include "nnlln/grid.hpp"
#include "nnlln/neighbour.hpp"
#include "nnlln/points.hpp"

namespace nnlln {

/// Nearest point preceding the query under the cone order, or nothing when
/// the query is a minimal element. Plain scan over the whole set; the batch
/// variant below is what the forest builder uses.
inline std::optional<Neighbour> cone_nn(const PointSet& ps, std::size_t query_index,
                                        const ConeOrder& order) {
    if (ps.dim() != 2) throw std::invalid_argument("cone_nn: cone orders are defined for d = 2 only");
    if (query_index >= ps.size()) throw std::invalid_argument("cone_nn: query index out of range");
    const auto q = ps.point(query_index);
    std::optional<detail::GridCandidate> best;
    for (std::size_t u = 0; u < ps.size(); ++u) {
        if (u == query_index || !order.precedes(ps.point(u), q)) continue;
        const double d2 = distance_sq(ps.point(u), q);
        if (!best || detail::neighbour_less(ps, u, d2, best->index, best->dist_sq))
            best = detail::GridCandidate{u, d2};
    }
    if (!best) return std::nullopt;
    return Neighbour{best->index, std::sqrt(best->dist_sq)};
}

namespace detail {

// Star-order batch query: sweep by x, keeping processed points in a y-ordered
// map; candidates are scanned downward from the query's y and pruned once the
// vertical gap alone exceeds the current best distance.
inline std::vector<std::optional<Neighbour>> cone_all_nn_star_sweep(const PointSet& ps) {
    const std::size_t n = ps.size();
    std::vector<std::uint32_t> order_idx(n);
    for (std::size_t i = 0; i < n; ++i) order_idx[i] = static_cast<std::uint32_t>(i);
    std::sort(order_idx.begin(), order_idx.end(), [&ps](std::uint32_t a, std::uint32_t b) {
        const auto pa = ps.point(a);
        const auto pb = ps.point(b);
        if (pa[0] != pb[0]) return pa[0] < pb[0];
        if (pa[1] != pb[1]) return pa[1] < pb[1];
        return a < b;
    });

    std::vector<std::optional<Neighbour>> result(n);
    std::multimap<double, std::uint32_t> by_y;
    for (std::uint32_t v : order_idx) {
        const auto pv = ps.point(v);
        std::optional<GridCandidate> best;
        for (auto it = by_y.upper_bound(pv[1]); it != by_y.begin();) {
            --it;
            const double dy = pv[1] - it->first;
            if (best && dy * dy > best->dist_sq) break;
            const std::uint32_t u = it->second;
            const double d2 = distance_sq(ps.point(u), pv);
            if (!best || neighbour_less(ps, u, d2, best->index, best->dist_sq))
                best = GridCandidate{u, d2};
        }
        if (best) result[v] = Neighbour{best->index, std::sqrt(best->dist_sq)};
        by_y.emplace(pv[1], v);
    }
    return result;
}

}  // namespace detail

/// Directed nearest neighbour of every point at once. The star order uses the
/// x-sweep; general cones use a plain scan for small sets and the grid with
/// ring expansion above that. Assumes distinct points (generated sets always
/// are).
inline std::vector<std::optional<Neighbour>> cone_all_nn(const PointSet& ps, const ConeOrder& order) {
    if (ps.dim() != 2) throw std::invalid_argument("cone_all_nn: cone orders are defined for d = 2 only");
    const std::size_t n = ps.size();
    if (order.is_star()) return detail::cone_all_nn_star_sweep(ps);

    std::vector<std::optional<Neighbour>> result(n);
    constexpr std::size_t kBruteForceLimit = 2048;
    if (n < kBruteForceLimit) {
        for (std::size_t v = 0; v < n; ++v) result[v] = cone_nn(ps, v, order);
        return result;
    }
    GridIndex grid(ps);
    for (std::size_t v = 0; v < n; ++v) {
        const auto pv = ps.point(v);
        const auto best = grid.nearest_if(pv, [&](std::size_t u) {
            return u != v && order.precedes(ps.point(u), pv);
        });
        if (best) result[v] = Neighbour{best->index, std::sqrt(best->dist_sq)};
    }
    return result;
}

/// Nearest predecessor of the point at arrival position i (0-based, i >= 1):
/// the closest among positions 0..i-1, ties broken by lexicographically
/// smallest coordinates, then index. Plain prefix scan; this doubles as the
/// oracle for the incremental on-line builder.
inline Neighbour online_nn(const PointSet& ps, std::size_t arrival_index) {
    if (arrival_index < 1 || arrival_index >= ps.size())
        throw std::invalid_argument("online_nn: arrival index must satisfy 1 <= i < n (0-based)");
    const auto q = ps.point(arrival_index);
    std::optional<detail::GridCandidate> best;
    for (std::size_t u = 0; u < arrival_index; ++u) {
        const double d2 = distance_sq(ps.point(u), q);
        if (!best || detail::neighbour_less(ps, u, d2, best->index, best->dist_sq))
            best = detail::GridCandidate{u, d2};
    }
    return Neighbour{best->index, std::sqrt(best->dist_sq)};
}

}  // namespace nnlln
