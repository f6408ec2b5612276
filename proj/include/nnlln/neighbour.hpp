#pragma once

#include <cstddef>

#include "nnlln/points.hpp"

namespace nnlln {

/// One answer of a nearest-neighbour query.
struct Neighbour {
    std::size_t index = 0;
    double distance = 0.0;
};

namespace detail {

// Candidate ordering shared by every search path and oracle: squared
// distance, then lexicographic comparison of the candidate's coordinates,
// then index. Equidistant candidates therefore resolve identically no matter
// which data structure produced them.
inline bool neighbour_less(const PointSet& ps, std::size_t a, double dist_sq_a, std::size_t b,
                           double dist_sq_b) {
    if (dist_sq_a != dist_sq_b) return dist_sq_a < dist_sq_b;
    const auto pa = ps.point(a);
    const auto pb = ps.point(b);
    for (int c = 0; c < ps.dim(); ++c) {
        if (pa[c] != pb[c]) return pa[c] < pb[c];
    }
    return a < b;
}

}  // namespace detail

}  // namespace nnlln
