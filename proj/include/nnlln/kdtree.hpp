#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "nnlln/neighbour.hpp"
#include "nnlln/points.hpp"

namespace nnlln {

/// Balanced k-d tree over a PointSet. Immutable after construction and safe
/// for concurrent queries. Splits on the axis of largest spread, at the
/// median point.
class KdIndex {
public:
    explicit KdIndex(const PointSet& ps) : ps_(&ps) {
        const std::size_t n = ps.size();
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        nodes_.reserve(n);
        root_ = build(order.data(), order.data() + n);
    }

    const PointSet& points() const { return *ps_; }

    /// The k nearest points to the query point (excluding itself), ascending
    /// by distance with ties broken lexicographically, then by index.
    std::vector<Neighbour> knn(std::size_t query_index, std::size_t k) const {
        const std::size_t n = ps_->size();
        if (query_index >= n) throw std::invalid_argument("knn: query index out of range");
        if (k < 1 || k > n - 1)
            throw std::invalid_argument("knn: need 1 <= k <= n-1 (the query point is excluded)");

        Search search{*ps_, query_index, k, ps_->point(query_index), {}};
        search.heap.reserve(k);
        descend(root_, search);

        std::sort(search.heap.begin(), search.heap.end(), [this](const Candidate& a, const Candidate& b) {
            return detail::neighbour_less(*ps_, a.index, a.dist_sq, b.index, b.dist_sq);
        });
        std::vector<Neighbour> result(search.heap.size());
        for (std::size_t i = 0; i < search.heap.size(); ++i)
            result[i] = Neighbour{search.heap[i].index, std::sqrt(search.heap[i].dist_sq)};
        return result;
    }

private:
    struct Node {
        int axis = 0;
        std::uint32_t point = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
    };

    struct Candidate {
        std::size_t index;
        double dist_sq;
    };

    struct Search {
        const PointSet& ps;
        std::size_t query;
        std::size_t k;
        std::span<const double> q;
        std::vector<Candidate> heap;  // max-heap on neighbour order, worst on top
    };

    std::int32_t build(std::uint32_t* first, std::uint32_t* last) {
        if (first == last) return -1;
        const int dim = ps_->dim();
        int axis = 0;
        double best_spread = -1.0;
        for (int c = 0; c < dim; ++c) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (auto* it = first; it != last; ++it) {
                const double x = ps_->point(*it)[c];
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
            if (hi - lo > best_spread) {
                best_spread = hi - lo;
                axis = c;
            }
        }
        auto* mid = first + (last - first) / 2;
        std::nth_element(first, mid, last, [this, axis](std::uint32_t a, std::uint32_t b) {
            const double xa = ps_->point(a)[axis];
            const double xb = ps_->point(b)[axis];
            if (xa != xb) return xa < xb;
            return a < b;
        });
        const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(Node{axis, *mid, -1, -1});
        const std::int32_t left = build(first, mid);
        const std::int32_t right = build(mid + 1, last);
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    bool heap_cmp(const Candidate& a, const Candidate& b) const {
        // "less" for the max-heap: better candidates sink, worst stays on top.
        return detail::neighbour_less(*ps_, a.index, a.dist_sq, b.index, b.dist_sq);
    }

    void offer(Search& s, std::size_t index, double dist_sq) const {
        const Candidate cand{index, dist_sq};
        auto cmp = [this](const Candidate& a, const Candidate& b) { return heap_cmp(a, b); };
        if (s.heap.size() < s.k) {
            s.heap.push_back(cand);
            std::push_heap(s.heap.begin(), s.heap.end(), cmp);
        } else if (heap_cmp(cand, s.heap.front())) {
            std::pop_heap(s.heap.begin(), s.heap.end(), cmp);
            s.heap.back() = cand;
            std::push_heap(s.heap.begin(), s.heap.end(), cmp);
        }
    }

    void descend(std::int32_t node_id, Search& s) const {
        if (node_id < 0) return;
        const Node& node = nodes_[static_cast<std::size_t>(node_id)];
        if (node.point != s.query)
            offer(s, node.point, distance_sq(s.q, ps_->point(node.point)));

        const double delta = s.q[node.axis] - ps_->point(node.point)[node.axis];
        const std::int32_t near = delta <= 0.0 ? node.left : node.right;
        const std::int32_t far = delta <= 0.0 ? node.right : node.left;
        descend(near, s);
        // The far side can still hold an equidistant candidate that wins the
        // tie-break, so prune only on strictly larger plane distance.
        if (s.heap.size() < s.k || delta * delta <= s.heap.front().dist_sq) descend(far, s);
    }

    const PointSet* ps_;
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

}  // namespace nnlln
