#pragma once

#include <functional>
#include <vector>

#include "fmvol/errors.hpp"
#include "fmvol/vertex_set.hpp"

namespace fmvol {

/// Hypergraph with dense vertex ids 0..n-1. Hyperedges are vertex sets of
/// size >= 1; parallel hyperedges are kept distinct. Graphs are the k=2 case.
/// Immutable after construction; safe for concurrent reads.
class Hypergraph {
public:
    /// Throws ArgumentError on empty edges, out-of-range ids, or duplicate
    /// vertices within one edge.
    Hypergraph(int vertex_count, std::vector<std::vector<int>> hyperedges);

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    /// Max degree, recomputed from the data (>= 1 requires an edge at some
    /// vertex; isolated-only graphs get max_degree() == 0).
    int max_degree() const { return max_degree_; }
    /// Max hyperedge size, recomputed from the data.
    int max_edge_size() const { return max_edge_size_; }

    int degree(int v) const { return static_cast<int>(incident_[check(v)].size()); }
    const std::vector<int>& edge(int e) const { return edges_[e]; }
    const std::vector<int>& incident_edge_ids(int v) const { return incident_[check(v)]; }

    /// Neighbors of v in Flat(H): all u != v sharing some hyperedge with v.
    const VertexSet& flat_neighbors(int v) const { return flat_adj_[check(v)]; }

    bool flat_adjacent(int u, int v) const {
        return flat_adj_[check(u)].contains(check(v));
    }

    /// E(S): ids of hyperedges containing at least one vertex of S.
    VertexSet incident_edges(const VertexSet& s) const;

    /// Flat-boundary of S: vertices outside S adjacent to S in Flat(H).
    VertexSet flat_boundary(const VertexSet& s) const;

    /// S together with its Flat-boundary (the extended neighbourhood).
    VertexSet closed_neighborhood(const VertexSet& s) const;

    /// True iff Flat(H)[S] has exactly one connected component (empty -> false).
    bool is_connected_in_flat(const VertexSet& s) const;

    /// Connected components of Flat(H)[S].
    std::vector<VertexSet> flat_components(const VertexSet& s) const;

    /// Streams every S with root in S, S subset of restrict_to, |S| <= max_size
    /// and Flat(H)[S] connected, each exactly once. Requires root in
    /// restrict_to and max_size >= 1.
    void enumerate_connected_supersets(
        int root, int max_size, const VertexSet& restrict_to,
        const std::function<void(const VertexSet&)>& yield) const;

private:
    int check(int v) const {
        if (v < 0 || v >= n_)
            throw ArgumentError("invalid vertex id " + std::to_string(v));
        return v;
    }

    int n_;
    std::vector<std::vector<int>> edges_;
    std::vector<std::vector<int>> incident_;
    std::vector<VertexSet> flat_adj_;
    int max_degree_ = 0;
    int max_edge_size_ = 0;
};

} // namespace fmvol
