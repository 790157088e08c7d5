#pragma once

#include "fmvol/geometry.hpp"
#include "fmvol/hypergraph.hpp"
#include "fmvol/rational.hpp"
#include "fmvol/vertex_set.hpp"

namespace fmvol {

enum class Mode { Graph, Mcs };

/// A polymer: Flat-connected support of active vertices, either a plain
/// connected set (graph model) or an MCS (hypergraph model).
struct Polymer {
    VertexSet support;
    Mode mode = Mode::Graph;

    int size() const { return support.size(); }
    bool operator==(const Polymer&) const = default;
};

/// Box half-width (1+delta)/Delta of the truncated polytope.
Rat box_upper(const Hypergraph& h, const Rat& delta);

/// Vertices whose constraint can be violated inside the box:
/// deg(v)*(1+delta)/Delta > 1.
VertexSet active_vertices(const Hypergraph& h, const Rat& delta);

/// Inclusion-exclusion component weight for any Flat-connected K:
/// ((1+d)/Delta)^{-|E(K)|} * (-1)^{|K|} * Vol{x in box : sum_{e~v} x_e >= 1
/// for all v in K}. Works for any edge size.
Rat weight_component(const Hypergraph& h, const VertexSet& k_set, const Rat& delta,
                     const VolumeLimits& limits = {});

/// Graph-model polymer weight w(gamma); requires max edge size 2.
Rat weight_graph(const Hypergraph& h, const VertexSet& gamma, const Rat& delta,
                 const VolumeLimits& limits = {});

/// The MCS pruning map: scans K in ascending id order, keeping a vertex only
/// when it contributes a new hyperedge. Empty set for disconnected K.
VertexSet phi(const Hypergraph& h, const VertexSet& k_set);

/// B(T) = {v adjacent to T : phi(T + v) = T}. Requires phi(T) = T.
VertexSet broken_set(const Hypergraph& h, const VertexSet& t);

/// MCS-model weight u(T): signed scaled volume of the region where every
/// v in T is violated and every broken vertex satisfies its constraint.
/// Requires phi(T) = T; returns 0 when some vertex of T is inactive.
Rat weight_mcs(const Hypergraph& h, const VertexSet& t, const Rat& delta,
               const VolumeLimits& limits = {});

} // namespace fmvol
