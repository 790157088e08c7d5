#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fmvol/geometry.hpp"
#include "fmvol/hypergraph.hpp"
#include "fmvol/polymer.hpp"
#include "fmvol/rational.hpp"

namespace fmvol {

struct PlanOptions {
    Rat rho = rat(1, 10);
    bool force = false;
    int m_override = 0; // 0 = truncation depth from the tail-bound formula
    unsigned threads = 0; // 0 = hardware concurrency
    VolumeLimits limits;
};

struct ExpansionPlan {
    Rat delta;
    Rat rho;
    Rat epsilon;
    Mode mode = Mode::Graph;
    int m = 1;         // truncation depth in effect
    int formula_m = 1; // depth required for the epsilon tail bound
    bool force = false;
    bool guarantee = true;
    unsigned threads = 0;
    VolumeLimits limits;
    Real delta_bound; // admissible delta ceiling for this mode
};

/// Default mode resolution: plain graph expansion whenever edges have size <= 2.
inline Mode auto_mode(const Hypergraph& h) {
    return h.max_edge_size() <= 2 ? Mode::Graph : Mode::Mcs;
}

/// Validates delta against the mode's convergence bound (rational e^4 upper
/// bound 273/5) and fixes the truncation depth m = ceil(ln(2n/eps)/rho).
/// Throws PlanError on inadmissible delta unless opts.force is set.
ExpansionPlan validate_plan(const Hypergraph& h, const Rat& delta,
                            const Rat& epsilon, Mode mode,
                            const PlanOptions& opts = {});

/// All polymers with nonzero weight up to the plan's size cap, in canonical
/// (sorted-support) order, with weights computed in parallel.
struct PolymerSystem {
    Mode mode = Mode::Graph;
    std::vector<VertexSet> supports;
    std::vector<Rat> weights;
    std::vector<VertexSet> closed; // closed neighborhoods, for incompatibility

    int count() const { return static_cast<int>(supports.size()); }
    bool incompatible(int i, int j) const {
        return closed[i].intersects(supports[j]);
    }
};

PolymerSystem build_polymers(const Hypergraph& h, const ExpansionPlan& plan);

/// A cluster as a canonical multiset: non-decreasing polymer indices.
struct Cluster {
    std::vector<int> polymer_ids;
    int total_size(const PolymerSystem& sys) const {
        int s = 0;
        for (int i : polymer_ids)
            s += sys.supports[i].size();
        return s;
    }
};

/// Ursell function of the cluster's incompatibility graph:
/// (1/t!) * sum over spanning connected edge subsets of (-1)^{|A|}.
/// Throws ArgumentError when the incompatibility graph is disconnected.
Rat ursell(const Cluster& c, const PolymerSystem& sys);

/// Streams every cluster with total size <= m exactly once.
void enumerate_clusters(const PolymerSystem& sys, int m,
                        const std::function<void(const Cluster&)>& yield);

struct LogXi {
    Rat value;
    long term_count = 0;    // clusters (direct) or compatible sets (series)
    int max_cluster_size = 0;
    std::string strategy;   // "direct" or "series"
};

/// Truncated cluster expansion of log Xi at depth m. Small depths enumerate
/// cluster multisets directly; larger depths go through the coefficients of
/// Xi(z) and a formal log, which sums the same size-s slices exactly.
LogXi log_xi_truncated(const Hypergraph& h, const ExpansionPlan& plan);
LogXi log_xi_direct(const PolymerSystem& sys, int m);
LogXi log_xi_series(const PolymerSystem& sys, int m, int active_count);

struct VolumeResult {
    Rat log_xi;
    Real log_volume;
    Real volume;
    Real tail_bound; // |V| e^{-rho m}
    long cluster_count = 0;
    int max_cluster_size = 0;
    int polymer_count = 0;
    std::string strategy;
    bool guarantee = true;
    long wall_time_ms = 0;
};

/// Vol(P_{H,delta}) ~ ((1+delta)/Delta)^{|E|} * exp(log Xi), with relative
/// error <= epsilon whenever the plan carries its guarantee.
VolumeResult approximate_volume(const Hypergraph& h, const ExpansionPlan& plan);

} // namespace fmvol
