#include "fmvol/polymer.hpp"

#include <map>

#include "fmvol/errors.hpp"

namespace fmvol {

namespace {

// After the substitution y_e = u - x_e the box upper bounds are redundant
// whenever every constraint row covering e has rhs <= u.
void add_box_rows(HPolytope& p, const std::vector<Rat>& row_rhs_max, const Rat& u) {
    for (int j = 0; j < p.dim; ++j) {
        std::vector<Rat> lo(p.dim, Rat(0));
        lo[j] = -1;
        p.add_row(std::move(lo), Rat(0));
        if (row_rhs_max[j] > u) {
            std::vector<Rat> hi(p.dim, Rat(0));
            hi[j] = 1;
            p.add_row(std::move(hi), u);
        }
    }
}

void check_weight_bound(const Rat& w, const Rat& bound, const char* lemma) {
    if (rat_abs(w) > bound)
        throw InvariantError(std::string("polymer weight exceeds the ") + lemma +
                             " bound");
}

} // namespace

Rat box_upper(const Hypergraph& h, const Rat& delta) {
    if (h.max_degree() < 1)
        throw ArgumentError("hypergraph has no edges");
    return (Rat(1) + delta) / h.max_degree();
}

VertexSet active_vertices(const Hypergraph& h, const Rat& delta) {
    Rat u = box_upper(h, delta);
    std::vector<int> out;
    for (int v = 0; v < h.vertex_count(); ++v)
        if (h.degree(v) * u > 1)
            out.push_back(v);
    return VertexSet::from_sorted(std::move(out));
}

Rat weight_component(const Hypergraph& h, const VertexSet& k_set, const Rat& delta,
                     const VolumeLimits& limits) {
    if (k_set.empty())
        throw ArgumentError("empty polymer support");
    if (!h.is_connected_in_flat(k_set))
        throw ArgumentError("polymer support not connected in Flat(H)");
    Rat u = box_upper(h, delta);
    for (int v : k_set)
        if (h.degree(v) * u <= 1)
            return Rat(0); // inactive vertex: its constraint cannot break
    VertexSet edges = h.incident_edges(k_set);
    int d = edges.size();
    std::map<int, int> col;
    for (int e : edges)
        col.emplace(e, static_cast<int>(col.size()));
    HPolytope p;
    p.dim = d;
    std::vector<Rat> rhs_max(d, Rat(0));
    for (int v : k_set) {
        // sum_{e ~ v} x_e >= 1 becomes sum y_e <= deg(v)*u - 1
        std::vector<Rat> row(d, Rat(0));
        Rat rhs = h.degree(v) * u - 1;
        for (int e : h.incident_edge_ids(v)) {
            int j = col.at(e);
            row[j] = 1;
            if (rhs > rhs_max[j])
                rhs_max[j] = rhs;
        }
        p.add_row(std::move(row), rhs);
    }
    add_box_rows(p, rhs_max, u);
    Rat vol = volume(p, limits);
    Rat w = rat_pow(u, -d) * vol;
    if (k_set.size() % 2)
        w = -w;
    int dd = h.max_degree();
    if (h.max_edge_size() <= 2 && (dd < 2 || delta * (dd - 1) < 1))
        check_weight_bound(w, rat_pow(e_upper() * delta, k_set.size()),
                           "graph-model decay");
    return w;
}

Rat weight_graph(const Hypergraph& h, const VertexSet& gamma, const Rat& delta,
                 const VolumeLimits& limits) {
    if (h.max_edge_size() > 2)
        throw ArgumentError("graph-model weight requires edges of size <= 2");
    return weight_component(h, gamma, delta, limits);
}

VertexSet phi(const Hypergraph& h, const VertexSet& k_set) {
    if (k_set.empty() || !h.is_connected_in_flat(k_set))
        return {};
    VertexSet t{*k_set.begin()};
    VertexSet t_edges = h.incident_edges(t);
    VertexSet pending = k_set;
    pending.erase(*k_set.begin());
    while (!pending.empty()) {
        int u = -1;
        for (int v : pending)
            if (h.flat_neighbors(v).intersects(t)) {
                u = v;
                break;
            }
        if (u < 0)
            throw InvariantError("MCS scan stalled on a connected set");
        pending.erase(u);
        bool fresh = false;
        for (int e : h.incident_edge_ids(u))
            if (!t_edges.contains(e)) {
                fresh = true;
                break;
            }
        if (fresh) {
            t.insert(u);
            t_edges = t_edges.unioned(
                VertexSet(std::vector<int>(h.incident_edge_ids(u).begin(),
                                           h.incident_edge_ids(u).end())));
        }
    }
    // every kept vertex contributes a fresh edge, so only an edgeless root
    // can make E(T) fall short of |T|
    if (!t_edges.empty() && t_edges.size() < t.size())
        throw InvariantError("MCS with fewer hyperedges than vertices");
    return t;
}

VertexSet broken_set(const Hypergraph& h, const VertexSet& t) {
    if (phi(h, t) != t)
        throw ArgumentError("broken_set requires an MCS");
    std::vector<int> out;
    for (int v : h.flat_boundary(t)) {
        VertexSet k = t;
        k.insert(v);
        if (phi(h, k) == t)
            out.push_back(v);
    }
    return VertexSet::from_sorted(std::move(out));
}

Rat weight_mcs(const Hypergraph& h, const VertexSet& t, const Rat& delta,
               const VolumeLimits& limits) {
    if (phi(h, t) != t)
        throw ArgumentError("weight_mcs requires an MCS");
    Rat u = box_upper(h, delta);
    for (int v : t)
        if (h.degree(v) * u <= 1)
            return Rat(0);
    VertexSet edges = h.incident_edges(t);
    int d = edges.size();
    std::map<int, int> col;
    for (int e : edges)
        col.emplace(e, static_cast<int>(col.size()));
    HPolytope p;
    p.dim = d;
    std::vector<Rat> rhs_max(d, Rat(0));
    for (int v : t) {
        std::vector<Rat> row(d, Rat(0));
        Rat rhs = h.degree(v) * u - 1;
        for (int e : h.incident_edge_ids(v)) {
            int j = col.at(e);
            row[j] = 1;
            if (rhs > rhs_max[j])
                rhs_max[j] = rhs;
        }
        p.add_row(std::move(row), rhs);
    }
    for (int v : broken_set(h, t)) {
        // v must stay satisfied: sum over its edges inside E(T) of x_e <= 1,
        // i.e. sum y_e >= d'*u - 1 (vacuous when the rhs is nonpositive).
        std::vector<Rat> row(d, Rat(0));
        int covered = 0;
        for (int e : h.incident_edge_ids(v)) {
            auto it = col.find(e);
            if (it != col.end()) {
                row[it->second] = -1;
                ++covered;
            }
        }
        Rat rhs = Rat(1) - covered * u;
        if (rhs < 0)
            p.add_row(std::move(row), rhs);
    }
    add_box_rows(p, rhs_max, u);
    Rat vol = volume(p, limits);
    Rat w = rat_pow(u, -d) * vol;
    if (t.size() % 2)
        w = -w;
    int dd = h.max_degree();
    int k = h.max_edge_size();
    if (k >= 2 && delta * dd < 1) {
        // decay bound in (k-1)-th powers: |u|^{k-1} <= (D d)^{l(k-1)} (e/D)^l
        Rat lhs = rat_pow(rat_abs(w), k - 1);
        Rat rhs = rat_pow(Rat(dd) * delta, static_cast<long>(t.size()) * (k - 1)) *
                  rat_pow(e_upper() / dd, t.size());
        if (lhs > rhs)
            throw InvariantError("MCS weight exceeds the decay bound");
    }
    return w;
}

} // namespace fmvol
