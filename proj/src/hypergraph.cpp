#include "fmvol/hypergraph.hpp"

#include <algorithm>
#include <set>

namespace fmvol {

Hypergraph::Hypergraph(int vertex_count, std::vector<std::vector<int>> hyperedges)
    : n_(vertex_count), edges_(std::move(hyperedges)), incident_(vertex_count) {
    if (n_ < 0)
        throw ArgumentError("negative vertex count");
    std::vector<std::set<int>> adj(n_);
    for (size_t e = 0; e < edges_.size(); ++e) {
        auto& verts = edges_[e];
        if (verts.empty())
            throw ArgumentError("empty hyperedge");
        std::sort(verts.begin(), verts.end());
        if (std::adjacent_find(verts.begin(), verts.end()) != verts.end())
            throw ArgumentError("duplicate vertex within hyperedge " + std::to_string(e));
        for (int v : verts) {
            if (v < 0 || v >= n_)
                throw ArgumentError("hyperedge vertex out of range: " + std::to_string(v));
            incident_[v].push_back(static_cast<int>(e));
        }
        for (int u : verts)
            for (int v : verts)
                if (u != v)
                    adj[u].insert(v);
        max_edge_size_ = std::max(max_edge_size_, static_cast<int>(verts.size()));
    }
    flat_adj_.reserve(n_);
    for (int v = 0; v < n_; ++v) {
        flat_adj_.push_back(VertexSet::from_sorted({adj[v].begin(), adj[v].end()}));
        max_degree_ = std::max(max_degree_, static_cast<int>(incident_[v].size()));
    }
}

VertexSet Hypergraph::incident_edges(const VertexSet& s) const {
    std::set<int> out;
    for (int v : s)
        for (int e : incident_edge_ids(v))
            out.insert(e);
    return VertexSet::from_sorted({out.begin(), out.end()});
}

VertexSet Hypergraph::flat_boundary(const VertexSet& s) const {
    std::set<int> out;
    for (int v : s)
        for (int u : flat_neighbors(v))
            if (!s.contains(u))
                out.insert(u);
    return VertexSet::from_sorted({out.begin(), out.end()});
}

VertexSet Hypergraph::closed_neighborhood(const VertexSet& s) const {
    return s.unioned(flat_boundary(s));
}

bool Hypergraph::is_connected_in_flat(const VertexSet& s) const {
    if (s.empty())
        return false;
    return flat_components(s).size() == 1;
}

std::vector<VertexSet> Hypergraph::flat_components(const VertexSet& s) const {
    std::vector<VertexSet> comps;
    std::set<int> todo(s.begin(), s.end());
    for (int v : todo)
        check(v);
    while (!todo.empty()) {
        std::vector<int> comp;
        std::vector<int> stack{*todo.begin()};
        todo.erase(todo.begin());
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (int u : flat_neighbors(v)) {
                auto it = todo.find(u);
                if (it != todo.end()) {
                    todo.erase(it);
                    stack.push_back(u);
                }
            }
        }
        comps.emplace_back(VertexSet(std::move(comp)));
    }
    std::sort(comps.begin(), comps.end());
    return comps;
}

namespace {

// ESU-style rooted enumeration: each connected superset of {root} is reached
// exactly once because a vertex enters the extension list at most once along
// any root-to-set path.
struct Enumerator {
    const Hypergraph& h;
    const VertexSet& allowed;
    int cap;
    const std::function<void(const VertexSet&)>& yield;
    std::vector<int> current;
    std::vector<char> blocked; // in current, in some extension list, or banned

    void run(int root) {
        blocked.assign(h.vertex_count(), 0);
        current = {root};
        blocked[root] = 1;
        std::vector<int> ext;
        for (int u : h.flat_neighbors(root))
            if (allowed.contains(u)) {
                ext.push_back(u);
                blocked[u] = 1;
            }
        rec(ext);
    }

    void rec(const std::vector<int>& ext) {
        // extensions are added in ascending order per level, but later levels
        // may add smaller ids, so current is not sorted; sort a copy
        std::vector<int> sorted(current.begin(), current.end());
        std::sort(sorted.begin(), sorted.end());
        yield(VertexSet::from_sorted(std::move(sorted)));
        if (static_cast<int>(current.size()) == cap)
            return;
        for (size_t i = 0; i < ext.size(); ++i) {
            int u = ext[i];
            std::vector<int> child(ext.begin() + i + 1, ext.end());
            std::vector<int> added;
            for (int w : h.flat_neighbors(u))
                if (allowed.contains(w) && !blocked[w]) {
                    child.push_back(w);
                    added.push_back(w);
                    blocked[w] = 1;
                }
            current.push_back(u);
            rec(child);
            current.pop_back();
            for (int w : added)
                blocked[w] = 0;
        }
    }
};

} // namespace

void Hypergraph::enumerate_connected_supersets(
    int root, int max_size, const VertexSet& restrict_to,
    const std::function<void(const VertexSet&)>& yield) const {
    check(root);
    if (!restrict_to.contains(root))
        throw ArgumentError("root not in restrict_to");
    if (max_size < 1)
        throw ArgumentError("max_size must be >= 1");
    Enumerator en{*this, restrict_to, max_size, yield, {}, {}};
    en.run(root);
}

} // namespace fmvol
