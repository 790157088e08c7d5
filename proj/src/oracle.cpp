#include "fmvol/oracle.hpp"

#include <map>

#include "fmvol/errors.hpp"
#include "fmvol/polymer.hpp"

namespace fmvol {

namespace {

uint64_t counter_random(uint64_t seed, uint64_t counter) {
    // splitmix64 finalizer over a seed-offset counter stream
    uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double unit_double(uint64_t bits) { return (bits >> 11) * 0x1.0p-53; }

} // namespace

Rat xi_bruteforce(const Hypergraph& h, const Rat& delta,
                  const VolumeLimits& limits) {
    VertexSet active = active_vertices(h, delta);
    int a = active.size();
    if (a > 20)
        throw ResourceError("xi_bruteforce needs <= 20 active vertices, got " +
                            std::to_string(a));
    std::vector<int> ids(active.begin(), active.end());
    std::map<VertexSet, Rat> memo;
    Rat xi(0);
    for (uint64_t mask = 0; mask < (uint64_t(1) << a); ++mask) {
        std::vector<int> subset;
        for (int i = 0; i < a; ++i)
            if (mask & (uint64_t(1) << i))
                subset.push_back(ids[i]);
        Rat term(1);
        for (const auto& comp :
             h.flat_components(VertexSet::from_sorted(std::move(subset)))) {
            auto it = memo.find(comp);
            if (it == memo.end())
                it = memo.emplace(comp, weight_component(h, comp, delta, limits))
                         .first;
            term *= it->second;
            if (term == 0)
                break;
        }
        xi += term;
    }
    return xi;
}

Rat volume_bruteforce(const Hypergraph& h, const Rat& delta,
                      const VolumeLimits& limits) {
    int d = h.edge_count();
    if (d < 1)
        throw ArgumentError("instance has no hyperedges");
    Rat u = box_upper(h, delta);
    HPolytope p;
    p.dim = d;
    for (int j = 0; j < d; ++j) {
        std::vector<Rat> lo(d, Rat(0)), hi(d, Rat(0));
        lo[j] = -1;
        hi[j] = 1;
        p.add_row(std::move(lo), Rat(0));
        p.add_row(std::move(hi), u);
    }
    for (int v = 0; v < h.vertex_count(); ++v) {
        if (h.degree(v) * u <= 1)
            continue; // inactive: the row cannot cut the box
        std::vector<Rat> row(d, Rat(0));
        for (int e : h.incident_edge_ids(v))
            row[e] = 1;
        p.add_row(std::move(row), Rat(1));
    }
    return volume(p, limits);
}

McEstimate volume_montecarlo(const Hypergraph& h, const Rat& delta,
                             long samples, uint64_t seed) {
    if (samples < 1)
        throw ArgumentError("need at least one sample");
    int d = h.edge_count();
    if (d < 1)
        throw ArgumentError("instance has no hyperedges");
    double u = to_real(box_upper(h, delta)).convert_to<double>();
    std::vector<int> active;
    for (int v = 0; v < h.vertex_count(); ++v)
        if (h.degree(v) * box_upper(h, delta) > 1)
            active.push_back(v);
    std::vector<double> x(d);
    long hits = 0;
    for (long s = 0; s < samples; ++s) {
        for (int j = 0; j < d; ++j)
            x[j] = u * unit_double(counter_random(
                           seed, static_cast<uint64_t>(s) * d + j));
        bool ok = true;
        for (int v : active) {
            double sum = 0;
            for (int e : h.incident_edge_ids(v))
                sum += x[e];
            if (sum > 1) {
                ok = false;
                break;
            }
        }
        if (ok)
            ++hits;
    }
    Real box = pow(to_real(box_upper(h, delta)), d);
    Real p_hat = Real(hits) / samples;
    McEstimate est;
    est.estimate = p_hat * box;
    est.samples = samples;
    est.std_error = sqrt(p_hat * (1 - p_hat) / samples) * box;
    est.seed = seed;
    return est;
}

} // namespace fmvol
