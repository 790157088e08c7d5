#include "fmvol/cluster.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <thread>

#include "fmvol/errors.hpp"

namespace fmvol {

namespace {

using boost::multiprecision::ceil;
using boost::multiprecision::exp;
using boost::multiprecision::log;
using boost::multiprecision::pow;

// Sum over spanning connected edge subsets of (-1)^{#edges}, for the graph
// given by per-vertex adjacency bitmasks. Via the subset convolution
// c[S] = f[S] - sum over proper T containing min(S) of c[T] f[S\T],
// where f[S] = [S spans no edge].
mpz_class connected_signed_sum(const std::vector<uint32_t>& adj) {
    int t = static_cast<int>(adj.size());
    uint32_t full = (t == 32) ? ~0u : ((1u << t) - 1);
    std::vector<char> f(full + 1);
    std::vector<mpz_class> c(full + 1);
    f[0] = 1;
    for (uint32_t s = 1; s <= full; ++s) {
        int v = std::countr_zero(s);
        uint32_t rest = s & (s - 1);
        f[s] = f[rest] && (adj[v] & rest) == 0;
        c[s] = f[s];
        if (rest != 0) {
            // proper subsets T of S with v in T: T = {v} | sub, sub a proper
            // submask of S\{v} (sub = rest itself would give T = S)
            for (uint32_t sub = (rest - 1) & rest;; sub = (sub - 1) & rest) {
                uint32_t tset = sub | (1u << v);
                c[s] -= c[tset] * f[s & ~tset];
                if (sub == 0)
                    break;
            }
        }
        if (s == full)
            break;
    }
    return c[full];
}

std::vector<uint32_t> cluster_adjacency(const Cluster& cl, const PolymerSystem& sys) {
    int t = static_cast<int>(cl.polymer_ids.size());
    if (t < 1)
        throw ArgumentError("empty cluster");
    if (t > 22)
        throw ResourceError("cluster tuple too long for Ursell evaluation");
    std::vector<uint32_t> adj(t, 0);
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j) {
            int a = cl.polymer_ids[i], b = cl.polymer_ids[j];
            if (a == b || sys.incompatible(a, b)) {
                adj[i] |= 1u << j;
                adj[j] |= 1u << i;
            }
        }
    // connectivity of the incompatibility graph
    uint32_t seen = 1, frontier = 1;
    while (frontier) {
        uint32_t next = 0;
        for (int i = 0; i < t; ++i)
            if (frontier & (1u << i))
                next |= adj[i];
        frontier = next & ~seen;
        seen |= next;
    }
    if (seen != ((t == 32) ? ~0u : ((1u << t) - 1)))
        throw ArgumentError("cluster incompatibility graph is disconnected");
    return adj;
}

mpz_class factorial(int n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

} // namespace

ExpansionPlan validate_plan(const Hypergraph& h, const Rat& delta,
                            const Rat& epsilon, Mode mode,
                            const PlanOptions& opts) {
    if (h.edge_count() < 1)
        throw ArgumentError("instance has no hyperedges");
    if (delta <= 0)
        throw ArgumentError("delta must be positive");
    if (epsilon <= 0 || epsilon >= 1)
        throw ArgumentError("epsilon must lie in (0,1)");
    if (opts.rho <= 0)
        throw ArgumentError("rho must be positive");
    int dd = h.max_degree();
    int k = h.max_edge_size();
    if (mode == Mode::Graph && k > 2)
        throw ArgumentError("graph mode requires hyperedges of size <= 2");
    ExpansionPlan plan;
    plan.delta = delta;
    plan.rho = opts.rho;
    plan.epsilon = epsilon;
    plan.mode = mode;
    plan.force = opts.force;
    plan.limits = opts.limits;
    bool admissible;
    if (mode == Mode::Graph || k <= 2) {
        // delta <= 1/(e^4 Delta), e^4 over-approximated by 273/5
        admissible = delta * e4_upper() * dd <= 1;
        plan.delta_bound = Real(1) / (to_real(e4_upper()) * dd);
    } else {
        // delta <= (e^4 Delta^{(2k-3)/(k-1)} (k-1))^{-1}, in (k-1)-th powers
        Rat lhs = rat_pow(delta * e4_upper() * (k - 1), k - 1) *
                  rat_pow(Rat(dd), 2 * k - 3);
        admissible = lhs <= 1;
        plan.delta_bound =
            pow(to_real(rat_pow(e4_upper() * (k - 1), k - 1) *
                        rat_pow(Rat(dd), 2 * k - 3)),
                Real(-1) / (k - 1));
    }
    if (!admissible && !opts.force)
        throw PlanError("delta " + rat_str(delta) +
                        " exceeds the admissible bound ~" +
                        plan.delta_bound.str(6) + " for this mode");
    Real depth = log(Real(2) * h.vertex_count() / to_real(epsilon)) /
                 to_real(opts.rho);
    plan.formula_m = std::max(1, static_cast<int>(ceil(depth)));
    if (opts.m_override != 0 && opts.m_override < 1)
        throw ArgumentError("truncation depth must be >= 1");
    plan.m = opts.m_override != 0 ? opts.m_override : plan.formula_m;
    plan.guarantee = admissible && plan.m >= plan.formula_m;
    plan.threads = opts.threads != 0
                       ? opts.threads
                       : std::max(1u, std::thread::hardware_concurrency());
    return plan;
}

PolymerSystem build_polymers(const Hypergraph& h, const ExpansionPlan& plan) {
    PolymerSystem sys;
    sys.mode = plan.mode;
    VertexSet active = active_vertices(h, plan.delta);
    if (active.empty())
        return sys;
    int cap = std::min(plan.m, active.size());
    std::vector<VertexSet> supports;
    for (int root : active) {
        // root as the minimum id keeps the global enumeration duplicate-free
        std::vector<int> allowed;
        for (int v : active)
            if (v >= root)
                allowed.push_back(v);
        h.enumerate_connected_supersets(
            root, cap, VertexSet::from_sorted(std::move(allowed)),
            [&](const VertexSet& s) {
                if (plan.mode == Mode::Mcs && phi(h, s) != s)
                    return;
                supports.push_back(s);
            });
    }
    std::sort(supports.begin(), supports.end());
    std::vector<Rat> weights(supports.size());
    auto compute = [&](size_t i) {
        weights[i] = plan.mode == Mode::Graph
                         ? weight_component(h, supports[i], plan.delta, plan.limits)
                         : weight_mcs(h, supports[i], plan.delta, plan.limits);
    };
    unsigned nt = std::min<size_t>(plan.threads, supports.size());
    if (nt <= 1) {
        for (size_t i = 0; i < supports.size(); ++i)
            compute(i);
    } else {
        std::atomic<size_t> next{0};
        std::exception_ptr first_error;
        std::mutex err_mutex;
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < supports.size();
                     i = next.fetch_add(1)) {
                    try {
                        compute(i);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(err_mutex);
                        if (!first_error)
                            first_error = std::current_exception();
                        return;
                    }
                }
            });
        for (auto& th : pool)
            th.join();
        if (first_error)
            std::rethrow_exception(first_error);
    }
    for (size_t i = 0; i < supports.size(); ++i) {
        if (weights[i] == 0)
            continue;
        sys.supports.push_back(supports[i]);
        sys.weights.push_back(weights[i]);
    }
    sys.closed.reserve(sys.supports.size());
    for (const auto& s : sys.supports)
        sys.closed.push_back(h.closed_neighborhood(s));
    return sys;
}

Rat ursell(const Cluster& c, const PolymerSystem& sys) {
    auto adj = cluster_adjacency(c, sys);
    return Rat(connected_signed_sum(adj)) /
           Rat(factorial(static_cast<int>(adj.size())));
}

void enumerate_clusters(const PolymerSystem& sys, int m,
                        const std::function<void(const Cluster&)>& yield) {
    int p = sys.count();
    if (p == 0 || m < 1)
        return;
    // adjacency lists of the incompatibility graph over distinct polymers
    std::vector<std::vector<int>> nb(p);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (sys.incompatible(i, j)) {
                nb[i].push_back(j);
                nb[j].push_back(i);
            }
    std::vector<int> members;
    std::vector<char> blocked(p, 0);
    std::vector<int> counts;
    int root = 0;

    // expand multiplicities >= 1 for a fixed connected member set
    std::function<void(size_t, int)> mults = [&](size_t idx, int budget) {
        if (idx == members.size()) {
            Cluster cl;
            for (size_t i = 0; i < members.size(); ++i)
                for (int r = 0; r < counts[i]; ++r)
                    cl.polymer_ids.push_back(members[i]);
            std::sort(cl.polymer_ids.begin(), cl.polymer_ids.end());
            yield(cl);
            return;
        }
        int sz = sys.supports[members[idx]].size();
        int reserve = 0;
        for (size_t j = idx + 1; j < members.size(); ++j)
            reserve += sys.supports[members[j]].size();
        for (int n = 1; n * sz + reserve <= budget; ++n) {
            counts[idx] = n;
            mults(idx + 1, budget - n * sz);
        }
    };

    std::function<void(const std::vector<int>&, int)> rec =
        [&](const std::vector<int>& ext, int base_size) {
            counts.assign(members.size(), 1);
            mults(0, m);
            for (size_t i = 0; i < ext.size(); ++i) {
                int u = ext[i];
                int nsz = base_size + sys.supports[u].size();
                if (nsz > m)
                    continue;
                std::vector<int> child(ext.begin() + i + 1, ext.end());
                std::vector<int> added;
                for (int w : nb[u])
                    if (w > root && !blocked[w]) {
                        child.push_back(w);
                        added.push_back(w);
                        blocked[w] = 1;
                    }
                members.push_back(u);
                rec(child, nsz);
                members.pop_back();
                for (int w : added)
                    blocked[w] = 0;
            }
        };

    for (root = 0; root < p; ++root) {
        if (sys.supports[root].size() > m)
            continue;
        members = {root};
        std::fill(blocked.begin(), blocked.end(), 0);
        blocked[root] = 1;
        std::vector<int> ext;
        for (int u : nb[root])
            if (u > root) {
                ext.push_back(u);
                blocked[u] = 1;
            }
        rec(ext, sys.supports[root].size());
    }
}

LogXi log_xi_direct(const PolymerSystem& sys, int m) {
    LogXi out;
    out.strategy = "direct";
    enumerate_clusters(sys, m, [&](const Cluster& cl) {
        auto adj = cluster_adjacency(cl, sys);
        mpz_class c = connected_signed_sum(adj);
        // per canonical multiset: c(H) * prod w^n / n!
        Rat term(c);
        size_t i = 0;
        while (i < cl.polymer_ids.size()) {
            size_t j = i;
            while (j < cl.polymer_ids.size() &&
                   cl.polymer_ids[j] == cl.polymer_ids[i])
                ++j;
            int n = static_cast<int>(j - i);
            term *= rat_pow(sys.weights[cl.polymer_ids[i]], n);
            term /= Rat(factorial(n));
            i = j;
        }
        out.value += term;
        ++out.term_count;
        out.max_cluster_size =
            std::max(out.max_cluster_size, cl.total_size(sys));
    });
    return out;
}

LogXi log_xi_series(const PolymerSystem& sys, int m, int active_count) {
    LogXi out;
    out.strategy = "series";
    int cap = std::min(m, active_count); // compatible supports are disjoint
    std::vector<Rat> a(cap + 1);
    a[0] = 1;
    int p = sys.count();
    std::vector<int> all(p);
    for (int i = 0; i < p; ++i)
        all[i] = i;
    // sum of weight products over pairwise-compatible polymer sets, by size
    std::function<void(const std::vector<int>&, int, const Rat&)> dfs =
        [&](const std::vector<int>& cand, int total, const Rat& prod) {
            for (size_t i = 0; i < cand.size(); ++i) {
                int id = cand[i];
                int nt = total + sys.supports[id].size();
                if (nt > cap)
                    continue;
                Rat np = prod * sys.weights[id];
                a[nt] += np;
                ++out.term_count;
                std::vector<int> child;
                for (size_t j = i + 1; j < cand.size(); ++j)
                    if (!sys.incompatible(id, cand[j]))
                        child.push_back(cand[j]);
                if (!child.empty())
                    dfs(child, nt, np);
            }
        };
    dfs(all, 0, Rat(1));
    // log of the polynomial: s c_s = sum_j j c_j a_{s-j}
    std::vector<Rat> c(m + 1);
    for (int s = 1; s <= m; ++s) {
        Rat acc = s <= cap ? a[s] : Rat(0);
        for (int j = std::max(1, s - cap); j < s; ++j)
            acc -= Rat(j) * c[j] * a[s - j] / s;
        c[s] = acc;
        out.value += c[s];
        if (c[s] != 0)
            out.max_cluster_size = s;
    }
    return out;
}

LogXi log_xi_truncated(const Hypergraph& h, const ExpansionPlan& plan) {
    PolymerSystem sys = build_polymers(h, plan);
    if (plan.m <= 8)
        return log_xi_direct(sys, plan.m);
    return log_xi_series(sys, plan.m, active_vertices(h, plan.delta).size());
}

VolumeResult approximate_volume(const Hypergraph& h, const ExpansionPlan& plan) {
    auto start = std::chrono::steady_clock::now();
    PolymerSystem sys = build_polymers(h, plan);
    LogXi lx = plan.m <= 8
                   ? log_xi_direct(sys, plan.m)
                   : log_xi_series(sys, plan.m,
                                   active_vertices(h, plan.delta).size());
    VolumeResult res;
    res.log_xi = lx.value;
    res.cluster_count = lx.term_count;
    res.max_cluster_size = lx.max_cluster_size;
    res.polymer_count = sys.count();
    res.strategy = lx.strategy;
    res.guarantee = plan.guarantee;
    Rat u = box_upper(h, plan.delta);
    res.log_volume = h.edge_count() * log(to_real(u)) + to_real(lx.value);
    res.volume = exp(res.log_volume);
    res.tail_bound =
        h.vertex_count() * exp(-to_real(plan.rho) * plan.m);
    res.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    return res;
}

} // namespace fmvol
