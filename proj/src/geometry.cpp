#include "fmvol/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>

#include "fmvol/errors.hpp"

namespace fmvol {

namespace {

constexpr int64_t kPrime = 1000000007;

int64_t pow_mod(int64_t base, int64_t e) {
    int64_t acc = 1;
    base %= kPrime;
    if (base < 0)
        base += kPrime;
    while (e > 0) {
        if (e & 1)
            acc = acc * base % kPrime;
        base = base * base % kPrime;
        e >>= 1;
    }
    return acc;
}

// num/den mod p, or nullopt when den vanishes mod p.
std::optional<int64_t> to_mod(const Rat& r) {
    int64_t num = mpz_fdiv_ui(r.get_num().get_mpz_t(), kPrime);
    int64_t den = mpz_fdiv_ui(r.get_den().get_mpz_t(), kPrime);
    if (r.get_num() < 0 && num != 0)
        num = kPrime - num;
    if (den == 0)
        return std::nullopt;
    return num * pow_mod(den, kPrime - 2) % kPrime;
}

// Rank mod p; -1 when some entry cannot be reduced.
int rank_mod(const std::vector<const std::vector<Rat>*>& rows, int cols) {
    std::vector<std::vector<int64_t>> m;
    m.reserve(rows.size());
    for (auto* row : rows) {
        std::vector<int64_t> out(cols);
        for (int j = 0; j < cols; ++j) {
            auto v = to_mod((*row)[j]);
            if (!v)
                return -1;
            out[j] = *v;
        }
        m.push_back(std::move(out));
    }
    int rank = 0;
    for (int col = 0; col < cols && rank < static_cast<int>(m.size()); ++col) {
        int pivot = -1;
        for (int i = rank; i < static_cast<int>(m.size()); ++i)
            if (m[i][col] != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0)
            continue;
        std::swap(m[rank], m[pivot]);
        int64_t inv = pow_mod(m[rank][col], kPrime - 2);
        for (int i = rank + 1; i < static_cast<int>(m.size()); ++i) {
            int64_t f = m[i][col] * inv % kPrime;
            if (f == 0)
                continue;
            for (int j = col; j < cols; ++j)
                m[i][j] = ((m[i][j] - f * m[rank][j]) % kPrime + kPrime) % kPrime;
        }
        ++rank;
    }
    return rank;
}

int rank_exact(const std::vector<const std::vector<Rat>*>& rows, int cols) {
    std::vector<std::vector<Rat>> m;
    m.reserve(rows.size());
    for (auto* row : rows)
        m.emplace_back(row->begin(), row->begin() + cols);
    int rank = 0;
    for (int col = 0; col < cols && rank < static_cast<int>(m.size()); ++col) {
        int pivot = -1;
        for (int i = rank; i < static_cast<int>(m.size()); ++i)
            if (m[i][col] != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0)
            continue;
        std::swap(m[rank], m[pivot]);
        for (int i = rank + 1; i < static_cast<int>(m.size()); ++i) {
            if (m[i][col] == 0)
                continue;
            Rat f = m[i][col] / m[rank][col];
            for (int j = col; j < cols; ++j)
                m[i][j] -= f * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

int rank_of(const std::vector<const std::vector<Rat>*>& rows, int cols) {
    int r = rank_mod(rows, cols);
    if (r < 0)
        return rank_exact(rows, cols);
    // Modular rank is a lower bound; it can only come in short when p divides
    // the wrong minors, so recheck exactly unless it is already maximal.
    if (r == cols || r == static_cast<int>(rows.size()))
        return r;
    return rank_exact(rows, cols);
}

// Solves the square system rows*x = rhs; nullopt when singular.
std::optional<std::vector<Rat>> solve_square(
    const std::vector<const std::vector<Rat>*>& rows,
    const std::vector<const Rat*>& rhs, int d) {
    std::vector<std::vector<Rat>> m(d, std::vector<Rat>(d + 1));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j)
            m[i][j] = (*rows[i])[j];
        m[i][d] = *rhs[i];
    }
    for (int col = 0; col < d; ++col) {
        int pivot = -1;
        for (int i = col; i < d; ++i)
            if (m[i][col] != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0)
            return std::nullopt;
        std::swap(m[col], m[pivot]);
        for (int i = 0; i < d; ++i) {
            if (i == col || m[i][col] == 0)
                continue;
            Rat f = m[i][col] / m[col][col];
            for (int j = col; j <= d; ++j)
                m[i][j] -= f * m[col][j];
        }
    }
    std::vector<Rat> x(d);
    for (int i = 0; i < d; ++i)
        x[i] = m[i][d] / m[i][i];
    return x;
}

// Nonzero kernel vector of a (d-1)-row system of rank d-1, if any.
std::optional<std::vector<Rat>> kernel_direction(
    const std::vector<const std::vector<Rat>*>& rows, int d) {
    std::vector<std::vector<Rat>> m;
    m.reserve(rows.size());
    for (auto* row : rows)
        m.emplace_back(row->begin(), row->begin() + d);
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < d && rank < static_cast<int>(m.size()); ++col) {
        int pivot = -1;
        for (int i = rank; i < static_cast<int>(m.size()); ++i)
            if (m[i][col] != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0)
            continue;
        std::swap(m[rank], m[pivot]);
        for (int i = 0; i < static_cast<int>(m.size()); ++i) {
            if (i == rank || m[i][col] == 0)
                continue;
            Rat f = m[i][col] / m[rank][col];
            for (int j = col; j < d; ++j)
                m[i][j] -= f * m[rank][j];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    if (rank != d - 1)
        return std::nullopt;
    int free_col = 0;
    while (free_col < d &&
           std::find(pivot_col.begin(), pivot_col.end(), free_col) != pivot_col.end())
        ++free_col;
    std::vector<Rat> y(d, Rat(0));
    y[free_col] = 1;
    for (int i = 0; i < rank; ++i)
        y[pivot_col[i]] = -m[i][free_col] / m[i][pivot_col[i]];
    return y;
}

struct Rows {
    std::vector<std::vector<Rat>> a;
    std::vector<Rat> b;
    bool infeasible = false;
};

// Scale each row so its first nonzero coefficient is +-1, drop trivial rows,
// keep only the tightest right-hand side per normal direction.
Rows normalize(const HPolytope& p) {
    if (p.A.size() != p.b.size())
        throw ArgumentError("constraint matrix/rhs size mismatch");
    Rows out;
    std::map<std::vector<Rat>, Rat> best;
    for (size_t i = 0; i < p.A.size(); ++i) {
        if (static_cast<int>(p.A[i].size()) != p.dim)
            throw ArgumentError("constraint row has wrong arity");
        int lead = 0;
        while (lead < p.dim && p.A[i][lead] == 0)
            ++lead;
        if (lead == p.dim) {
            if (p.b[i] < 0)
                out.infeasible = true;
            continue;
        }
        Rat scale = Rat(1) / rat_abs(p.A[i][lead]);
        std::vector<Rat> a(p.dim);
        for (int j = 0; j < p.dim; ++j)
            a[j] = p.A[i][j] * scale;
        Rat rhs = p.b[i] * scale;
        auto [it, fresh] = best.emplace(std::move(a), rhs);
        if (!fresh && rhs < it->second)
            it->second = rhs;
    }
    for (auto& [a, rhs] : best) {
        out.a.push_back(a);
        out.b.push_back(rhs);
    }
    return out;
}

// Fast certificate: every coordinate has a pure lower-bound row and appears
// with positive coefficient in some all-nonnegative row, which caps it above.
bool syntactically_bounded(const Rows& rows, int d) {
    for (int j = 0; j < d; ++j) {
        bool lower = false;
        bool upper = false;
        for (size_t i = 0; i < rows.a.size() && !(lower && upper); ++i) {
            bool pure = true;
            bool nonneg = true;
            for (int jj = 0; jj < d; ++jj) {
                if (rows.a[i][jj] < 0)
                    nonneg = false;
                if (jj != j && rows.a[i][jj] != 0)
                    pure = false;
            }
            if (pure && rows.a[i][j] < 0)
                lower = true;
            if (nonneg && rows.a[i][j] > 0)
                upper = true;
        }
        if (!lower || !upper)
            return false;
    }
    return true;
}

void check_subset_budget(int m, int d, long cap) {
    mpz_class count;
    mpz_bin_uiui(count.get_mpz_t(), m, d);
    if (count > cap)
        throw ResourceError("constraint basis budget exceeded: C(" +
                            std::to_string(m) + "," + std::to_string(d) +
                            ") bases");
}

// Streams all size-k index subsets of 0..m-1.
template <typename F>
void for_each_subset(int m, int k, const F& f) {
    if (k > m)
        return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i)
        idx[i] = i;
    while (true) {
        f(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i)
            --i;
        if (i < 0)
            return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

struct VertexData {
    std::vector<std::vector<Rat>> coords; // lexicographically sorted
    std::vector<VertexSet> tight;         // tight row ids per vertex
    std::vector<std::vector<mpz_class>> scaled; // denom * coords, integer
    mpz_class denom = 1;                        // common denominator
    std::vector<std::vector<int64_t>> small;    // scaled, when all fit int64
    bool small_ok = false;
};

VertexData find_vertices(const Rows& rows, int d, const VolumeLimits& limits) {
    int m = static_cast<int>(rows.a.size());
    check_subset_budget(m, d, limits.basis_cap);
    std::map<std::vector<Rat>, VertexSet> found;
    std::vector<const std::vector<Rat>*> basis(d);
    std::vector<const Rat*> rhs(d);
    for_each_subset(m, d, [&](const std::vector<int>& idx) {
        for (int i = 0; i < d; ++i) {
            basis[i] = &rows.a[idx[i]];
            rhs[i] = &rows.b[idx[i]];
        }
        if (rank_mod(basis, d) < d && rank_exact(basis, d) < d)
            return;
        auto x = solve_square(basis, rhs, d);
        if (!x)
            return;
        if (found.count(*x))
            return;
        std::vector<int> tight;
        for (int i = 0; i < m; ++i) {
            Rat lhs(0);
            for (int j = 0; j < d; ++j)
                lhs += rows.a[i][j] * (*x)[j];
            if (lhs > rows.b[i])
                return; // infeasible basic point
            if (lhs == rows.b[i])
                tight.push_back(i);
        }
        found.emplace(std::move(*x), VertexSet::from_sorted(std::move(tight)));
    });
    VertexData out;
    for (auto& [coords, tight] : found) {
        out.coords.push_back(coords);
        out.tight.push_back(tight);
    }
    for (const auto& v : out.coords)
        for (const auto& c : v)
            mpz_lcm(out.denom.get_mpz_t(), out.denom.get_mpz_t(),
                    c.get_den().get_mpz_t());
    for (const auto& v : out.coords) {
        std::vector<mpz_class> row(d);
        for (int j = 0; j < d; ++j) {
            Rat s = v[j] * Rat(out.denom);
            row[j] = s.get_num(); // exact: denom is a common multiple
        }
        out.scaled.push_back(std::move(row));
    }
    out.small_ok = true;
    for (const auto& row : out.scaled) {
        std::vector<int64_t> s(d);
        for (int j = 0; j < d && out.small_ok; ++j) {
            if (!row[j].fits_slong_p() || std::abs(row[j].get_si()) >= (1L << 60))
                out.small_ok = false;
            else
                s[j] = row[j].get_si();
        }
        if (!out.small_ok)
            break;
        out.small.push_back(std::move(s));
    }
    return out;
}

// Feasible + pointed recession cone + no extreme recession ray => bounded.
void check_bounded(const Rows& rows, int d, const VolumeLimits& limits) {
    if (syntactically_bounded(rows, d))
        return;
    int m = static_cast<int>(rows.a.size());
    std::vector<const std::vector<Rat>*> all;
    for (auto& a : rows.a)
        all.push_back(&a);
    if (rank_of(all, d) < d)
        throw GeometryError("rank-deficient constraint system cannot be bounded");
    if (d == 1) {
        // rank 1 with no recession ray needs rows of both signs
        bool pos = false, neg = false;
        for (auto& a : rows.a)
            (a[0] > 0 ? pos : neg) = true;
        if (!pos || !neg)
            throw GeometryError("unbounded polyhedron");
        return;
    }
    check_subset_budget(m, d - 1, limits.basis_cap);
    std::vector<const std::vector<Rat>*> basis(d - 1);
    bool unbounded = false;
    for_each_subset(m, d - 1, [&](const std::vector<int>& idx) {
        if (unbounded)
            return;
        for (int i = 0; i < d - 1; ++i)
            basis[i] = &rows.a[idx[i]];
        auto y = kernel_direction(basis, d);
        if (!y)
            return;
        bool le = true, ge = true;
        for (int i = 0; i < m && (le || ge); ++i) {
            Rat dot(0);
            for (int j = 0; j < d; ++j)
                dot += rows.a[i][j] * (*y)[j];
            if (dot > 0)
                le = false;
            if (dot < 0)
                ge = false;
        }
        if (le || ge)
            unbounded = true;
    });
    if (unbounded)
        throw GeometryError("unbounded polyhedron");
}

struct Triangulator {
    const Rows& rows;
    const VertexData& vd;
    int d;
    std::map<std::pair<int, VertexSet>, std::vector<std::vector<int>>> memo;

    // Simplices (as vertex-index lists of size g+1) triangulating the face
    // spanned by `face`, treated as g-dimensional. Pulling from the lex-min
    // vertex: cone it over the triangulations of the facets avoiding it.
    const std::vector<std::vector<int>>& run(const VertexSet& face, int g) {
        auto key = std::make_pair(g, face);
        auto it = memo.find(key);
        if (it != memo.end())
            return it->second;
        std::vector<std::vector<int>> simplices;
        if (face.size() <= g + 1) {
            if (face.size() == g + 1)
                simplices.push_back({face.begin(), face.end()});
        } else {
            int apex = *face.begin();
            VertexSet common = vd.tight[apex];
            std::vector<int> members(face.begin(), face.end());
            for (int v : members)
                if (v != apex) {
                    std::vector<int> keep;
                    std::set_intersection(common.begin(), common.end(),
                                          vd.tight[v].begin(), vd.tight[v].end(),
                                          std::back_inserter(keep));
                    common = VertexSet::from_sorted(std::move(keep));
                }
            std::map<VertexSet, int> facets;
            for (int r = 0; r < static_cast<int>(rows.a.size()); ++r) {
                if (vd.tight[apex].contains(r))
                    continue;
                std::vector<int> sub;
                for (int v : members)
                    if (vd.tight[v].contains(r))
                        sub.push_back(v);
                if (static_cast<int>(sub.size()) < g)
                    continue;
                facets.emplace(VertexSet::from_sorted(std::move(sub)), r);
            }
            int need = d - (g - 1); // tight normals of a (g-1)-face span this
            for (auto& [sub, row] : facets) {
                std::vector<const std::vector<Rat>*> normals;
                VertexSet tight_rows = vd.tight[*sub.begin()];
                for (int v : sub) {
                    std::vector<int> keep;
                    std::set_intersection(tight_rows.begin(), tight_rows.end(),
                                          vd.tight[v].begin(), vd.tight[v].end(),
                                          std::back_inserter(keep));
                    tight_rows = VertexSet::from_sorted(std::move(keep));
                }
                for (int r : tight_rows)
                    normals.push_back(&rows.a[r]);
                // modular rank is a lower bound: r > need rejects soundly, and
                // r == need accepts (a collision only admits a lower face whose
                // cone simplices are degenerate); only r < need needs an exact
                // recheck
                int r = rank_mod(normals, d);
                if (r > need)
                    continue;
                if (r != need && rank_exact(normals, d) != need)
                    continue;
                for (const auto& s : run(sub, g - 1)) {
                    std::vector<int> simplex = s;
                    simplex.push_back(apex);
                    simplices.push_back(std::move(simplex));
                }
            }
        }
        return memo[key] = std::move(simplices);
    }
};

// Fast path: Bareiss over __int128 on the stack. Returns false when an
// intermediate minor threatens to overflow; entries stay below 2^62 so every
// product fits in 126 bits.
bool simplex_det_small(const VertexData& vd, const std::vector<int>& simplex,
                       int d, mpz_class& out) {
    using i128 = __int128;
    constexpr i128 lim = static_cast<i128>(1) << 62;
    i128 m[16][16];
    const auto& base = vd.small[simplex.back()];
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            m[i][j] = static_cast<i128>(vd.small[simplex[i]][j]) - base[j];
    i128 prev = 1;
    for (int col = 0; col < d; ++col) {
        int pivot = -1;
        for (int i = col; i < d; ++i)
            if (m[i][col] != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) {
            out = 0;
            return true;
        }
        if (pivot != col)
            for (int j = col; j < d; ++j)
                std::swap(m[col][j], m[pivot][j]);
        for (int i = col + 1; i < d; ++i)
            for (int j = col + 1; j < d; ++j) {
                m[i][j] = (m[col][col] * m[i][j] - m[i][col] * m[col][j]) / prev;
                if (m[i][j] >= lim || m[i][j] <= -lim)
                    return false;
            }
        prev = m[col][col];
    }
    i128 det = m[d - 1][d - 1];
    if (det < 0)
        det = -det;
    out = mpz_class(static_cast<unsigned long>(det >> 64));
    out <<= 64;
    out += mpz_class(static_cast<unsigned long>(static_cast<uint64_t>(det)));
    return true;
}

// |det| of the scaled integer edge matrix, via fraction-free Bareiss
// elimination (all divisions exact), avoiding per-step gcd canonicalization.
mpz_class simplex_det_scaled(const VertexData& vd, const std::vector<int>& simplex,
                             int d) {
    std::vector<std::vector<mpz_class>> m(d, std::vector<mpz_class>(d));
    const auto& base = vd.scaled[simplex.back()];
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            m[i][j] = vd.scaled[simplex[i]][j] - base[j];
    mpz_class prev(1);
    for (int col = 0; col < d; ++col) {
        int pivot = -1;
        for (int i = col; i < d; ++i)
            if (m[i][col] != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0)
            return mpz_class(0);
        if (pivot != col)
            std::swap(m[col], m[pivot]);
        for (int i = col + 1; i < d; ++i)
            for (int j = col + 1; j < d; ++j) {
                m[i][j] = m[col][col] * m[i][j] - m[i][col] * m[col][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(),
                             prev.get_mpz_t());
            }
        prev = m[col][col];
    }
    return abs(m[d - 1][d - 1]);
}

} // namespace

std::vector<std::vector<Rat>> enumerate_vertices(const HPolytope& p,
                                                 const VolumeLimits& limits) {
    if (p.dim < 0)
        throw ArgumentError("negative dimension");
    if (p.dim > limits.dim_cap)
        throw ResourceError("dimension cap exceeded: " + std::to_string(p.dim));
    Rows rows = normalize(p);
    if (rows.infeasible || p.dim == 0)
        return {};
    return find_vertices(rows, p.dim, limits).coords;
}

Rat volume(const HPolytope& p, const VolumeLimits& limits) {
    if (p.dim < 0)
        throw ArgumentError("negative dimension");
    if (p.dim > limits.dim_cap)
        throw ResourceError("dimension cap exceeded: " + std::to_string(p.dim));
    Rows rows = normalize(p);
    if (rows.infeasible)
        return Rat(0);
    if (p.dim == 0)
        return Rat(1);
    int d = p.dim;
    check_bounded(rows, d, limits);
    VertexData vd = find_vertices(rows, d, limits);
    if (static_cast<int>(vd.coords.size()) < d + 1)
        return Rat(0);
    std::vector<int> all(vd.coords.size());
    for (size_t i = 0; i < all.size(); ++i)
        all[i] = static_cast<int>(i);
    Triangulator tri{rows, vd, d, {}};
    mpz_class total(0);
    mpz_class det;
    for (const auto& s : tri.run(VertexSet::from_sorted(std::move(all)), d)) {
        if (vd.small_ok && simplex_det_small(vd, s, d, det))
            total += det;
        else
            total += simplex_det_scaled(vd, s, d);
    }
    mpz_class div;
    mpz_pow_ui(div.get_mpz_t(), vd.denom.get_mpz_t(), d);
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), d);
    return Rat(total) / Rat(div * fact);
}

} // namespace fmvol
