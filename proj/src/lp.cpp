#include "toricnef/lp.hpp"

#include <algorithm>
#include <cstdint>

namespace toric {

namespace {

struct Tableau {
    std::size_t m = 0, ncols = 0;  // ncols excludes rhs
    std::vector<RatVector> rows;   // m rows of size ncols + 1
    RatVector obj;                 // reduced costs, size ncols + 1 (last = -objective value)
    std::vector<std::size_t> basis;

    void pivot(std::size_t r, std::size_t c) {
        Rat inv = 1 / rows[r][c];
        for (auto& x : rows[r])
            if (x != 0) x *= inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || rows[i][c] == 0) continue;
            Rat f = rows[i][c];
            for (std::size_t j = 0; j <= ncols; ++j)
                if (rows[r][j] != 0) rows[i][j] -= f * rows[r][j];
        }
        if (obj[c] != 0) {
            Rat f = obj[c];
            for (std::size_t j = 0; j <= ncols; ++j)
                if (rows[r][j] != 0) obj[j] -= f * rows[r][j];
        }
        basis[r] = c;
    }

    // Maximizes; obj holds reduced costs c_j - z_j. Columns with allowed[j] false never enter.
    bool run(const std::vector<bool>& allowed) {
        bool bland = false;
        int degenerate = 0;
        for (;;) {
            std::size_t enter = ncols;
            for (std::size_t j = 0; j < ncols; ++j) {
                if (!allowed[j] || obj[j] <= 0) continue;
                if (enter == ncols) {
                    enter = j;
                    if (bland) break;
                } else if (obj[j] > obj[enter]) {
                    enter = j;
                }
            }
            if (enter == ncols) return true;
            std::size_t leave = m;
            Rat best;
            for (std::size_t i = 0; i < m; ++i) {
                if (rows[i][enter] <= 0) continue;
                Rat ratio = rows[i][ncols] / rows[i][enter];
                if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m) return false;
            if (best == 0) {
                if (++degenerate > 50) bland = true;
            } else {
                degenerate = 0;
            }
            pivot(leave, enter);
        }
    }
};

}  // namespace

LpResult lp_maximize(const RatVector& c, const RatMatrix& A, const RatVector& b) {
    const std::size_t m = A.size(), n = c.size();
    std::size_t nart = 0;
    for (const auto& bi : b)
        if (bi < 0) ++nart;
    Tableau t;
    t.m = m;
    t.ncols = 2 * n + m + nart;
    t.rows.assign(m, RatVector(t.ncols + 1, Rat(0)));
    t.basis.assign(m, 0);
    std::size_t art = 2 * n + m;
    for (std::size_t i = 0; i < m; ++i) {
        const bool neg = b[i] < 0;
        auto& row = t.rows[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (A[i][j] == 0) continue;
            row[j] = neg ? Rat(-A[i][j]) : A[i][j];
            row[n + j] = -row[j];
        }
        row[2 * n + i] = neg ? -1 : 1;
        row[t.ncols] = neg ? Rat(-b[i]) : b[i];
        if (neg) {
            row[art] = 1;
            t.basis[i] = art++;
        } else {
            t.basis[i] = 2 * n + i;
        }
    }
    std::vector<bool> allowed(t.ncols, true);
    if (nart > 0) {
        // Phase 1: maximize -sum(artificials).
        t.obj.assign(t.ncols + 1, Rat(0));
        for (std::size_t j = 2 * n + m; j < t.ncols; ++j) t.obj[j] = -1;
        for (std::size_t i = 0; i < m; ++i)
            if (t.basis[i] >= 2 * n + m)
                for (std::size_t j = 0; j <= t.ncols; ++j) t.obj[j] += t.rows[i][j];
        t.run(allowed);
        if (t.obj[t.ncols] != 0) return {LpStatus::Infeasible, Rat(0), {}};
        for (std::size_t i = 0; i < m; ++i) {
            if (t.basis[i] < 2 * n + m) continue;
            for (std::size_t j = 0; j < 2 * n + m; ++j)
                if (t.rows[i][j] != 0) {
                    t.pivot(i, j);
                    break;
                }
        }
        for (std::size_t j = 2 * n + m; j < t.ncols; ++j) allowed[j] = false;
    }
    t.obj.assign(t.ncols + 1, Rat(0));
    for (std::size_t j = 0; j < n; ++j) {
        t.obj[j] = c[j];
        t.obj[n + j] = -c[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
        const Rat cb = t.obj[t.basis[i]];
        if (cb == 0) continue;
        for (std::size_t j = 0; j <= t.ncols; ++j)
            if (t.rows[i][j] != 0) t.obj[j] -= cb * t.rows[i][j];
    }
    if (!t.run(allowed)) return {LpStatus::Unbounded, Rat(0), {}};
    RatVector y(t.ncols, Rat(0));
    for (std::size_t i = 0; i < m; ++i) y[t.basis[i]] = t.rows[i][t.ncols];
    RatVector x(n);
    Rat value = 0;
    for (std::size_t j = 0; j < n; ++j) {
        x[j] = y[j] - y[n + j];
        value += c[j] * x[j];
    }
    return {LpStatus::Optimal, value, x};
}

bool standard_feasible(const RatMatrix& B, const RatVector& b) {
    const std::size_t m = B.size();
    if (m == 0) return true;
    const std::size_t n = B[0].size();
    Tableau t;
    t.m = m;
    t.ncols = n + m;
    t.rows.assign(m, RatVector(t.ncols + 1, Rat(0)));
    t.basis.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        const bool neg = b[i] < 0;
        for (std::size_t j = 0; j < n; ++j)
            if (B[i][j] != 0) t.rows[i][j] = neg ? Rat(-B[i][j]) : B[i][j];
        t.rows[i][n + i] = 1;
        t.rows[i][t.ncols] = neg ? Rat(-b[i]) : b[i];
        t.basis[i] = n + i;
    }
    t.obj.assign(t.ncols + 1, Rat(0));
    for (std::size_t j = n; j < t.ncols; ++j) t.obj[j] = -1;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= t.ncols; ++j) t.obj[j] += t.rows[i][j];
    std::vector<bool> allowed(t.ncols, true);
    t.run(allowed);
    return t.obj[t.ncols] == 0;
}

bool strictly_feasible(const std::vector<Point>& A, std::size_t dim) {
    if (A.empty()) return true;
    // Infeasible iff some y >= 0 with sum 1 has A^T y = 0.
    RatMatrix B(dim + 1, RatVector(A.size(), Rat(0)));
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t j = 0; j < dim; ++j) B[j][i] = Rat(A[i][j]);
        B[dim][i] = 1;
    }
    RatVector b(dim + 1, Rat(0));
    b[dim] = 1;
    return !standard_feasible(B, b);
}

std::optional<RatVector> strict_point(const RatMatrix& F, std::size_t dim) {
    RatMatrix A;
    RatVector b;
    for (const auto& f : F) {
        RatVector row(dim);
        for (std::size_t j = 0; j < dim; ++j) row[j] = -f[j];
        A.push_back(std::move(row));
        b.emplace_back(-1);
    }
    auto r = lp_maximize(RatVector(dim, Rat(0)), A, b);
    if (r.status != LpStatus::Optimal) return std::nullopt;
    return r.x;
}

std::pair<Rat, RatVector> max_margin(const RatMatrix& F, std::size_t dim) {
    RatMatrix A;
    RatVector b;
    for (const auto& f : F) {
        RatVector row(dim + 1);
        for (std::size_t j = 0; j < dim; ++j) row[j] = -f[j];
        row[dim] = 1;
        A.push_back(std::move(row));
        b.emplace_back(0);
    }
    RatVector cap(dim + 1, Rat(0));
    cap[dim] = 1;
    A.push_back(cap);
    b.emplace_back(1);
    auto r = lp_maximize(cap, A, b);
    if (r.status != LpStatus::Optimal) return {Rat(0), RatVector(dim, Rat(0))};
    RatVector w(r.x.begin(), r.x.begin() + static_cast<long>(dim));
    return {r.value, w};
}

namespace {

struct Bits {
    std::vector<std::uint64_t> w;
    explicit Bits(std::size_t n = 0) : w((n + 63) / 64, 0) {}
    void set(std::size_t i) { w[i / 64] |= std::uint64_t(1) << (i % 64); }
    Bits operator&(const Bits& o) const {
        Bits r;
        r.w.resize(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) r.w[i] = w[i] & o.w[i];
        return r;
    }
    bool subset_of(const Bits& o) const {
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] & ~o.w[i]) return false;
        return true;
    }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w) c += static_cast<std::size_t>(__builtin_popcountll(x));
        return c;
    }
};

Point combine(const Int& s, const Point& p, const Int& t, const Point& q) {
    Point r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = s * p[i] + t * q[i];
    return primitive(r);
}

}  // namespace

ConeGenerators extreme_rays(const std::vector<Point>& F, std::size_t dim) {
    std::vector<Point> lin;
    for (std::size_t i = 0; i < dim; ++i) {
        Point e(dim, Int(0));
        e[i] = 1;
        lin.push_back(e);
    }
    std::vector<Point> rays;
    std::vector<Bits> zeros;
    const std::size_t nf = F.size();
    for (std::size_t k = 0; k < nf; ++k) {
        const Point& a = F[k];
        if (std::all_of(a.begin(), a.end(), [](const Int& x) { return x == 0; })) {
            for (auto& z : zeros) z.set(k);
            continue;
        }
        std::size_t l0 = lin.size();
        for (std::size_t i = 0; i < lin.size(); ++i)
            if (dot(a, lin[i]) != 0) {
                l0 = i;
                break;
            }
        if (l0 < lin.size()) {
            Point pivot = lin[l0];
            Int ap = dot(a, pivot);
            if (ap < 0) {
                for (auto& x : pivot) x = -x;
                ap = -ap;
            }
            std::vector<Point> nl;
            for (std::size_t i = 0; i < lin.size(); ++i) {
                if (i == l0) continue;
                Int al = dot(a, lin[i]);
                nl.push_back(al == 0 ? lin[i] : combine(ap, lin[i], -al, pivot));
            }
            lin = std::move(nl);
            for (std::size_t i = 0; i < rays.size(); ++i) {
                Int ar = dot(a, rays[i]);
                if (ar != 0) rays[i] = combine(ap, rays[i], -ar, pivot);
                zeros[i].set(k);
            }
            Bits zp(nf);
            for (std::size_t j = 0; j < k; ++j) zp.set(j);
            rays.push_back(pivot);
            zeros.push_back(zp);
            continue;
        }
        std::vector<Int> val(rays.size());
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            val[i] = dot(a, rays[i]);
            if (val[i] > 0) pos.push_back(i);
            else if (val[i] < 0) neg.push_back(i);
        }
        if (neg.empty()) {
            for (std::size_t i = 0; i < rays.size(); ++i)
                if (val[i] == 0) zeros[i].set(k);
            continue;
        }
        const std::size_t cone_dim = dim - lin.size();
        std::vector<Point> nrays;
        std::vector<Bits> nzeros;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            if (val[i] < 0) continue;
            nrays.push_back(rays[i]);
            Bits z = zeros[i];
            if (val[i] == 0) z.set(k);
            nzeros.push_back(z);
        }
        for (auto p : pos)
            for (auto q : neg) {
                Bits common = zeros[p] & zeros[q];
                if (cone_dim >= 2 && common.count() + 2 < cone_dim) continue;
                bool adjacent = true;
                for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
                    if (r == p || r == q) continue;
                    if (common.subset_of(zeros[r])) adjacent = false;
                }
                if (!adjacent) continue;
                nrays.push_back(combine(val[p], rays[q], -val[q], rays[p]));
                common.set(k);
                nzeros.push_back(common);
            }
        rays = std::move(nrays);
        zeros = std::move(nzeros);
    }
    std::sort(rays.begin(), rays.end());
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
    if (!lin.empty()) lin = hnf(LatticeMatrix(lin)).H.to_rows();
    return {lin, rays};
}

ConeGenerators extreme_rays(const RatMatrix& F, std::size_t dim) {
    std::vector<Point> ints;
    ints.reserve(F.size());
    for (const auto& f : F) ints.push_back(primitive(f));
    return extreme_rays(ints, dim);
}

}  // namespace toric
