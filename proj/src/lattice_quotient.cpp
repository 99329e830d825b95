#include "toricnef/lattice_quotient.hpp"

namespace toric {

namespace {

Int mod(const Int& a, const Int& n) {
    Int r = a % n;
    if (r < 0) r += n;
    return r;
}

}  // namespace

DiagonalAction::DiagonalAction(Int n, std::vector<Point> gens) : order(std::move(n)), generators(std::move(gens)) {
    if (order <= 0) throw InputError("group order must be positive");
    for (auto& g : generators) {
        if (rank_ == 0) rank_ = g.size();
        if (g.size() != rank_) throw InputError("weight vectors of different lengths");
        for (auto& x : g) x = mod(x, order);
    }
}

DiagonalAction DiagonalAction::from_projective(Int n, const std::vector<Point>& projective_weights) {
    std::vector<Point> gens;
    for (const auto& w : projective_weights) {
        if (w.empty()) throw InputError("empty weight vector");
        Point g;
        for (std::size_t i = 1; i < w.size(); ++i) g.push_back(w[i] - w[0]);
        gens.push_back(g);
    }
    return DiagonalAction(std::move(n), std::move(gens));
}

bool is_invariant(const DiagonalAction& action, const Point& m) {
    for (const auto& g : action.generators)
        if (mod(dot(g, m), action.order) != 0) return false;
    return true;
}

bool Sublattice::contains(const Point& p) const {
    RatMatrix bt;
    for (std::size_t j = 0; j < ambient_rank; ++j) {
        RatVector row;
        for (std::size_t i = 0; i < basis.rows(); ++i) row.emplace_back(basis.at(i, j));
        bt.push_back(row);
    }
    auto x = solve(bt, to_rat(p));
    if (!x) return false;
    for (std::size_t i = 0; i < x->size(); ++i)
        if (boost::multiprecision::denominator((*x)[i]) != 1) return false;
    return true;
}

std::vector<Int> character_divisors(const DiagonalAction& action, std::size_t k) {
    // Rows generate the image lattice of Z^k in Z^g together with n Z^g.
    const std::size_t g = action.generators.size();
    if (g == 0) return {};
    std::vector<Point> rows;
    for (std::size_t j = 0; j < k; ++j) {
        Point r;
        for (std::size_t i = 0; i < g; ++i) r.push_back(action.generators[i][j]);
        rows.push_back(r);
    }
    for (std::size_t i = 0; i < g; ++i) {
        Point r(g, Int(0));
        r[i] = action.order;
        rows.push_back(r);
    }
    return elementary_divisors(LatticeMatrix(rows));
}

Int character_image_order(const DiagonalAction& action, std::size_t k) {
    Int total = 1;
    for (std::size_t i = 0; i < action.generators.size(); ++i) total *= action.order;
    for (const auto& d : character_divisors(action, k)) total /= d;
    return total;
}

Sublattice invariant_sublattice(const DiagonalAction& action, std::size_t k) {
    if (action.order == 0) throw InputError("group order must be nonzero");
    if (action.rank() != 0 && action.rank() != k) throw InputError("weight length does not match ambient rank");
    const std::size_t g = action.generators.size();
    if (g == 0) return {k, LatticeMatrix::identity(k), Int(1)};
    // {(m, t) : W m + n t = 0}, projected to m.
    std::vector<Point> rows;
    for (std::size_t i = 0; i < g; ++i) {
        Point r(k + g, Int(0));
        for (std::size_t j = 0; j < k; ++j) r[j] = action.generators[i][j];
        r[k + i] = action.order;
        rows.push_back(r);
    }
    LatticeMatrix ker = integer_kernel(LatticeMatrix(rows));
    std::vector<Point> proj;
    for (std::size_t i = 0; i < ker.rows(); ++i) {
        Point r = ker.row(i);
        r.resize(k);
        proj.push_back(r);
    }
    LatticeMatrix H = hnf(LatticeMatrix(proj)).H;
    std::vector<Point> basis;
    for (std::size_t i = 0; i < H.rows(); ++i) {
        Point r = H.row(i);
        bool nz = false;
        for (const auto& x : r) nz = nz || x != 0;
        if (nz) basis.push_back(r);
    }
    LatticeMatrix B(basis);
    return {k, B, abs(determinant(B))};
}

Point rebase_point(const Point& v, const LatticeMatrix& B) {
    // Solve B^T x = v.
    RatMatrix bt;
    for (std::size_t j = 0; j < B.cols(); ++j) {
        RatVector row;
        for (std::size_t i = 0; i < B.rows(); ++i) row.emplace_back(B.at(i, j));
        bt.push_back(row);
    }
    auto x = solve(bt, to_rat(v));
    if (!x) throw InputError("vertex " + to_string(v) + " is not in the span of the basis");
    Point out;
    for (const auto& c : *x) {
        if (boost::multiprecision::denominator(c) != 1)
            throw InputError("vertex " + to_string(v) + " is not in the sublattice");
        out.push_back(boost::multiprecision::numerator(c));
    }
    if (unbase_point(out, B) != v) throw InputError("vertex " + to_string(v) + " is not in the sublattice");
    return out;
}

Point unbase_point(const Point& x, const LatticeMatrix& B) {
    Point v(B.cols(), Int(0));
    for (std::size_t i = 0; i < B.rows(); ++i)
        for (std::size_t j = 0; j < B.cols(); ++j) v[j] += x[i] * B.at(i, j);
    return v;
}

LatticePolytope rebase_polytope(const LatticePolytope& P, const LatticeMatrix& B) {
    std::vector<Point> verts;
    for (const auto& v : P.vertices()) verts.push_back(rebase_point(v, B));
    return LatticePolytope::hull(verts);
}

}  // namespace toric
