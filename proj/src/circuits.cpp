#include "toricnef/circuits.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace toric {

std::vector<int> Circuit::plus() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < rays.size(); ++i)
        if (coeffs[i] > 0) out.push_back(rays[i]);
    return out;
}

std::vector<int> Circuit::minus() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < rays.size(); ++i)
        if (coeffs[i] < 0) out.push_back(rays[i]);
    return out;
}

Circuit Circuit::reversed() const {
    Circuit c = *this;
    for (auto& x : c.coeffs) x = -x;
    return c;
}

Int Circuit::coeff(int ray) const {
    for (std::size_t i = 0; i < rays.size(); ++i)
        if (rays[i] == ray) return coeffs[i];
    return Int(0);
}

Circuit canonical_orientation(const Circuit& c) {
    const auto p = c.plus().size(), m = c.minus().size();
    if (m < p) return c;
    if (m > p) return c.reversed();
    // Equal sizes: the smallest ray goes to S-.
    return c.coeffs[0] < 0 ? c : c.reversed();
}

std::optional<Circuit> circuit_of(const std::vector<Point>& rays, const std::vector<int>& subset) {
    if (subset.size() < 2) return std::nullopt;
    const std::size_t n = rays[0].size();
    std::vector<int> s = subset;
    std::sort(s.begin(), s.end());
    RatMatrix A(n, RatVector(s.size()));
    for (std::size_t k = 0; k < s.size(); ++k)
        for (std::size_t j = 0; j < n; ++j) A[j][k] = Rat(rays[static_cast<std::size_t>(s[k])][j]);
    auto ns = nullspace(A, s.size());
    if (ns.size() != 1) return std::nullopt;
    Point rel = primitive(ns[0]);
    for (const auto& x : rel)
        if (x == 0) return std::nullopt;
    return canonical_orientation(Circuit{s, rel});
}

std::vector<Circuit> find_circuits(const std::vector<Point>& rays, std::size_t max_size,
                                   const std::vector<int>* restrict_to) {
    std::vector<int> pool;
    if (restrict_to) pool = *restrict_to;
    else
        for (std::size_t i = 0; i < rays.size(); ++i) pool.push_back(static_cast<int>(i));
    std::sort(pool.begin(), pool.end());
    std::vector<Circuit> out;
    std::vector<int> cur;
    // Extends independent sets only; a dependent set is tested once and never extended.
    std::function<void(std::size_t, RatMatrix&)> rec = [&](std::size_t start, RatMatrix& basis) {
        for (std::size_t i = start; i < pool.size(); ++i) {
            cur.push_back(pool[i]);
            RatMatrix trial = basis;
            trial.push_back(to_rat(rays[static_cast<std::size_t>(pool[i])]));
            if (toric::rank(trial) == trial.size()) {
                if (cur.size() < max_size) rec(i + 1, trial);
            } else if (auto c = circuit_of(rays, cur)) {
                out.push_back(*c);
            }
            cur.pop_back();
        }
    };
    RatMatrix empty;
    rec(0, empty);
    std::sort(out.begin(), out.end(), [](const Circuit& a, const Circuit& b) {
        return a.rays.size() != b.rays.size() ? a.rays.size() < b.rays.size() : a.rays < b.rays;
    });
    return out;
}

std::vector<Circuit> find_circuits(const Fan& fan, std::size_t max_size) {
    return find_circuits(fan.rays(), max_size);
}

Support is_supported(const Circuit& S, const Fan& fan) {
    Support sup;
    const auto plus = S.plus();
    for (int n : plus) {
        Cone c;
        for (int r : S.rays)
            if (r != n) c.push_back(r);
        sup.plus_cones.push_back(c);
    }
    std::vector<std::vector<Cone>> links;
    for (const auto& c : sup.plus_cones) {
        if (!fan.has_cone(c)) {
            sup.reason = "cone " + to_string(Point(c.begin(), c.end())) + " is not in the fan";
            return sup;
        }
        std::vector<Cone> link;
        for (const auto& m : fan.max_cones()) {
            if (!std::includes(m.begin(), m.end(), c.begin(), c.end())) continue;
            Cone e;
            std::set_difference(m.begin(), m.end(), c.begin(), c.end(), std::back_inserter(e));
            link.push_back(e);
        }
        std::sort(link.begin(), link.end());
        links.push_back(link);
    }
    for (const auto& l : links)
        if (l != links[0]) {
            sup.reason = "plus cones have different links";
            return sup;
        }
    sup.supported = !links.empty();
    if (!links.empty()) sup.extension_sets = links[0];
    return sup;
}

std::string to_string(FlipKind k) {
    return k == FlipKind::DivisorialContraction ? "divisorial-contraction" : "generalized-flop";
}

FlipResult flip(const Fan& fan, const Circuit& S) {
    const auto plus = S.plus(), minus = S.minus();
    if (plus.empty() || minus.empty()) throw Error("flip needs both sign parts non-empty");
    Support sup = is_supported(S, fan);
    if (!sup.supported) throw Error("circuit is not supported: " + sup.reason);
    FlipResult res;
    res.extension_sets = sup.extension_sets;
    auto join = [](const Cone& a, const Cone& b) {
        Cone c = a;
        c.insert(c.end(), b.begin(), b.end());
        std::sort(c.begin(), c.end());
        return c;
    };
    for (const auto& c : sup.plus_cones)
        for (const auto& e : sup.extension_sets) res.removed.push_back(join(c, e));
    for (int m : minus) {
        Cone c;
        for (int r : S.rays)
            if (r != m) c.push_back(r);
        for (const auto& e : sup.extension_sets) res.inserted.push_back(join(c, e));
    }
    std::sort(res.removed.begin(), res.removed.end());
    std::sort(res.inserted.begin(), res.inserted.end());
    std::set<Cone> removed(res.removed.begin(), res.removed.end());
    std::vector<Cone> cones;
    for (const auto& c : fan.max_cones())
        if (!removed.count(c)) cones.push_back(c);
    cones.insert(cones.end(), res.inserted.begin(), res.inserted.end());
    if (minus.size() == 1) {
        res.kind = FlipKind::DivisorialContraction;
        res.removed_ray = minus[0];
        for (const auto& c : cones)
            if (std::binary_search(c.begin(), c.end(), res.removed_ray))
                throw Error("divisorial flip leaves the contracted ray in use");
        std::vector<Point> rays;
        for (std::size_t i = 0; i < fan.rays().size(); ++i)
            if (static_cast<int>(i) != res.removed_ray) rays.push_back(fan.rays()[i]);
        for (auto& c : cones)
            for (auto& i : c)
                if (i > res.removed_ray) --i;
        res.fan = Fan(rays, cones);
    } else {
        res.kind = FlipKind::GeneralizedFlop;
        res.fan = Fan(fan.rays(), cones);
    }
    return res;
}

RatVector Pullback::apply(const RatVector& wp) const {
    RatVector w(matrix.size(), Rat(0));
    for (std::size_t i = 0; i < matrix.size(); ++i) w[i] = dot(matrix[i], wp);
    return w;
}

Pullback pullback_classes(const Fan& source, const FlipResult& result, const Circuit& S, const ClassSpace& W,
                          const ClassSpace& Wp) {
    if (result.kind != FlipKind::DivisorialContraction) throw Error("pullback needs a divisorial contraction");
    const int n = result.removed_ray;
    const Int cn = S.coeff(n);
    Pullback pb;
    pb.matrix.assign(W.dim(), RatVector(Wp.dim(), Rat(0)));
    for (std::size_t col = 0; col < Wp.dim(); ++col) {
        RatVector e(Wp.dim(), Rat(0));
        e[col] = 1;
        RatVector ap = Wp.lift(e);
        RatVector a(source.rays().size(), Rat(0));
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (static_cast<int>(i) == n) continue;
            a[i] = ap[i < static_cast<std::size_t>(n) ? i : i - 1];
        }
        Rat an = 0;
        for (std::size_t k = 0; k < S.rays.size(); ++k) {
            if (S.rays[k] == n) continue;
            an += Rat(S.coeffs[k]) / Rat(-cn) * a[static_cast<std::size_t>(S.rays[k])];
        }
        a[static_cast<std::size_t>(n)] = an;
        RatVector w = W.project(a);
        for (std::size_t i = 0; i < W.dim(); ++i) pb.matrix[i][col] = w[i];
    }
    return pb;
}

}  // namespace toric
