#include "fixtures.hpp"

#include <doctest.h>

#include <functional>
#include <random>

using namespace toric;

namespace {

// gcd of all k x k minors, by brute force over row and column subsets
Int determinantal_divisor(const LatticeMatrix& A, std::size_t k) {
    Int g = 0;
    std::vector<int> rs(A.rows()), cs(A.cols());
    auto choose = [](std::size_t n, std::size_t k) {
        std::vector<std::vector<std::size_t>> out;
        std::vector<std::size_t> cur;
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (cur.size() == k) {
                out.push_back(cur);
                return;
            }
            for (std::size_t j = i; j < n; ++j) {
                cur.push_back(j);
                rec(j + 1);
                cur.pop_back();
            }
        };
        rec(0);
        return out;
    };
    for (const auto& r : choose(A.rows(), k))
        for (const auto& c : choose(A.cols(), k)) {
            RatMatrix m;
            for (auto i : r) {
                RatVector row;
                for (auto j : c) row.emplace_back(A.at(i, j));
                m.push_back(row);
            }
            Rat d = determinant(m);
            g = gcd(g, numerator(d));
        }
    return g;
}

LatticeMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long bound) {
    std::uniform_int_distribution<long> d(-bound, bound);
    std::vector<Point> rows(r, Point(c));
    for (auto& row : rows)
        for (auto& x : row) x = d(rng);
    return LatticeMatrix(rows, c);
}

bool is_hnf(const LatticeMatrix& H) {
    std::size_t lead = 0;
    for (std::size_t i = 0; i < H.rows(); ++i) {
        std::size_t j = 0;
        while (j < H.cols() && H.at(i, j) == 0) ++j;
        if (j == H.cols()) {
            for (std::size_t k = i; k < H.rows(); ++k)
                for (std::size_t l = 0; l < H.cols(); ++l)
                    if (H.at(k, l) != 0) return false;
            return true;
        }
        if (i > 0 && j < lead) return false;
        if (H.at(i, j) <= 0) return false;
        for (std::size_t k = 0; k < i; ++k)
            if (H.at(k, j) < 0 || H.at(k, j) >= H.at(i, j)) return false;
        lead = j + 1;
    }
    return true;
}

}  // namespace

TEST_SUITE("arith") {
TEST_CASE("hnf of textbook matrices") {
    LatticeMatrix A{{3, 3, 1, 4}, {0, 1, 0, 0}, {0, 0, 19, 16}, {0, 0, 0, 3}};
    CHECK(hnf(A).H == LatticeMatrix{{3, 0, 1, 1}, {0, 1, 0, 0}, {0, 0, 19, 1}, {0, 0, 0, 3}});
    LatticeMatrix B{{2, 3, 6, 2}, {5, 6, 1, 6}, {8, 3, 1, 1}};
    auto r = hnf(B);
    CHECK(r.H == LatticeMatrix{{1, 0, 50, -11}, {0, 3, 28, -2}, {0, 0, 61, -13}});
    CHECK(r.U * B == r.H);
    CHECK(abs(determinant(r.U)) == 1);
}

TEST_CASE("snf of a textbook matrix") {
    LatticeMatrix A{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
    auto r = snf(A);
    CHECK(r.D == LatticeMatrix{{2, 0, 0}, {0, 6, 0}, {0, 0, 12}});
    CHECK(r.U * A * r.V == r.D);
    CHECK(elementary_divisors(A) == std::vector<Int>{2, 6, 12});
}

TEST_CASE("elementary divisors agree with determinantal divisors") {
    std::mt19937_64 rng(7);
    for (int n = 0; n < 60; ++n) {
        auto A = random_matrix(rng, 3, 4, n < 30 ? 6 : 1000);
        auto e = elementary_divisors(A);
        Int prev = 1;
        for (std::size_t k = 1; k <= 3; ++k) {
            Int dk = determinantal_divisor(A, k);
            if (dk == 0) {
                CHECK(e.size() < k);
                break;
            }
            REQUIRE(e.size() >= k);
            CHECK(e[k - 1] * prev == dk);
            prev = dk;
        }
    }
}

TEST_CASE("hnf and snf identities on random matrices") {
    std::mt19937_64 rng(11);
    for (int n = 0; n < 100; ++n) {
        auto A = random_matrix(rng, 2 + n % 4, 2 + (n / 4) % 4, 1000000);
        auto h = hnf(A);
        CHECK(h.U * A == h.H);
        CHECK(abs(determinant(h.U)) == 1);
        CHECK(is_hnf(h.H));
        auto s = snf(A);
        CHECK(s.U * A * s.V == s.D);
        CHECK(abs(determinant(s.U)) == 1);
        CHECK(abs(determinant(s.V)) == 1);
        for (std::size_t i = 0; i + 1 < std::min(s.D.rows(), s.D.cols()); ++i)
            if (s.D.at(i + 1, i + 1) != 0) CHECK(s.D.at(i + 1, i + 1) % s.D.at(i, i) == 0);
    }
}

TEST_CASE("integer kernel is saturated and annihilated") {
    std::mt19937_64 rng(3);
    for (int n = 0; n < 40; ++n) {
        auto A = random_matrix(rng, 2, 5, 9);
        auto K = integer_kernel(A);
        CHECK(K.rows() == 5 - rank(A));
        CHECK(A * K.transpose() == LatticeMatrix::zero(2, K.rows()));
        for (const auto& d : elementary_divisors(K)) CHECK(d == 1);
    }
    CHECK(integer_kernel(LatticeMatrix{{1, 1, 1}}) == LatticeMatrix{{1, 0, -1}, {0, 1, -1}});
}

TEST_CASE("rational parsing and primitive vectors") {
    CHECK(parse_rat("-6/4") == Rat(-3) / 2);
    CHECK(to_string(parse_rat("10/5")) == "2");
    CHECK_THROWS_AS(parse_rat("1/0"), InputError);
    CHECK_THROWS_AS(parse_int("x1"), InputError);
    CHECK(primitive(RatVector{Rat(2) / 3, Rat(-4) / 3, 0}) == fixtures::P({1, -2, 0}));
    CHECK(content(fixtures::P({6, -9, 12})) == 3);
    CHECK(floor_div(-7, 2) == -4);
}

TEST_CASE("rational solve and inverse") {
    RatMatrix A{{1, 2}, {3, 4}};
    auto x = solve(A, RatVector{5, 6});
    REQUIRE(x);
    CHECK((*x)[0] == -4);
    CHECK((*x)[1] == Rat(9) / 2);
    CHECK(!solve(RatMatrix{{1, 1}, {1, 1}}, RatVector{0, 1}));
    auto inv = inverse(A);
    REQUIRE(inv);
    CHECK((*inv)[0][0] == -2);
    CHECK(nullspace(RatMatrix{{1, 1, 1}}, 3).size() == 2);
}
}

TEST_SUITE("lp") {
TEST_CASE("bounded, infeasible and unbounded programs") {
    auto r = lp_maximize({1, 1}, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {1, 2, 0, 0});
    CHECK(r.status == LpStatus::Optimal);
    CHECK(r.value == 3);
    CHECK(lp_maximize({1}, {{1}, {-1}}, {-1, -1}).status == LpStatus::Infeasible);
    CHECK(lp_maximize({1, 0}, {{-1, 0}}, {0}).status == LpStatus::Unbounded);
    auto q = lp_maximize({Rat(1) / 3, 1}, {{3, 1}, {1, 3}}, {1, 1});
    CHECK(q.value == Rat(1) / 3);
}

TEST_CASE("gordan alternative") {
    using fixtures::P;
    CHECK(strictly_feasible({P({1, 0}), P({0, 1})}, 2));
    CHECK(!strictly_feasible({P({1, 0}), P({-1, 0})}, 2));
    CHECK(!strictly_feasible({P({1, 1}), P({-1, 0}), P({0, -1})}, 2));
    auto [t, w] = max_margin({{1, 0}, {0, 1}}, 2);
    CHECK(t == 1);
    CHECK(w[0] >= 1);
}

TEST_CASE("extreme rays of simple cones") {
    using fixtures::P;
    auto g = extreme_rays({P({1, 0, 0}), P({0, 1, 0}), P({0, 0, 1})}, 3);
    CHECK(g.lineality.empty());
    CHECK(fixtures::as_set(g.rays) == fixtures::as_set(std::vector<Point>{P({1, 0, 0}), P({0, 1, 0}), P({0, 0, 1})}));
    // square cone over (+-1, +-1, 1)
    auto s = extreme_rays({P({1, 0, 1}), P({-1, 0, 1}), P({0, 1, 1}), P({0, -1, 1})}, 3);
    CHECK(s.rays.size() == 4);
    auto h = extreme_rays({P({1, 0})}, 2);
    CHECK(h.lineality.size() == 1);
    CHECK(h.rays.size() == 1);
}
}
