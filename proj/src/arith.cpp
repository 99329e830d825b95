#include "toricnef/arith.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace toric {

std::string to_string(const Int& x) { return x.str(); }

std::string to_string(const Rat& x) {
    const Int num = boost::multiprecision::numerator(x);
    const Int den = boost::multiprecision::denominator(x);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Int parse_int(const std::string& s) {
    if (s.empty()) throw InputError("empty integer literal");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw InputError("malformed integer literal '" + s + "'");
    for (std::size_t k = i; k < s.size(); ++k)
        if (s[k] < '0' || s[k] > '9') throw InputError("malformed integer literal '" + s + "'");
    return Int(s[0] == '+' ? s.substr(1) : s);
}

Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(parse_int(s));
    Int num = parse_int(s.substr(0, slash));
    Int den = parse_int(s.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + s + "'");
    return Rat(num, den);
}

Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
    return q;
}

Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
Int lcm(const Int& a, const Int& b) {
    if (a == 0 || b == 0) return Int(0);
    return abs(a / gcd(a, b) * b);
}
Int abs(const Int& a) { return a < 0 ? Int(-a) : a; }

LatticeMatrix::LatticeMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

LatticeMatrix::LatticeMatrix(const std::vector<Point>& rows, std::size_t cols_if_empty)
    : rows_(rows.size()), cols_(rows.empty() ? cols_if_empty : rows[0].size()) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw InputError("ragged matrix rows");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

LatticeMatrix::LatticeMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    std::vector<Point> pts;
    for (const auto& r : rows) {
        Point p;
        for (long v : r) p.emplace_back(v);
        pts.push_back(std::move(p));
    }
    *this = LatticeMatrix(pts);
}

LatticeMatrix LatticeMatrix::identity(std::size_t n) {
    LatticeMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
    return m;
}

LatticeMatrix LatticeMatrix::zero(std::size_t rows, std::size_t cols) { return LatticeMatrix(rows, cols); }

Point LatticeMatrix::row(std::size_t i) const {
    return Point(data_.begin() + static_cast<long>(i * cols_),
                 data_.begin() + static_cast<long>((i + 1) * cols_));
}

std::vector<Point> LatticeMatrix::to_rows() const {
    std::vector<Point> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
}

LatticeMatrix LatticeMatrix::transpose() const {
    LatticeMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t.data_[j * rows_ + i] = at(i, j);
    return t;
}

LatticeMatrix LatticeMatrix::operator*(const LatticeMatrix& o) const {
    if (cols_ != o.rows_) throw Error("matrix dimension mismatch");
    LatticeMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& a = at(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) r.data_[i * o.cols_ + j] += a * o.at(k, j);
        }
    return r;
}

std::string to_string(const LatticeMatrix& m) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i) os << ",";
        os << to_string(m.row(i));
    }
    os << "]";
    return os.str();
}

std::string to_string(const Point& p) {
    std::string s = "[";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ",";
        s += p[i].str();
    }
    return s + "]";
}

namespace {

using Grid = std::vector<std::vector<Int>>;

Grid to_grid(const LatticeMatrix& A) {
    Grid g(A.rows(), std::vector<Int>(A.cols()));
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) g[i][j] = A.at(i, j);
    return g;
}

LatticeMatrix from_grid(const Grid& g, std::size_t cols) { return LatticeMatrix(g, cols); }

Grid identity_grid(std::size_t n) {
    Grid g(n, std::vector<Int>(n));
    for (std::size_t i = 0; i < n; ++i) g[i][i] = 1;
    return g;
}

void row_axpy(std::vector<Int>& dst, const std::vector<Int>& src, const Int& q) {
    for (std::size_t j = 0; j < dst.size(); ++j)
        if (src[j] != 0) dst[j] -= q * src[j];
}

}  // namespace

HnfResult hnf(const LatticeMatrix& A) {
    const std::size_t m = A.rows(), n = A.cols();
    Grid H = to_grid(A);
    Grid U = identity_grid(m);
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < m; ++col) {
        bool pivot = false;
        for (;;) {
            std::size_t best = m;
            for (std::size_t i = r; i < m; ++i) {
                if (H[i][col] == 0) continue;
                if (best == m || abs(H[i][col]) < abs(H[best][col])) best = i;
            }
            if (best == m) break;
            pivot = true;
            if (best != r) {
                std::swap(H[best], H[r]);
                std::swap(U[best], U[r]);
            }
            bool clean = true;
            for (std::size_t i = r + 1; i < m; ++i) {
                if (H[i][col] == 0) continue;
                Int q = floor_div(H[i][col], H[r][col]);
                row_axpy(H[i], H[r], q);
                row_axpy(U[i], U[r], q);
                if (H[i][col] != 0) clean = false;
            }
            if (clean) break;
        }
        if (!pivot) continue;
        if (H[r][col] < 0) {
            for (auto& x : H[r]) x = -x;
            for (auto& x : U[r]) x = -x;
        }
        for (std::size_t i = 0; i < r; ++i) {
            Int q = floor_div(H[i][col], H[r][col]);
            if (q == 0) continue;
            row_axpy(H[i], H[r], q);
            row_axpy(U[i], U[r], q);
        }
        ++r;
    }
    return {from_grid(H, n), from_grid(U, m)};
}

SnfResult snf(const LatticeMatrix& A) {
    const std::size_t m = A.rows(), n = A.cols();
    Grid D = to_grid(A);
    Grid U = identity_grid(m);
    Grid V = identity_grid(n);  // column operations recorded on V's columns
    auto swap_cols = [&](Grid& g, std::size_t a, std::size_t b) {
        for (auto& row : g) std::swap(row[a], row[b]);
    };
    auto col_axpy = [&](Grid& g, std::size_t dst, std::size_t src, const Int& q) {
        for (auto& row : g)
            if (row[src] != 0) row[dst] -= q * row[src];
    };
    const std::size_t k = std::min(m, n);
    for (std::size_t t = 0; t < k; ++t) {
        for (;;) {
            std::size_t bi = m, bj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (D[i][j] != 0 && (bi == m || abs(D[i][j]) < abs(D[bi][bj]))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == m) break;
            if (bi != t) {
                std::swap(D[bi], D[t]);
                std::swap(U[bi], U[t]);
            }
            if (bj != t) {
                swap_cols(D, bj, t);
                swap_cols(V, bj, t);
            }
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (D[i][t] == 0) continue;
                Int q = floor_div(D[i][t], D[t][t]);
                row_axpy(D[i], D[t], q);
                row_axpy(U[i], U[t], q);
                if (D[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (D[t][j] == 0) continue;
                Int q = floor_div(D[t][j], D[t][t]);
                col_axpy(D, j, t, q);
                col_axpy(V, j, t, q);
                if (D[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            std::size_t bad = m;
            for (std::size_t i = t + 1; i < m && bad == m; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (D[i][j] % D[t][t] != 0) {
                        bad = i;
                        break;
                    }
            if (bad == m) break;
            for (std::size_t j = 0; j < n; ++j) D[t][j] += D[bad][j];
            for (std::size_t j = 0; j < m; ++j) U[t][j] += U[bad][j];
        }
        if (D[t][t] < 0) {
            for (auto& x : D[t]) x = -x;
            for (auto& x : U[t]) x = -x;
        }
    }
    return {from_grid(D, n), from_grid(U, m), from_grid(V, n)};
}

LatticeMatrix integer_kernel(const LatticeMatrix& A) {
    const std::size_t n = A.cols();
    if (A.rows() == 0) return LatticeMatrix::identity(n);
    auto [H, U] = hnf(A.transpose());
    std::vector<Point> basis;
    for (std::size_t i = 0; i < H.rows(); ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < H.cols(); ++j)
            if (H.at(i, j) != 0) {
                zero = false;
                break;
            }
        if (zero) basis.push_back(U.row(i));
    }
    if (basis.empty()) return LatticeMatrix(0, n);
    auto canon = hnf(LatticeMatrix(basis)).H;
    std::vector<Point> rows;
    for (std::size_t i = 0; i < canon.rows(); ++i) {
        Point r = canon.row(i);
        if (std::any_of(r.begin(), r.end(), [](const Int& x) { return x != 0; })) rows.push_back(r);
    }
    return LatticeMatrix(rows, n);
}

std::vector<Int> elementary_divisors(const LatticeMatrix& A) {
    auto D = snf(A).D;
    std::vector<Int> out;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
        if (D.at(i, i) != 0) out.push_back(D.at(i, i));
    return out;
}

Int determinant(const LatticeMatrix& A) {
    if (A.rows() != A.cols()) throw Error("determinant of non-square matrix");
    const std::size_t n = A.rows();
    if (n == 0) return Int(1);
    Grid M = to_grid(A);
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (M[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && M[p][k] == 0) ++p;
            if (p == n) return Int(0);
            std::swap(M[p], M[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
        prev = M[k][k];
    }
    return sign * M[n - 1][n - 1];
}

std::size_t rank(const LatticeMatrix& A) {
    RatMatrix m;
    for (std::size_t i = 0; i < A.rows(); ++i) m.push_back(to_rat(A.row(i)));
    return rank(std::move(m));
}

Rat dot(const RatVector& a, const RatVector& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

Int dot(const Point& a, const Point& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

RatVector to_rat(const Point& p) {
    RatVector v;
    v.reserve(p.size());
    for (const auto& x : p) v.emplace_back(x);
    return v;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& m, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        Rat inv = 1 / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (std::size_t j = c; j < cols; ++j)
                if (m[r][j] != 0) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

std::size_t rank(RatMatrix rows) {
    if (rows.empty()) return 0;
    return rref(rows, rows[0].size()).size();
}

Rat determinant(RatMatrix m) {
    const std::size_t n = m.size();
    Rat det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return Rat(0);
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            Rat f = m[i][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

RatMatrix nullspace(const RatMatrix& rows, std::size_t cols) {
    RatMatrix m = rows;
    auto pivots = rref(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    RatMatrix basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        RatVector v(cols, Rat(0));
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<RatVector> solve(const RatMatrix& A, const RatVector& b) {
    if (A.empty()) return RatVector{};
    const std::size_t cols = A[0].size();
    RatMatrix m = A;
    for (std::size_t i = 0; i < m.size(); ++i) m[i].push_back(b[i]);
    auto pivots = rref(m, cols + 1);
    RatVector x(cols, Rat(0));
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        if (pivots[i] == cols) return std::nullopt;
        x[pivots[i]] = m[i][cols];
    }
    return x;
}

std::optional<RatMatrix> inverse(const RatMatrix& A) {
    const std::size_t n = A.size();
    RatMatrix m = A;
    for (std::size_t i = 0; i < n; ++i) {
        m[i].resize(2 * n, Rat(0));
        m[i][n + i] = 1;
    }
    auto pivots = rref(m, 2 * n);
    if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
    RatMatrix inv(n);
    for (std::size_t i = 0; i < n; ++i) inv[i].assign(m[i].begin() + static_cast<long>(n), m[i].end());
    return inv;
}

Int content(const Point& v) {
    Int g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g;
}

Point primitive(const Point& v) {
    Int g = content(v);
    if (g == 0) return v;
    Point out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x / g);
    return out;
}

Point primitive(const RatVector& v) {
    Int l = 1;
    for (const auto& x : v) l = lcm(l, boost::multiprecision::denominator(x));
    Point p;
    p.reserve(v.size());
    for (const auto& x : v) p.push_back(boost::multiprecision::numerator(x) * (l / boost::multiprecision::denominator(x)));
    return primitive(p);
}

bool is_primitive(const Point& v) { return content(v) == 1; }

}  // namespace toric
