#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace toric {

using Int = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                          boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                          boost::multiprecision::et_off>;

using Point = std::vector<Int>;
using RatVector = std::vector<Rat>;
using RatMatrix = std::vector<RatVector>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or unusable input (CLI exit code 3).
struct InputError : Error {
    using Error::Error;
};

// A search ran past its configured budget (CLI exit code 4).
struct BudgetExhausted : Error {
    using Error::Error;
};

std::string to_string(const Int& x);
std::string to_string(const Rat& x);
Int parse_int(const std::string& s);
// Accepts "p", "-p" or "p/q".
Rat parse_rat(const std::string& s);

Int floor_div(const Int& a, const Int& b);
Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);
Int abs(const Int& a);

class LatticeMatrix {
public:
    LatticeMatrix() = default;
    LatticeMatrix(std::size_t rows, std::size_t cols);
    explicit LatticeMatrix(const std::vector<Point>& rows, std::size_t cols_if_empty = 0);
    LatticeMatrix(std::initializer_list<std::initializer_list<long>> rows);

    static LatticeMatrix identity(std::size_t n);
    static LatticeMatrix zero(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Int& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    Point row(std::size_t i) const;
    std::vector<Point> to_rows() const;

    LatticeMatrix transpose() const;
    LatticeMatrix operator*(const LatticeMatrix& other) const;
    bool operator==(const LatticeMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> data_;
};

std::string to_string(const LatticeMatrix& m);

struct HnfResult {
    LatticeMatrix H;
    LatticeMatrix U;
};

struct SnfResult {
    LatticeMatrix D;
    LatticeMatrix U;
    LatticeMatrix V;
};

// Row Hermite normal form: U * A = H.
HnfResult hnf(const LatticeMatrix& A);
// U * A * V = D with d1 | d2 | ...
SnfResult snf(const LatticeMatrix& A);
// Rows form the HNF basis of {x : A x = 0}.
LatticeMatrix integer_kernel(const LatticeMatrix& A);
std::vector<Int> elementary_divisors(const LatticeMatrix& A);

Int determinant(const LatticeMatrix& A);
std::size_t rank(const LatticeMatrix& A);

// Rational linear algebra.
Rat dot(const RatVector& a, const RatVector& b);
Int dot(const Point& a, const Point& b);
RatVector to_rat(const Point& p);
std::size_t rank(RatMatrix rows);
Rat determinant(RatMatrix m);
// Basis of {x : rows * x = 0}.
RatMatrix nullspace(const RatMatrix& rows, std::size_t cols);
// Solves A x = b (A given by rows); nullopt if inconsistent. Free variables set to 0.
std::optional<RatVector> solve(const RatMatrix& A, const RatVector& b);
std::optional<RatMatrix> inverse(const RatMatrix& A);

// Scales a rational vector to a primitive integer vector of the same direction.
Point primitive(const RatVector& v);
Point primitive(const Point& v);
bool is_primitive(const Point& v);
Int content(const Point& v);

std::string to_string(const Point& p);

}  // namespace toric
