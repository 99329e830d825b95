#pragma once

#include "toricnef/arith.hpp"

#include <vector>

namespace toric {

// <normal, x> >= -offset
struct Facet {
    Point normal;
    Int offset;
    bool operator==(const Facet&) const = default;
};

struct Face {
    std::vector<int> vertices;  // sorted vertex indices
    int dim = -1;
    bool operator==(const Face&) const = default;
};

class LatticePolytope {
public:
    LatticePolytope() = default;
    // Convex hull of lattice points; rejects lower-dimensional input.
    static LatticePolytope hull(const std::vector<Point>& points);

    std::size_t rank() const { return rank_; }
    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<Facet>& facets() const { return facets_; }
    // Every face from the empty face to the polytope itself, sorted by (dim, vertices).
    const std::vector<Face>& faces() const { return faces_; }
    std::vector<Face> faces_of_dim(int d) const;

    bool contains(const Point& p) const;
    bool contains_in_interior(const Point& p) const;
    bool on_boundary(const Point& p) const { return contains(p) && !contains_in_interior(p); }
    // Smallest face containing p (p must lie in the polytope).
    Face carrier(const Point& p) const;
    // Smallest face containing all the given points.
    Face carrier(const std::vector<Point>& pts) const;
    int face_index(const std::vector<int>& vertex_set) const;
    int vertex_index(const Point& p) const;

    std::vector<Point> lattice_points() const;
    // Lattice length of an edge (number of lattice segments).
    Int edge_length(const Face& edge) const;
    Int interior_points_of_edge(const Face& edge) const { return edge_length(edge) - 1; }

    bool operator==(const LatticePolytope& o) const { return vertices_ == o.vertices_; }

private:
    std::size_t rank_ = 0;
    std::vector<Point> vertices_;
    std::vector<Facet> facets_;
    std::vector<std::vector<int>> facet_vertices_;
    std::vector<Face> faces_;
};

int affine_dimension(const std::vector<Point>& pts);

LatticePolytope polar_dual(const LatticePolytope& P);
bool is_reflexive(const LatticePolytope& P);

struct ClassifiedPoint {
    Point coords;
    Face carrier;
};

struct ClassifiedPoints {
    std::vector<ClassifiedPoint> points;
    std::vector<std::size_t> count_by_dim;  // index = carrier dimension 0..rank
};

ClassifiedPoints classify_lattice_points(const LatticePolytope& P);

// Face of `dual` pairing to -1 with every vertex of F in P.
Face dual_face(const LatticePolytope& P, const LatticePolytope& dual, const Face& F);
// Face of `dual` pairing to -1 with every given point (points on the boundary of P).
Face dual_face_of_points(const LatticePolytope& dual, const std::vector<Point>& pts);

}  // namespace toric
