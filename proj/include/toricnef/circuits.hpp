#pragma once

#include "toricnef/arith.hpp"
#include "toricnef/classgroup.hpp"
#include "toricnef/fan.hpp"

#include <optional>
#include <string>
#include <vector>

namespace toric {

struct Circuit {
    std::vector<int> rays;  // sorted
    std::vector<Int> coeffs;

    std::vector<int> plus() const;
    std::vector<int> minus() const;
    Circuit reversed() const;
    Int coeff(int ray) const;
    bool operator==(const Circuit&) const = default;
};

// Canonical orientation: |S-| <= |S+|, ties put the smallest ray into S-.
Circuit canonical_orientation(const Circuit& c);
// The primitive relation on a minimally dependent subset, or nullopt.
std::optional<Circuit> circuit_of(const std::vector<Point>& rays, const std::vector<int>& subset);
std::vector<Circuit> find_circuits(const std::vector<Point>& rays, std::size_t max_size,
                                   const std::vector<int>* restrict_to = nullptr);
std::vector<Circuit> find_circuits(const Fan& fan, std::size_t max_size);

struct Support {
    bool supported = false;
    std::vector<Cone> plus_cones;      // S \ {n} for n in S+
    std::vector<Cone> extension_sets;  // common link of the plus cones
    std::string reason;
};

Support is_supported(const Circuit& S, const Fan& fan);

enum class FlipKind { DivisorialContraction, GeneralizedFlop };
std::string to_string(FlipKind k);

struct FlipResult {
    Fan fan;
    std::vector<Cone> removed;   // old ray indices
    std::vector<Cone> inserted;  // old ray indices
    FlipKind kind = FlipKind::GeneralizedFlop;
    int removed_ray = -1;  // old index, divisorial only
    std::vector<Cone> extension_sets;
};

FlipResult flip(const Fan& fan, const Circuit& S);

// Linear map W' -> W dual to forgetting the contracted ray; columns are images of
// the coordinate vectors of W'.
struct Pullback {
    RatMatrix matrix;  // dim W rows, dim W' columns
    RatVector apply(const RatVector& wp) const;
};

Pullback pullback_classes(const Fan& source, const FlipResult& result, const Circuit& S, const ClassSpace& W,
                          const ClassSpace& Wp);

}  // namespace toric
