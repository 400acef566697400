#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "tsph/field.hpp"
#include "tsph/rips.hpp"

namespace tsph::persistence {

inline constexpr double kInfiniteDeath = std::numeric_limits<double>::infinity();

struct PersistencePair {
    double birth = 0.0;
    double death = kInfiniteDeath;

    double persistence() const { return death - birth; }
    bool essential() const { return death == kInfiniteDeath; }
    friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

/// Multi-set of (birth, death) pairs for one homology dimension, sorted by
/// (birth, death). Zero-persistence pairs are never stored.
struct PersistenceDiagram {
    int dim = 0;
    std::vector<PersistencePair> pairs;
};

struct ReduceDiagnostics {
    std::uint64_t zero_persistence_pairs = 0;
    std::uint64_t top_dim_unpaired = 0;  // essential classes in dimension max_dim
    std::uint64_t column_additions = 0;
};

struct ReduceResult {
    std::vector<PersistenceDiagram> diagrams;  // one per dimension 0..max_dim-1
    ReduceDiagnostics diagnostics;
};

/// Persistent homology of a filtration over Z/pZ by column reduction with the
/// clearing optimization, processed dimension by dimension from the top.
/// Each k-simplex either creates a k-class or kills a (k-1)-class at its
/// filtration value; unpaired creators become infinite bars. Throws when the
/// filtration is not face-ordered or not monotone.
ReduceResult reduce(const rips::Filtration& f, const FieldSpec& field);

/// Fast path for dimension 0: sorted-edge union-find over the distance
/// matrix. Deaths are the merging edge lengths; each component surviving at
/// max_scale contributes one infinite bar. Agrees with reduce(...) in
/// dimension 0 as a multi-set. Empty `max_scale` means the enclosing radius.
PersistenceDiagram h0_unionfind(const rips::DistanceMatrix& dm,
                                std::optional<double> max_scale = std::nullopt);

}  // namespace tsph::persistence
