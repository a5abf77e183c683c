#ifndef ASPECTRA_OVERLAP_HPP
#define ASPECTRA_OVERLAP_HPP

#include <cstddef>
#include <vector>

#include "aspectra/graph.hpp"

namespace aspectra {

/// A jointly-surjective gluing of two graphs: every element of `graph` lies in
/// the image of e1 or e2, and both embeddings are injective.
struct Overlap {
    Graph graph;
    Morphism e1; // from g1
    Morphism e2; // from g2
};

/// Enumerates every gluing of g1 and g2 obtained by identifying a partial
/// injective matching of kind/attr-compatible vertices; two edges are
/// identified iff their endpoints are identified and their labels are equal.
/// Deterministic order; throws OverlapCapExceeded beyond `cap` results.
std::vector<Overlap> enumerate_overlaps(const Graph& g1, const Graph& g2,
                                        std::size_t cap);

/// Canonical key for an overlap including the embedding fingerprints, so two
/// overlaps compare equal iff an isomorphism commuting with both embeddings
/// exists.
std::string overlap_canonical_key(const Overlap& ov);

} // namespace aspectra

#endif
