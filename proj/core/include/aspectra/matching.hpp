#ifndef ASPECTRA_MATCHING_HPP
#define ASPECTRA_MATCHING_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "aspectra/graph.hpp"

namespace aspectra {

struct MatchOptions {
    const Morphism* seed = nullptr; // pre-assigned partial embedding to extend
    std::size_t limit = 0;          // 0 = unlimited
};

/// All injective, kind/attr/label-preserving embeddings of pattern into host,
/// ordered by the sequence of host ids assigned in pattern-id order.
std::vector<Morphism> find_monomorphisms(const Graph& pattern, const Graph& host,
                                         const MatchOptions& opts = {});

/// Bijective structure-preserving morphism between g and h, if any.
std::optional<Morphism> is_isomorphic(const Graph& g, const Graph& h);

/// True when the partial embedding (covering a subgraph of `pattern` by ids)
/// extends to a full monomorphism of `pattern` into host. Used for NACs.
bool extends_to(const Graph& pattern, const Graph& host, const Morphism& partial);

} // namespace aspectra

#endif
