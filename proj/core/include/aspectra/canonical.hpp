#ifndef ASPECTRA_CANONICAL_HPP
#define ASPECTRA_CANONICAL_HPP

#include <string>

#include "aspectra/graph.hpp"

namespace aspectra {

/// Canonical byte string: equal for two graphs iff they are isomorphic.
/// Computed by color refinement over (kind, attrs, incident labels) followed
/// by a backtracking search for the lexicographically least adjacency
/// serialization among class-respecting vertex orderings.
std::string canonical_form(const Graph& g);

/// Isomorphic copy with ids renamed to v0..vn / e0..em along the canonical
/// vertex ordering, so isomorphic graphs relabel to byte-identical graphs.
Graph canonical_relabel(const Graph& g);

} // namespace aspectra

#endif
