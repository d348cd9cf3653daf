#pragma once

#include <random>

#include "formation/signed_graph.hpp"

namespace formation {

/// True iff neighbor-shared graphs satisfying the coupling bounds exist.
/// Neighbor-sharedness forces at least two positive in-edges per vertex
/// (the single in-neighbor would have to witness its own pair), so the
/// positive in-weight sum is at least 2*alpha and the constraint set is
/// empty whenever 2*alpha > 1 - alpha.
bool admissible_graphs_exist(int n, const CouplingBounds& b);

/// Draw a graph that passes validate_coupling and is_neighbor_shared.
/// Rejection sampling over random in-neighbor sets with a hub-biased
/// fallback; deterministic for a given rng state. Throws
/// InfeasibleConstraintSet when admissible_graphs_exist is false, and
/// std::runtime_error if the attempt cap is exhausted.
SignedDigraph sample_admissible_graph(int n, const CouplingBounds& b, std::mt19937_64& rng,
                                      int max_attempts = 200000);

}  // namespace formation
