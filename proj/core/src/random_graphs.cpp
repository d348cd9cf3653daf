#include "formation/random_graphs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace formation {

namespace {

// In-neighbor sets, one per vertex. Positive edges only.
using Structure = std::vector<std::vector<int>>;

Structure random_structure(int n, int max_in, std::mt19937_64& rng) {
    Structure s(n);
    std::uniform_int_distribution<int> count_dist(2, std::min(n - 1, max_in));
    std::vector<int> others(n - 1);
    for (int i = 0; i < n; ++i) {
        int k = 0;
        for (int v = 0; v < n; ++v)
            if (v != i) others[k++] = v;
        std::shuffle(others.begin(), others.end(), rng);
        int m = count_dist(rng);
        s[i].assign(others.begin(), others.begin() + m);
    }
    return s;
}

// Every vertex senses two common hubs; the hubs sense each other plus one
// extra vertex. Always neighbor-shared, used to keep rejection cheap when
// the uniform draw is unlikely to succeed.
Structure hub_structure(int n, std::mt19937_64& rng) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    int a = perm[0], b = perm[1], c = perm[2];
    Structure s(n);
    for (int i = 0; i < n; ++i) {
        if (i == a) s[i] = {b, c};
        else if (i == b) s[i] = {a, c};
        else s[i] = {a, b};
    }
    return s;
}

bool structure_neighbor_shared(const Structure& s) {
    const int n = static_cast<int>(s.size());
    std::vector<std::vector<char>> senses(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j : s[i]) senses[i][j] = 1;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            if (p == q) continue;
            bool ok = false;
            for (int i = 0; i < n && !ok; ++i)
                ok = i != p && i != q && senses[p][i] && senses[q][i];
            if (!ok) return false;
        }
    return true;
}

}  // namespace

bool admissible_graphs_exist(int n, const CouplingBounds& b) {
    return n >= 3 && 2.0 * b.alpha <= 1.0 - b.alpha;
}

SignedDigraph sample_admissible_graph(int n, const CouplingBounds& b, std::mt19937_64& rng,
                                      int max_attempts) {
    if (!admissible_graphs_exist(n, b)) {
        std::ostringstream msg;
        msg << "no neighbor-shared graph satisfies the coupling bounds for n=" << n
            << ", alpha=" << b.alpha << ", beta=" << b.beta
            << ": neighbor-sharedness needs two positive in-edges per vertex, so the "
               "positive in-weight sum is at least 2*alpha = "
            << 2.0 * b.alpha << " > 1 - alpha = " << 1.0 - b.alpha;
        throw InfeasibleConstraintSet(msg.str());
    }

    const int max_in = static_cast<int>((1.0 - b.alpha) / b.alpha);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Structure s = (attempt % 2 == 0) ? random_structure(n, max_in, rng) : hub_structure(n, rng);
        if (!structure_neighbor_shared(s)) continue;

        std::vector<GraphEdge> edges;
        std::vector<std::vector<char>> used(n, std::vector<char>(n, 0));
        for (int i = 0; i < n; ++i) {
            const int m = static_cast<int>(s[i].size());
            const double hi = (1.0 - b.alpha) / m;
            for (int j : s[i]) {
                double w = b.alpha + (hi - b.alpha) * unit(rng);
                edges.push_back({j, i, w});
                used[j][i] = 1;
            }
            if (b.beta > 0.0 && unit(rng) < 0.5) {
                std::vector<int> candidates;
                for (int v = 0; v < n; ++v)
                    if (v != i && !used[v][i]) candidates.push_back(v);
                if (!candidates.empty()) {
                    int v = candidates[static_cast<size_t>(unit(rng) * candidates.size()) %
                                       candidates.size()];
                    double w = -(0.1 * b.beta + 0.9 * b.beta * unit(rng));
                    edges.push_back({v, i, w});
                }
            }
        }
        SignedDigraph g(n, std::move(edges));
        if (validate_coupling(g, b).passed && is_neighbor_shared(g)) return g;
    }
    throw std::runtime_error("sample_admissible_graph: attempt cap exhausted");
}

}  // namespace formation
