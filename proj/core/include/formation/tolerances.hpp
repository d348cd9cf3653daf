#pragma once

namespace formation {

// Absolute tolerance for matrix identities (row sums, hyperplane products).
inline constexpr double kMatrixTol = 1e-12;

// Inequality certificates treat violations smaller than this as ties.
inline constexpr double kCertTol = 1e-9;

// Maximum l-inf reconstruction error accepted from an LP decomposition.
inline constexpr double kLpResidualTol = 1e-9;

// Point-matching tolerance when comparing extreme sets.
inline constexpr double kPointTol = 1e-9;

// Slack allowed on the geometric decay bound when auditing trajectories.
inline constexpr double kBoundSlack = 1e-6;

// Seed of the Dirichlet sampler used by set-inclusion checks ("F0RM" in ASCII).
inline constexpr unsigned long long kSamplingSeed = 0x4630524dULL;

// Dirichlet-weighted convex combinations drawn per set-inclusion check.
inline constexpr int kInclusionSamples = 10000;

}  // namespace formation
