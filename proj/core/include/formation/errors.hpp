#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace formation {

/// A computed stochastic matrix fell outside the S_beta set required by the
/// coupling bounds.
struct CouplingViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Inputs to a lemma checker or certificate do not satisfy its stated
/// hypotheses (neighbor-sharedness, coupling validity, sampling window).
struct HypothesisViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Brute-force vertex enumeration was requested above its dimension guard.
struct DimensionTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The decomposition target is not in the cone of the generators.
struct DecompositionInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// No graph satisfies the requested coupling bounds together with
/// neighbor-sharedness (empty constraint set).
struct InfeasibleConstraintSet : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IndexOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Scenario configuration failed validation; carries one clause per problem.
class ConfigInvalid : public std::runtime_error {
  public:
    explicit ConfigInvalid(std::vector<std::string> clauses)
        : std::runtime_error(join(clauses)), clauses_(std::move(clauses)) {}

    const std::vector<std::string>& clauses() const noexcept { return clauses_; }

  private:
    static std::string join(const std::vector<std::string>& clauses) {
        std::string msg = "invalid configuration:";
        for (const auto& c : clauses) msg += "\n  - " + c;
        return msg;
    }
    std::vector<std::string> clauses_;
};

/// A per-step contraction certificate failed during a simulation run.
class CertificateFailure : public std::runtime_error {
  public:
    CertificateFailure(long step, const std::string& what)
        : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}

    long step() const noexcept { return step_; }

  private:
    long step_;
};

}  // namespace formation
