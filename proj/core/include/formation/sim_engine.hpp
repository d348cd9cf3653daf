#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "formation/config.hpp"
#include "formation/dynamics.hpp"

namespace formation {

struct TopologySchedule {
    std::vector<SignedDigraph> modes;
    ScheduleSpec spec;

    /// 0-based index into modes for step k.
    int mode_index(long k) const;
};

/// Solution of the sampling-window feasibility problem: eta = 1 - alpha + 2 beta,
/// h in [delta / (1 - eta), 1/(2n)], rate -ln(1 - delta) / h_max.
struct ParameterCertificate {
    int n = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double eta = 0.0;
    double delta = 0.0;
    double h_min = 0.0;
    double h_max = 0.0;
    double rate = 0.0;
    bool feasible = false;
    double max_feasible_delta = 0.0;

    nlohmann::json to_json() const;
};

ParameterCertificate solve_parameters(int n, const CouplingBounds& b, double delta);

/// (1 - eta) / (2n), the largest delta for which the window is nonempty.
double max_feasible_delta(int n, const CouplingBounds& b);

/// 0.9 * max_feasible_delta: a safely interior default.
double default_delta(int n, const CouplingBounds& b);

/// The shipped example's rotation-angle functions; agent indices are 1-based
/// here to match the closed form: pi t / (2 i (1+|t|)) for agents 1-2 and
/// -i pi t / (8 (1+|t|)) for agents 3-4. Throws IndexOutOfRange otherwise.
double paper_angle_profile(int agent, double t);

RotationProfile profile_from_spec(const AngleProfileSpec& spec, int n);

struct TrajectoryStep {
    long k = 0;
    double t = 0.0;
    double h = 0.0;
    int mode = 0;  // 1-based, as in the config
    Eigen::VectorXd positions;  // stacked (x, y) per agent
    double err_inf = 0.0;       // || E^T eps ||_inf
    double bound = 0.0;         // (1 - delta)^k ||E||_1 ||eps_0||_inf
    std::optional<Lemma6Certificate> certificate;
};

struct TrajectoryLog {
    int n = 0;
    std::vector<Eigen::Vector2d> desired;
    double eta = 0.0;
    double delta = 0.0;
    double e_norm1 = 0.0;    // ||E_N||_1
    double eps0_inf = 0.0;   // ||eps_0||_inf
    double err0 = 0.0;       // initial pairwise error norm
    double threshold = 0.0;  // relative, 0 when disabled
    double h_max = 0.0;
    bool converged = false;
    std::vector<TrajectoryStep> steps;
};

/// Run the scenario: validates the config (ConfigInvalid on failure), steps
/// the agent dynamics for the horizon or until the relative error threshold,
/// and logs every step. With record_certificates set, a per-step contraction
/// certificate is attached and CertificateFailure aborts the run at the
/// first failing step. With verify_lemmas set, the lemma suite runs on every
/// mode before stepping (HypothesisViolation / LemmaReport failures abort).
TrajectoryLog run(const ScenarioConfig& config);

/// One row per step: k, t, h, mode, positions, err_inf, bound, certificate
/// columns (nan when not recorded). 17 significant digits throughout.
void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out);

struct ConvergenceReport {
    long steps = 0;
    std::vector<double> ratios;  // err_{k+1} / err_k, zero denominators skipped
    double max_ratio = 0.0;
    long ratios_above_one_minus_delta = 0;
    long ratios_above_step_bound = 0;  // vs 1 - (1 - eta) h_k
    bool rates_defined = false;
    double empirical_rate = 0.0;  // least-squares slope of -log err vs t
    double theoretical_rate = 0.0;
    double final_shape_error = 0.0;  // max pairwise displacement error

    nlohmann::json to_json() const;
};

ConvergenceReport convergence_report(const TrajectoryLog& log);

}  // namespace formation
