#include "formation/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include "formation/linalg.hpp"
#include "formation/polytope.hpp"

namespace formation {

int TopologySchedule::mode_index(long k) const {
    if (spec.pattern.empty()) throw std::logic_error("empty schedule pattern");
    long slot = (k / spec.dwell) % static_cast<long>(spec.pattern.size());
    return spec.pattern[static_cast<size_t>(slot)] - 1;
}

ParameterCertificate solve_parameters(int n, const CouplingBounds& b, double delta) {
    if (n < 2) throw std::invalid_argument("solve_parameters: n must be at least 2");
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::invalid_argument("solve_parameters: delta must lie in (0, 1)");
    ParameterCertificate cert;
    cert.n = n;
    cert.alpha = b.alpha;
    cert.beta = b.beta;
    cert.eta = 1.0 - (b.alpha - 2.0 * b.beta);
    cert.delta = delta;
    cert.h_min = delta / (1.0 - cert.eta);
    cert.h_max = 1.0 / (2.0 * n);
    cert.rate = -std::log1p(-delta) / cert.h_max;
    cert.max_feasible_delta = max_feasible_delta(n, b);
    cert.feasible = delta <= cert.max_feasible_delta;
    return cert;
}

double max_feasible_delta(int n, const CouplingBounds& b) {
    if (n < 2) throw std::invalid_argument("max_feasible_delta: n must be at least 2");
    double eta = 1.0 - (b.alpha - 2.0 * b.beta);
    return (1.0 - eta) / (2.0 * n);
}

double default_delta(int n, const CouplingBounds& b) {
    return 0.9 * max_feasible_delta(n, b);
}

nlohmann::json ParameterCertificate::to_json() const {
    nlohmann::json j = {
        {"n", n},
        {"alpha", alpha},
        {"beta", beta},
        {"eta", eta},
        {"delta", delta},
        {"h_min", h_min},
        {"h_max", h_max},
        {"rate", rate},
        {"rate_formula", "-ln(1-delta)/h_max"},
        {"feasible", feasible},
        {"max_feasible_delta", max_feasible_delta},
    };
    if (!feasible) {
        std::ostringstream note;
        note << "requested delta " << delta << " exceeds the largest feasible value "
             << max_feasible_delta << " = (1-eta)/(2n) with eta = " << eta << ", n = " << n
             << "; the sampling window [delta/(1-eta), 1/(2n)] is empty";
        j["note"] = note.str();
    }
    return j;
}

double paper_angle_profile(int agent, double t) {
    const double pi = 3.14159265358979323846;
    if (agent == 1 || agent == 2) return pi * t / (2.0 * agent * (1.0 + std::abs(t)));
    if (agent == 3 || agent == 4) return -agent * pi * t / (8.0 * (1.0 + std::abs(t)));
    throw IndexOutOfRange("paper_angle_profile covers agents 1..4");
}

RotationProfile profile_from_spec(const AngleProfileSpec& spec, int n) {
    switch (spec.kind) {
        case AngleProfileSpec::Kind::paper_example:
            return RotationProfile(
                n, [](int agent, double t) { return paper_angle_profile(agent + 1, t); });
        case AngleProfileSpec::Kind::constant: {
            if (static_cast<int>(spec.values.size()) != n)
                throw std::invalid_argument("constant angle profile must list n angles");
            auto values = spec.values;
            return RotationProfile(
                n, [values](int agent, double) { return values[static_cast<size_t>(agent)]; });
        }
        case AngleProfileSpec::Kind::piecewise: {
            if (static_cast<int>(spec.tables.size()) != n)
                throw std::invalid_argument("piecewise angle profile must list n agent tables");
            auto tables = spec.tables;
            return RotationProfile(n, [tables](int agent, double t) {
                const auto& table = tables[static_cast<size_t>(agent)];
                double value = table.front().second;
                for (const auto& [time, angle] : table) {
                    if (time > t) break;
                    value = angle;
                }
                return value;
            });
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

Eigen::VectorXd stacked_error(const AgentState& state, const FormationSpec& spec) {
    Eigen::VectorXd eps(2 * state.agents());
    for (int i = 0; i < state.agents(); ++i)
        eps.segment<2>(2 * i) = state.positions[static_cast<size_t>(i)] - spec.desired[static_cast<size_t>(i)];
    return eps;
}

Eigen::VectorXd stacked_positions(const AgentState& state) {
    Eigen::VectorXd p(2 * state.agents());
    for (int i = 0; i < state.agents(); ++i)
        p.segment<2>(2 * i) = state.positions[static_cast<size_t>(i)];
    return p;
}

void verify_lemmas_pre_run(const ScenarioConfig& config, const CouplingBounds& bounds,
                           const ParameterCertificate& params, const RotationProfile& profile) {
    Eigen::VectorXd start_angles = profile.angles(0.0);
    double h = config.h_policy.kind == HPolicySpec::Kind::constant ? config.h_policy.value
                                                                   : params.h_max;
    if (!check_prop3(h, config.n))
        throw CertificateFailure(-1, "prop3 rejected h for the configured topology size");
    for (size_t m = 0; m < config.modes.size(); ++m) {
        GeneralStochasticMatrix s = stochastic_from_graph(config.modes[m], bounds);
        for (const LemmaReport& report :
             {check_lemma3(s, bounds), check_lemma4(s, bounds),
              check_prop4(start_angles), check_lemma5(h, s, start_angles, bounds)}) {
            if (!report.passed)
                throw CertificateFailure(
                    -1, report.lemma + " failed pre-run verification on mode " +
                            std::to_string(m + 1) + ": " + report.note);
        }
        Lemma6Certificate cert =
            lemma6_certificate(config.modes[m], start_angles, h, bounds);
        if (!cert.pass)
            throw CertificateFailure(-1, "lemma6 certificate failed pre-run on mode " +
                                             std::to_string(m + 1));
    }
}

}  // namespace

TrajectoryLog run(const ScenarioConfig& config) {
    std::vector<std::string> clauses = validate_config(config);
    if (!clauses.empty()) throw ConfigInvalid(std::move(clauses));

    CouplingBounds bounds(config.alpha, config.beta);
    ParameterCertificate params = solve_parameters(
        config.n, bounds, config.delta.value_or(default_delta(config.n, bounds)));
    TopologySchedule schedule{config.modes, config.schedule};
    RotationProfile profile = profile_from_spec(config.angles, config.n);
    FormationSpec spec{config.desired};

    if (config.verify_lemmas) verify_lemmas_pre_run(config, bounds, params, profile);

    Eigen::MatrixXd e_mat = pairwise_difference_matrix(config.n);
    TrajectoryLog log;
    log.n = config.n;
    log.desired = config.desired;
    log.eta = params.eta;
    log.delta = params.delta;
    log.h_max = params.h_max;
    log.threshold = config.threshold;
    log.e_norm1 = e_mat.cwiseAbs().colwise().sum().maxCoeff();

    AgentState state{config.initial, 0.0, 0};
    Eigen::VectorXd eps = stacked_error(state, spec);
    log.eps0_inf = eps.lpNorm<Eigen::Infinity>();
    log.err0 = (e_mat.transpose() * eps).lpNorm<Eigen::Infinity>();

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> h_dist(params.h_min, params.h_max);
    auto h_for_step = [&](long) {
        return config.h_policy.kind == HPolicySpec::Kind::constant ? config.h_policy.value
                                                                   : h_dist(rng);
    };

    double decay = 1.0;  // (1 - delta)^k, updated multiplicatively
    for (long k = 0;; ++k) {
        int mode = schedule.mode_index(k);
        double h = h_for_step(k);
        double err = (e_mat.transpose() * eps).lpNorm<Eigen::Infinity>();

        TrajectoryStep row;
        row.k = k;
        row.t = state.time;
        row.h = h;
        row.mode = mode + 1;
        row.positions = stacked_positions(state);
        row.err_inf = err;
        row.bound = decay * log.e_norm1 * log.eps0_inf;
        if (config.record_certificates) {
            Lemma6Certificate cert = lemma6_certificate(
                config.modes[static_cast<size_t>(mode)], profile.angles(state.time), h, bounds);
            cert.step = k;
            bool ok = cert.pass;
            row.certificate = std::move(cert);
            log.steps.push_back(std::move(row));
            if (!ok)
                throw CertificateFailure(k, "lemma6 contraction certificate failed");
        } else {
            log.steps.push_back(std::move(row));
        }

        if (config.threshold > 0.0 && err <= config.threshold * log.err0) {
            log.converged = true;
            break;
        }
        if (k == config.horizon) break;

        state = step_agentwise(state, h, config.modes[static_cast<size_t>(mode)], spec, profile);
        eps = stacked_error(state, spec);
        decay *= 1.0 - params.delta;
    }
    return log;
}

namespace {

void print_g17(std::ostream& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

}  // namespace

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out) {
    out << "k,t,h,mode";
    for (int i = 1; i <= log.n; ++i) out << ",p_" << i << "x,p_" << i << "y";
    out << ",err_inf,bound,cert_max_colsum,cert_bound,cert_pass\n";
    for (const auto& row : log.steps) {
        out << row.k << ',';
        print_g17(out, row.t);
        out << ',';
        print_g17(out, row.h);
        out << ',' << row.mode;
        for (Eigen::Index i = 0; i < row.positions.size(); ++i) {
            out << ',';
            print_g17(out, row.positions(i));
        }
        out << ',';
        print_g17(out, row.err_inf);
        out << ',';
        print_g17(out, row.bound);
        if (row.certificate) {
            out << ',';
            print_g17(out, row.certificate->max_column_sum);
            out << ',';
            print_g17(out, row.certificate->bound);
            out << ',' << (row.certificate->pass ? 1 : 0);
        } else {
            out << ",nan,nan,nan";
        }
        out << '\n';
    }
}

ConvergenceReport convergence_report(const TrajectoryLog& log) {
    if (log.steps.empty()) throw std::invalid_argument("convergence_report: empty log");
    ConvergenceReport report;
    report.steps = static_cast<long>(log.steps.size()) - 1;
    report.theoretical_rate = -std::log1p(-log.delta) / log.h_max;

    for (size_t i = 0; i + 1 < log.steps.size(); ++i) {
        const auto& cur = log.steps[i];
        const auto& next = log.steps[i + 1];
        if (cur.err_inf <= 0.0) continue;
        double ratio = next.err_inf / cur.err_inf;
        report.ratios.push_back(ratio);
        report.max_ratio = std::max(report.max_ratio, ratio);
        if (next.err_inf > (1.0 - log.delta) * cur.err_inf + kCertTol)
            ++report.ratios_above_one_minus_delta;
        double step_bound = 1.0 - (1.0 - log.eta) * cur.h;
        if (next.err_inf > step_bound * cur.err_inf + kCertTol) ++report.ratios_above_step_bound;
    }

    // Least-squares slope of log err against time over the positive entries.
    double sum_t = 0, sum_y = 0, sum_tt = 0, sum_ty = 0;
    long m = 0;
    for (const auto& row : log.steps) {
        if (row.err_inf <= 0.0) continue;
        double y = std::log(row.err_inf);
        sum_t += row.t;
        sum_y += y;
        sum_tt += row.t * row.t;
        sum_ty += row.t * y;
        ++m;
    }
    double denom = m * sum_tt - sum_t * sum_t;
    if (m >= 2 && denom > 0.0) {
        report.rates_defined = true;
        report.empirical_rate = -(m * sum_ty - sum_t * sum_y) / denom;
    }

    const auto& last = log.steps.back();
    double worst = 0.0;
    for (int p = 0; p < log.n; ++p)
        for (int q = p + 1; q < log.n; ++q) {
            Eigen::Vector2d diff = last.positions.segment<2>(2 * p) -
                                   last.positions.segment<2>(2 * q) -
                                   (log.desired[static_cast<size_t>(p)] -
                                    log.desired[static_cast<size_t>(q)]);
            worst = std::max(worst, diff.cwiseAbs().maxCoeff());
        }
    report.final_shape_error = worst;
    return report;
}

nlohmann::json ConvergenceReport::to_json() const {
    nlohmann::json j = {
        {"steps", steps},
        {"max_ratio", max_ratio},
        {"ratios_above_one_minus_delta", ratios_above_one_minus_delta},
        {"ratios_above_step_bound", ratios_above_step_bound},
        {"theoretical_rate", theoretical_rate},
        {"final_shape_error", final_shape_error},
        {"ratios", ratios},
    };
    if (rates_defined)
        j["empirical_rate"] = empirical_rate;
    else
        j["empirical_rate"] = nullptr;
    return j;
}

}  // namespace formation
