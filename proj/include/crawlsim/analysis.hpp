#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crawlsim/dynamics.hpp"

namespace crawlsim {

/// Tolerance of the Simpson quadratures on cycle grids; consistency checks
/// are asserted at 100x this value.
inline constexpr double quadrature_tolerance = 1e-9;

/// One period of a relative-periodic solution in reduced coordinates,
/// anchored at t = 0.
struct LimitCycle {
    int block_count = 0;
    double period = 0.0;
    std::vector<double> times;    // uniform grid over [0, T]
    std::vector<Vector> samples;  // packed reduced states (z, v)
    double geometric_phase = 0.0;   // g* = int_0^T v_1
    double residual = 0.0;          // ||Pi(s*) - s*||_2
    double phase_consistency = 0.0; // max_i |int_0^T v_i - g*|
};

ReducedState cycle_initial_state(const LimitCycle& cycle);

enum class Verdict { pass, fail, inconclusive };
enum class CertificateKind {
    contraction,
    dissipativity,
    floquet,
    incompetence,
    assumption_a6,
    energy_balance,
};
std::string to_string(Verdict v);
std::string to_string(CertificateKind k);

/// Verdict record of a property or assumption check: measured constants plus
/// the sample points achieving the relevant extrema. A pass requires every
/// sub-inequality to hold with its stated margin.
struct Certificate {
    CertificateKind kind = CertificateKind::contraction;
    Verdict verdict = Verdict::inconclusive;
    std::map<std::string, double> measured;
    std::vector<Witness> witnesses;
    std::string note;
};

struct GrowthEvidence {
    double slope = 0.0;  // least-squares growth rate of the |z| envelope
    double first_window_max = 0.0;
    double last_window_max = 0.0;
    double increasing_fraction = 0.0;
    int windows = 0;
};

enum class AsymptoticsClass { converged_to_cycle, diverging, undetermined };

struct AsymptoticsVerdict {
    AsymptoticsClass cls = AsymptoticsClass::undetermined;
    std::optional<LimitCycle> cycle;     // set when converged
    std::optional<GrowthEvidence> growth;  // set when diverging
    std::string note;
};

/// Stroboscopic map of the T-periodic reduced system: the state at t0 + T.
ReducedState period_map(const CrawlerModel& model, const ReducedState& s, double t0,
                        const SolverSpec& spec);

enum class CycleAccel { none, newton };

struct CycleSearch {
    bool success = false;
    std::optional<LimitCycle> cycle;
    double last_residual = 0.0;
    int iterations = 0;
    std::optional<AsymptoticsVerdict> divergence;
    std::string note;
};

/// Locates a fixed point of the period map. `none` iterates the map (backed
/// by the contraction property under strong monotonicity); `newton` solves
/// Pi(s) - s = 0 with a central finite-difference Jacobian (step
/// 1e-6 (1+||s||)) and damped updates. Residual growth across iterates
/// triggers the divergence classifier instead of a bare failure.
CycleSearch find_limit_cycle(const CrawlerModel& model, const ReducedState& s0, double tol,
                             int max_iters, CycleAccel accel, const SolverSpec& spec);

struct InconsistentCycleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// g* by Simpson quadrature of v_1 over one period, cross-checked against
/// every other int v_i. Throws InconsistentCycleError when the phase
/// consistency defect exceeds 100x the quadrature tolerance.
double geometric_phase(const LimitCycle& cycle);

/// Integrates two copies of the reduced system from s_a, s_b and certifies
/// the contraction estimate: E nonincreasing, dE/dt <= -mu_hat ||v-w||^2 up
/// to slack 1e-7 (1+E(0)), terminal separation below the initial one.
Certificate contraction_diagnostics(const CrawlerModel& model, const ReducedState& s_a,
                                    const ReducedState& s_b, double horizon,
                                    const SolverSpec& spec);

/// Fundamental solution of the homogeneous viscous system over one period.
Matrix monodromy_matrix(const CrawlerModel& model, const SolverSpec& spec);

/// Floquet multipliers, spectral radius and decay rate of a viscous model.
Certificate floquet_certificate(const CrawlerModel& model, const SolverSpec& spec);

/// Skewed-energy dissipativity certificate under the stiff-body assumption:
/// picks delta = 0.9 min of the three admissibility bounds (third evaluated
/// with the numerically computed lambda_min of the shape operator), checks
/// positive definiteness and both quadratic decay coefficients, and verifies
/// empirically that the probe trajectories enter and stay in the reported
/// compact box.
Certificate dissipativity_certificate(const CrawlerModel& model,
                                      const std::vector<ReducedState>& probes,
                                      const SolverSpec& spec);

/// Constant-viscosity incompetence: the limit cycle's mean barycenter
/// velocity vanishes and the barycenter drift rate over 50 periods decays.
Certificate incompetence_check(const CrawlerModel& model, const SolverSpec& spec);

/// Energy-balance certificate: max ledger residual below 1e-6 over the run.
Certificate energy_balance_certificate(const CrawlerModel& model, const FullState& ic,
                                       double horizon, const SolverSpec& spec);

/// AssumptionA6 certificate wrapping validate_assumptions.
Certificate a6_certificate(const CrawlerModel& model);

struct ClassifyOptions {
    double cauchy_tol = 1e-8;       // stroboscopic Cauchy tolerance (max norm)
    double growth_fraction = 0.9;   // share of windows that must increase
    double growth_ratio = 10.0;     // last/first window-max ratio
};

/// Stroboscopic convergence vs envelope-growth classification; Undetermined
/// is the safe default.
AsymptoticsVerdict classify_asymptotics(const CrawlerModel& model, const ReducedState& s0,
                                        double horizon, double window, const SolverSpec& spec,
                                        const ClassifyOptions& options = {});

/// Seeded probe states with norms spread up to max_norm (deterministic for a
/// fixed seed and platform).
std::vector<ReducedState> random_probe_states(int block_count, int count, double max_norm,
                                              std::uint64_t seed);

/// Descriptive statistic only (never certified): relative half-period shift
/// defect of the barycenter velocity along the cycle. Values near zero mean
/// u* is close to T/2-periodic.
double half_period_shift_defect(const CrawlerModel& model, const LimitCycle& cycle);

}  // namespace crawlsim
