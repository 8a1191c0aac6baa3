#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tbwp/dae.hpp"
#include "tbwp/numerics.hpp"

namespace tbwp {

// ============================================================================
// Reduced-ODE integration near the equilibrium line
// ============================================================================

/// The reduced field y' = h(y, psi(y)) with psi(y) the Newton solution of
/// g(y, z) = 0, warm-started from the previous step.  Throws DaeError when
/// the constraint solve fails.
class ReducedOde {
public:
    ReducedOde(const SemiexplicitDae& dae, Vector z_seed, const Tolerances& tols = {});

    [[nodiscard]] Vector operator()(const Vector& y) const;

    /// z and ||g||_inf at the last evaluated y.
    [[nodiscard]] const Vector& last_z() const { return z_; }
    [[nodiscard]] double last_constraint_residual() const { return residual_; }

private:
    const SemiexplicitDae* dae_;
    Tolerances tols_;
    mutable Vector z_;
    mutable double residual_ = 0.0;
};

enum class ExchangeVerdict { Attracted, Repelled, Undecided };
[[nodiscard]] const char* to_string(ExchangeVerdict v);

struct ExchangeParams {
    double dq = 0.1;    // offset of q_m from the bifurcation value, each side
    double eps = 1e-3;  // perturbation off the line
    double t_end = 50.0;
    double step = 1e-3;
};

struct SideResult {
    std::string label;         // "M>0" / "M<0" when memristance is known
    double q_m = 0.0;
    double memristance = 0.0;
    double initial_offset = 0.0;
    double final_distance = 0.0; // to the equilibrium line, non-q_m components
    double max_distance = 0.0;
    ExchangeVerdict verdict = ExchangeVerdict::Undecided;
    Trajectory trajectory;                  // y states
    std::vector<double> constraint_residuals; // ||g||_inf per stored state
    double max_constraint_residual = 0.0;
    std::string error;
};

struct ExchangeReport {
    SideResult plus_side, minus_side;
    ExchangeParams params;
};

/// Integrates the reduced ODE from equilibria at q* +- dq perturbed by eps
/// along the leading non-null eigenvector of f'.  Attracted when the final
/// line-distance is <= eps/10; repelled when the distance anywhere along the
/// trajectory reaches >= 10 eps (orbits on the unstable side can re-land on
/// the line, so repulsion is judged on the maximum); otherwise undecided.
[[nodiscard]] ExchangeReport stability_exchange_experiment(const CircuitModel& model,
                                                           double q_star,
                                                           const ExchangeParams& params = {},
                                                           const Tolerances& tols = {});

/// Same experiment on a bare DAE (labels fall back to "q>q*" / "q<q*").
[[nodiscard]] ExchangeReport stability_exchange_experiment(const SemiexplicitDae& dae,
                                                           double q_star,
                                                           const ExchangeParams& params = {},
                                                           const Tolerances& tols = {});

// ============================================================================
// Equilibrium-line tracing
// ============================================================================

struct LineTraceRow {
    double q_m = 0.0;
    double memristance = 0.0;
    double residual = 0.0; // equilibrium residual inf-norm
    bool ok = false;
    std::string error;
    Eigen::VectorXcd eigenvalues; // of the reduced f'
    int n_zero = 0;
};

/// Equilibria and reduced spectra on a uniform q_m grid; per-sample Newton
/// failures are recorded in the row, not fatal.
[[nodiscard]] std::vector<LineTraceRow> trace_equilibrium_line(const CircuitModel& model,
                                                               double q_lo, double q_hi,
                                                               int samples,
                                                               const Tolerances& tols = {});

// ============================================================================
// CSV output
// ============================================================================

/// Columns: t, then y components in layout order, then constraint residual.
void write_trajectory_csv(const std::string& path, const SideResult& side,
                          const std::vector<std::string>& y_names);

void write_line_trace_csv(const std::string& path, const std::vector<LineTraceRow>& rows);

} // namespace tbwp
