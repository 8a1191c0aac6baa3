#pragma once

#include <map>
#include <string>
#include <vector>

#include "tbwp/dae.hpp"
#include "tbwp/graph.hpp"
#include "tbwp/numerics.hpp"
#include "tbwp/tolerances.hpp"

namespace tbwp {

// ============================================================================
// TBWP certification reports
// ============================================================================

/// One checked hypothesis with its numeric certificate.  Scalars and vectors
/// hold everything needed to re-verify the condition from the report alone.
struct ConditionResult {
    std::string id;
    Outcome outcome = Outcome::Inconclusive;
    std::string message;
    std::map<std::string, double> scalars;
    std::map<std::string, Vector> vectors;
};

struct TbwpReport {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<ConditionResult> conditions;
    Spectrum spectrum;            // of f' (ODE Jacobian or Schur reduction)
    Vector p, q;                  // kernel direction and generalized eigenvector
    std::string line_provenance;  // where the line direction came from
    Tolerances tolerances;

    [[nodiscard]] const ConditionResult* condition(const std::string& id) const;
};

/// Explicit-ODE-level check of a system x' = f(x) at x_star with a known
/// (or hypothesized) equilibrium-line direction:
///   1. "line_of_equilibria":   f vanishes along x_star + t * direction;
///   2. "double_index2_zero":   exactly two eigenvalues in the zero cluster,
///                              corank f' = 1, Jordan chain exists, all other
///                              eigenvalues off the imaginary axis;
///   3. "transversality":       (det f')'(x*) q != 0, cross-checked against
///                              f''(x*) p q not in im f'(x*).
/// Oblique lines are handled as-is: every certified quantity is invariant
/// under orthonormal changes of basis, so no explicit rotation is performed.
[[nodiscard]] TbwpReport check_ode_tbwp(const MapEvaluator& field,
                                        const MatrixEvaluator& jacobian, const Vector& x_star,
                                        const Vector& line_direction,
                                        const Tolerances& tols = {});

/// DAE-level check on a semiexplicit system at an equilibrium, with the
/// line direction given in y-space.  Condition ids as above; condition 2 runs
/// on the Schur-reduced f' and additionally requires corank F' = 1;
/// condition 3 tests (det F')'(eq) qbar with qbar the lifted generalized
/// eigenvector, cross-checked via F''(eq) pbar qbar vs im F'(eq).
[[nodiscard]] TbwpReport check_dae_tbwp(const SemiexplicitDae& dae, const EquilibriumPoint& eq,
                                        const Vector& line_direction_y,
                                        const Tolerances& tols = {});

/// Transversality condition alone, at caller-supplied chain vectors (both are
/// normalized internally).  The verdict is invariant under replacing q by
/// alpha q + beta p with alpha != 0, since det f' vanishes identically along
/// the equilibrium line spanned by p.
[[nodiscard]] ConditionResult check_transversality(const MapEvaluator& field,
                                                   const MatrixEvaluator& jacobian,
                                                   const Vector& x_star, const Vector& p,
                                                   const Vector& q, const Tolerances& tols = {});

// ============================================================================
// Circuit-level check
// ============================================================================

struct CircuitTbwpReport {
    Verdict verdict = Verdict::Inconclusive;            // combined
    Verdict structural_verdict = Verdict::Inconclusive; // conditions (i)-(iii)
    Verdict numeric_verdict = Verdict::Inconclusive;    // DAE-level confirmation

    std::vector<ConditionResult> structural; // config, passivity, memristance
    TbwpReport numeric;                      // full DAE-level report
    ConfigReport config;

    double memristance_value = 0.0; // M(q*)
    double memristance_slope = 0.0; // M'(q*)
    double min_eig_C = 0.0, min_eig_L = 0.0, min_eig_R = 0.0;

    Tolerances tolerances;
};

/// Structural hypotheses in order: no VMC-loops ("config_no_vmc_loop"), no
/// ILC-cutsets ("config_no_ilc_cutset"), unique VML-loop through the
/// memristor and an inductor ("config_unique_vml_loop"); strict local
/// passivity of C, L, R ("passivity_capacitance" / "..._inductance" /
/// "..._resistance"); M(q*) = 0 ("memristance_zero") and M'(q*) != 0
/// ("memristance_slope").  The numeric DAE-level check runs independently;
/// structural/numeric disagreement yields an inconclusive combined verdict
/// with both certificates.
[[nodiscard]] CircuitTbwpReport check_circuit_tbwp(const CircuitModel& model,
                                                   const EquilibriumPoint& eq,
                                                   const Tolerances& tols = {});
[[nodiscard]] CircuitTbwpReport check_circuit_tbwp(const CircuitModel& model, double q_star,
                                                   const Tolerances& tols = {});

// ============================================================================
// Stability profile along the equilibrium line
// ============================================================================

struct BranchSample {
    double q_m = 0.0;
    double memristance = 0.0;
    bool ok = false;
    std::string error;
    Eigen::VectorXcd eigenvalues;
    int n_positive = 0, n_negative = 0, n_zero = 0, n_critical = 0;
    bool exactly_one_zero = false;
};

/// Per-sample sign of M(q_m) and eigenvalue counts from pencil_spectrum.
/// Off the bifurcation point exactly one zero eigenvalue is expected; the
/// per-sample flag records whether that held.
[[nodiscard]] std::vector<BranchSample> classify_equilibrium_branch(
    const CircuitModel& model, const std::vector<double>& q_samples,
    const Tolerances& tols = {});

// ============================================================================
// Non-passive multiplicity check
// ============================================================================

struct NonpassiveReport {
    Outcome overall = Outcome::Inconclusive;
    std::vector<ConditionResult> conditions; // nonpassive_config, proper_sum_nonzero,
                                             // lproper_sum_zero, zero_multiplicity
    double proper_sum = 0.0;
    double lproper_sum = 0.0;
    double sum_scale = 0.0; // tolerance scale for both sums
    int proper_tree_count = 0;
    int lproper_tree_count = 0;
    bool conditions_hold = false;       // the three hypotheses
    bool multiplicity_confirmed = false; // zero cluster >= 2 (when evaluated)
    Spectrum spectrum;
    Tolerances tolerances;
};

/// Non-passive multiplicity hypotheses: no VC-loops / IL-cutsets / VL-loops /
/// IC-cutsets; proper-tree MR sum nonzero; L-proper-tree MR sum zero at the
/// operating point.  When all three hold the pencil spectrum must show a
/// zero eigenvalue of algebraic multiplicity >= 2; that assertion's outcome
/// is recorded as condition "zero_multiplicity".
[[nodiscard]] NonpassiveReport check_nonpassive_zero_multiplicity(const CircuitModel& model,
                                                                  const EquilibriumPoint& eq,
                                                                  const Tolerances& tols = {});

} // namespace tbwp
