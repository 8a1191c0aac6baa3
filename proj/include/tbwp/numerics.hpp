#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "tbwp/tolerances.hpp"

namespace tbwp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class NumericsError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ============================================================================
// Numerical rank / kernel machinery
// ============================================================================

struct RankInfo {
    int rank = 0;
    int corank = 0;                 // column count - rank
    Vector singular_values;        // descending
    Matrix null_basis;             // orthonormal, corank columns
    Matrix left_range;             // leading left singular vectors (rank cols)
    double tol_used = 0.0;
    double sigma_max = 0.0;

    /// Distance-based membership test: ||(I - U_r U_r^T) w|| <= tol ||w||.
    [[nodiscard]] bool in_image(const Vector& w) const;
    [[nodiscard]] double image_residual(const Vector& w) const; // relative
};

/// SVD rank with default tol = max(rows, cols) * eps * sigma_max.
[[nodiscard]] RankInfo rank_info(const Matrix& A, std::optional<double> tol = {});

// ============================================================================
// Spectra
// ============================================================================

struct Spectrum {
    Eigen::VectorXcd eigenvalues;   // sorted by (Re, Im) ascending
    std::vector<int> zero_cluster;  // |lambda| <= zero_tol_eff
    std::vector<int> stable;        // Re < -realpart_tol_eff
    std::vector<int> unstable;      // Re > +realpart_tol_eff
    std::vector<int> critical;      // rest: near-imaginary-axis, nonzero
    std::vector<int> ambiguous;     // within the decade band of a threshold
    double zero_tol_eff = 0.0;
    double realpart_tol_eff = 0.0;
    double scale = 0.0;             // ||A|| used for the relative tolerances
};

/// Eigenvalues of a real square matrix classified against the registry
/// tolerances (zero/realpart scaled by ||A||_2-ish: the largest singular
/// value).  The index partition zero/stable/unstable/critical is exhaustive
/// and disjoint; `ambiguous` marks members whose classification sits inside
/// the decade band (inconclusive territory).
[[nodiscard]] Spectrum classify_spectrum(const Matrix& A, const Tolerances& tols = {});

// ============================================================================
// Derivative stencils
// ============================================================================

using MapEvaluator = std::function<Vector(const Vector&)>;
using MatrixEvaluator = std::function<Matrix(const Vector&)>;

/// F''(x) p q by the 4-point central stencil
///   [F(x+hp+hq) - F(x+hp-hq) - F(x-hp+hq) + F(x-hp-hq)] / (4 h^2),
/// h = eps^(1/4) (1 + ||x||).  Exact for bilinear maps up to roundoff.
[[nodiscard]] Vector second_directional_derivative(const MapEvaluator& F, const Vector& x,
                                                   const Vector& p, const Vector& q);

/// d/dt det J(x + t q) at t=0 by central difference with
/// h = eps^(1/3) (1 + ||x||).
[[nodiscard]] double det_jacobian_derivative(const MatrixEvaluator& J, const Vector& x,
                                             const Vector& q);

/// Scale against which a determinant-derivative is judged: product of the
/// n-1 largest singular values of J(x) (the natural size of det' at a
/// corank-1 point).
[[nodiscard]] double det_derivative_scale(const Matrix& Jx);

// ============================================================================
// Generalized eigenvector (index-2 chain)
// ============================================================================

struct GeneralizedEigvec {
    Vector q;        // normalized
    double residual; // ||A q_raw - p|| / ||p||
};

/// Minimum-norm least-squares solution of A q = p for a corank-1 matrix A
/// with p spanning the kernel.  A residual above the threshold means the
/// zero eigenvalue is simple (no index-2 structure) and throws.
[[nodiscard]] GeneralizedEigvec generalized_eigvec(const Matrix& A, const Vector& p,
                                                   double lsq_tol = 1e-8);

// ============================================================================
// Newton and RK4
// ============================================================================

struct NewtonResult {
    Vector x;
    double residual_norm = 0.0; // inf-norm
    int iterations = 0;
};

/// Newton iteration for a square system; throws on singular Jacobian
/// (condition estimate > 1e14) or non-convergence.
[[nodiscard]] NewtonResult newton_solve(const MapEvaluator& residual,
                                        const MatrixEvaluator& jacobian, const Vector& guess,
                                        double tol = 1e-12, int max_iter = 50);

struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    bool blew_up = false;
    double blowup_time = 0.0;
};

/// Classical fixed-step RK4 over [0, t_end]; includes t=0 and t_end.  A
/// non-finite state truncates the trajectory and sets the blow-up flag.
[[nodiscard]] Trajectory integrate_rk4(const MapEvaluator& field, const Vector& x0, double t_end,
                                       double step);

} // namespace tbwp
