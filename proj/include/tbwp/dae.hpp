#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "tbwp/graph.hpp"
#include "tbwp/numerics.hpp"
#include "tbwp/polynomial.hpp"
#include "tbwp/trees.hpp"

namespace tbwp {

class DaeError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ============================================================================
// Semiexplicit DAE  y' = h(y, z),  0 = g(y, z)
// ============================================================================

/// Variable layout for circuit DAEs:
///   y = (q_m, v_c, i_l)                      r = n_m + n_c + n_l
///   z = (i_m, i_c, v_l, i_r, v_j, i_u)       p = m
/// (v_j: voltages across current sources, i_u: currents through voltage
/// sources).
struct DaeLayout {
    int n_m = 0, n_c = 0, n_l = 0, n_r = 0, n_u = 0, n_j = 0;

    [[nodiscard]] int r() const { return n_m + n_c + n_l; }
    [[nodiscard]] int p() const { return n_m + n_c + n_l + n_r + n_u + n_j; }

    // y offsets
    [[nodiscard]] int y_qm() const { return 0; }
    [[nodiscard]] int y_vc() const { return n_m; }
    [[nodiscard]] int y_il() const { return n_m + n_c; }
    // z offsets
    [[nodiscard]] int z_im() const { return 0; }
    [[nodiscard]] int z_ic() const { return n_m; }
    [[nodiscard]] int z_vl() const { return n_m + n_c; }
    [[nodiscard]] int z_ir() const { return n_m + n_c + n_l; }
    [[nodiscard]] int z_vj() const { return n_m + n_c + n_l + n_r; }
    [[nodiscard]] int z_iu() const { return n_m + n_c + n_l + n_r + n_j; }
};

using DaeMap = std::function<Vector(const Vector&, const Vector&)>;
using DaeBlock = std::function<Matrix(const Vector&, const Vector&)>;

struct SemiexplicitDae {
    int r = 0;
    int p = 0;
    DaeLayout layout;      // meaningful when assembled from a circuit
    bool has_layout = false;

    DaeMap h, g;
    DaeBlock h_y, h_z, g_y, g_z;

    /// Stacked map F(y,z) = (h, g) and its Jacobian; the workhorses of the
    /// DAE-level transversality test.
    [[nodiscard]] Vector F(const Vector& y, const Vector& z) const;
    [[nodiscard]] Matrix Fprime(const Vector& y, const Vector& z) const;

    /// Names of y / z components ("q_m[m1]", "v_c[c2]", ...); empty for
    /// hand-built DAEs.
    std::vector<std::string> y_names, z_names;
};

/// Builds a DAE from h, g alone; the four Jacobian blocks are filled with
/// central finite differences unless supplied.
[[nodiscard]] SemiexplicitDae make_dae(int r, int p, DaeMap h, DaeMap g, DaeBlock h_y = nullptr,
                                       DaeBlock h_z = nullptr, DaeBlock g_y = nullptr,
                                       DaeBlock g_z = nullptr);

// ============================================================================
// Circuit assembly
// ============================================================================

/// Caller-supplied smooth characteristics overriding the netlist constants.
/// All optional; matrices may couple branches of one class.  When any is
/// set, the DAE Jacobian blocks fall back to finite differences.
struct CircuitCharacteristics {
    std::function<Matrix(const Vector&)> capacitance; // C(v_c), n_c x n_c
    std::function<Matrix(const Vector&)> inductance;  // L(i_l), n_l x n_l
    std::function<Vector(const Vector&)> gamma;       // resistor voltages, gamma(0)=0
    std::function<Matrix(const Vector&)> resistance;  // R(i_r) = gamma'(i_r)
};

/// Circuit together with its assembled DAE and the fundamental matrices used.
struct CircuitModel {
    Circuit circuit;
    ReducedMatrices matrices;
    SemiexplicitDae dae;

    bool has_memristor = false;
    Polynomial memristance;       // M(q)
    Polynomial memristance_deriv; // M'(q)

    Vector cap_values, ind_values;                 // netlist constants
    std::vector<Polynomial> resistances;           // R_k(i_r_k) per resistor
    Vector source_V, source_I;                     // constant source values

    [[nodiscard]] double memristance_at(double q) const;
    [[nodiscard]] double memristance_slope_at(double q) const;

    /// Incremental characteristic matrices at an operating point.
    [[nodiscard]] Matrix C_matrix(const Vector& v_c) const;
    [[nodiscard]] Matrix L_matrix(const Vector& i_l) const;
    [[nodiscard]] Matrix R_matrix(const Vector& i_r) const;

    CircuitCharacteristics custom; // set when caller-supplied
    bool has_custom = false;
};

/// Assembles the KVL/KCL semiexplicit DAE with B, Q from
/// fundamental_matrices over the default tree.  Jacobians are analytic for
/// polynomial netlist characteristics.  Rejects circuits with more than one
/// memristor.
[[nodiscard]] CircuitModel assemble_dae(const Circuit& circuit);
[[nodiscard]] CircuitModel assemble_dae(const Circuit& circuit,
                                        const CircuitCharacteristics& chars);

// ============================================================================
// Equilibria
// ============================================================================

struct EquilibriumPoint {
    Vector y_star, z_star;
    double residual_h = 0.0, residual_g = 0.0; // inf-norms
    int newton_iterations = 0;
};

/// Solves h = 0, g = 0 with the memristor charge pinned to q_m_value (the
/// equilibrium set is a line in q_m, so pinning isolates one point).  The
/// pinned system is consistent-overdetermined; steps are QR least-squares
/// with a final true-residual gate.
[[nodiscard]] EquilibriumPoint find_equilibrium(const SemiexplicitDae& dae, double q_m_value,
                                                const std::optional<Vector>& seed = {},
                                                const Tolerances& tols = {});

// ============================================================================
// Schur reduction and pencil spectra
// ============================================================================

struct SchurReduction {
    Matrix f_prime; // A - B D^{-1} C
    Matrix A, B, C, D;
    double gz_condition = 0.0; // sigma_max / sigma_min of D
};

/// f' = h_y - h_z g_z^{-1} g_y at the equilibrium; throws DaeError when g_z
/// is numerically singular ("index > 1 at this point").
[[nodiscard]] SchurReduction schur_reduce(const SemiexplicitDae& dae, const EquilibriumPoint& eq,
                                          const Tolerances& tols = {});

struct PencilSpectrum {
    Spectrum spectrum;      // of the Schur-reduced f' (r eigenvalues)
    int corank_f_prime = 0;
    int corank_F_prime = 0; // corank of the full [[h_y h_z],[g_y g_z]]
    int corank_g_z = 0;
    double gz_condition = 0.0;
};

/// Spectrum of f' with zero-clustering plus the corank certificates needed
/// by the index-two argument.
[[nodiscard]] PencilSpectrum pencil_spectrum(const SemiexplicitDae& dae,
                                             const EquilibriumPoint& eq,
                                             const Tolerances& tols = {});

} // namespace tbwp
