#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tbwp/circuit.hpp"

namespace tbwp {

// ============================================================================
// Digraph algebra: spanning trees, fundamental loop/cutset matrices,
// device-class loop/cutset configuration detection.
// ============================================================================

/// Spanning tree of a connected circuit: n-1 branch positions, ascending.
struct SpanningTree {
    std::vector<int> branches;

    [[nodiscard]] bool contains(int branch) const;
    bool operator==(const SpanningTree& other) const { return branches == other.branches; }
};

/// Checks the spanning-tree property (spans all nodes, acyclic).
[[nodiscard]] bool is_spanning_tree(const Circuit& circuit, const SpanningTree& tree);

/// Deterministic default tree: BFS preferring device classes in the order
/// (V, C, L, R, M, I), then netlist position.  Proper trees become the
/// default whenever one exists.
[[nodiscard]] SpanningTree default_tree(const Circuit& circuit);

/// Reduced loop matrix B ((m-n+1) x m) and cutset matrix Q ((n-1) x m) built
/// from a spanning tree.  Columns follow Circuit::column_order() — the class
/// blocks (m, c, l, r, u, j) with netlist order inside each block.  Row i of
/// B is the fundamental loop of the i-th cotree branch, oriented with that
/// branch; row j of Q is the fundamental cutset of the j-th tree branch,
/// oriented with that branch.  Entries are exact {-1, 0, +1} integers and
/// B * Q^T = 0 holds in integer arithmetic.
struct ReducedMatrices {
    Eigen::MatrixXi B;
    Eigen::MatrixXi Q;
    SpanningTree generating_tree;
    std::vector<int> cotree; // branch positions, row order of B
    // tree branch positions in row order of Q == generating_tree.branches
};

[[nodiscard]] ReducedMatrices fundamental_matrices(const Circuit& circuit,
                                                   const SpanningTree& tree);

// ----------------------------------------------------------------------------
// Device-class configurations
// ----------------------------------------------------------------------------

/// A loop witness is a branch list forming a simple cycle; a cutset witness
/// is a branch list whose removal disconnects the circuit and which equals
/// the boundary of some node set.
struct ConfigReport {
    bool has_vc_loop = false;
    bool has_vmc_loop = false;
    bool has_vl_loop = false;
    bool has_il_cutset = false;
    bool has_ilc_cutset = false;
    bool has_ic_cutset = false;

    std::vector<int> vc_loop_witness;
    std::vector<int> vmc_loop_witness;
    std::vector<int> vl_loop_witness;
    std::vector<int> il_cutset_witness;
    std::vector<int> ilc_cutset_witness;
    std::vector<int> ic_cutset_witness;

    /// Every simple cycle of the V-M-L subgraph, as sorted branch lists.
    std::vector<std::vector<int>> vml_loops;
    int vml_loop_count = 0;
    /// Exactly one VML-loop and it contains the memristor and >= 1 inductor.
    bool unique_vml_loop_with_m_and_l = false;
};

[[nodiscard]] ConfigReport check_configurations(const Circuit& circuit);

/// True when `branches` is a simple cycle of the circuit (used to re-verify
/// loop witnesses).
[[nodiscard]] bool verify_loop_witness(const Circuit& circuit, const std::vector<int>& branches);

/// True when deleting `branches` increases the component count and no proper
/// subset does for the same separation (witness re-verification by component
/// counting).
[[nodiscard]] bool verify_cutset_witness(const Circuit& circuit, const std::vector<int>& branches);

} // namespace tbwp
