#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tbwp/graph.hpp"

namespace tbwp {

// ============================================================================
// Spanning-tree family enumeration and MR-product sums.
// ============================================================================

enum class TreeFamilyKind {
    All,    // every spanning tree
    Proper, // all V and C branches in, no I or L branches
    LProper // all V and L branches in, no I or C branches
};

[[nodiscard]] const char* family_name(TreeFamilyKind k);
[[nodiscard]] TreeFamilyKind family_from_name(const std::string& name);

struct TreeFamily {
    TreeFamilyKind kind{TreeFamilyKind::All};
    /// Canonical order: lexicographic in the tree's sorted branch-id sequence.
    std::vector<SpanningTree> trees;
    /// Per-tree cotree MR-product; filled by mr_product_sum (empty until then).
    std::vector<double> cotree_products;
};

struct EnumerationOptions {
    bool parallel = true; // OpenMP frontier split; result order is identical
};

/// Complete, duplicate-free enumeration by contraction/deletion backtracking:
/// required branches contracted first, forbidden branches deleted first.
/// Unsatisfiable constraints yield an empty family.
[[nodiscard]] TreeFamily enumerate_trees(const Circuit& circuit, TreeFamilyKind kind,
                                         const EnumerationOptions& opts = {});

/// Serial reference implementation (kept for testing and benchmarking).
[[nodiscard]] TreeFamily enumerate_trees_serial(const Circuit& circuit, TreeFamilyKind kind);

/// Operating point at which resistances/memristances are evaluated.
struct OperatingValues {
    double q_m = 0.0;
    /// Resistor currents in class order (netlist order of R branches);
    /// missing entries are treated as 0.
    Eigen::VectorXd i_r;
};

/// Sum over family trees of the product of R/M incremental values over the
/// tree's cotree branches; the empty product is 1.  Fills
/// family.cotree_products as a side effect.
double mr_product_sum(const Circuit& circuit, TreeFamily& family,
                      const OperatingValues& point = {});

} // namespace tbwp
