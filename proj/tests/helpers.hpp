#pragma once

// Shared test oracles, independent of the code under test:
//  - Kirchhoff's Matrix-Tree determinant for spanning-tree counts and
//    weighted tree sums,
//  - random connected multigraph generation.

#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tbwp/circuit.hpp"

namespace tbwp_test {

/// Weighted Matrix-Tree value: sum over spanning trees T of prod_{e in T}
/// w_e, computed as a cofactor of the weighted node Laplacian.
inline double matrix_tree_value(const tbwp::Circuit& c, const std::vector<double>& weights) {
    const int n = c.num_nodes();
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (int b = 0; b < c.num_branches(); ++b) {
        const int i = c.tail_index(b), j = c.head_index(b);
        const double w = weights[static_cast<std::size_t>(b)];
        lap(i, i) += w;
        lap(j, j) += w;
        lap(i, j) -= w;
        lap(j, i) -= w;
    }
    return lap.block(1, 1, n - 1, n - 1).determinant();
}

inline double matrix_tree_count(const tbwp::Circuit& c) {
    return matrix_tree_value(
        c, std::vector<double>(static_cast<std::size_t>(c.num_branches()), 1.0));
}

/// Connected random multigraph on `num_nodes` nodes with exactly
/// `num_branches` resistor branches (>= num_nodes - 1): a spanning path over
/// a shuffled node order plus uniformly random extra branches.  Parallel
/// branches are allowed, self-loops are not.
inline tbwp::Circuit random_resistor_multigraph(std::mt19937& rng, int num_nodes,
                                                int num_branches) {
    auto node = [](int i) { return "n" + std::to_string(i); };
    std::vector<int> order(static_cast<std::size_t>(num_nodes));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::uniform_int_distribution<int> pick(0, num_nodes - 1);
    std::uniform_real_distribution<double> value(0.5, 2.0);
    std::vector<tbwp::Branch> branches;
    for (int b = 0; b < num_branches; ++b) {
        int t, h;
        if (b < num_nodes - 1) {
            t = order[static_cast<std::size_t>(b)];
            h = order[static_cast<std::size_t>(b) + 1];
        } else {
            do {
                t = pick(rng);
                h = pick(rng);
            } while (t == h);
        }
        branches.push_back({"r" + std::to_string(b), tbwp::DeviceKind::Resistor, node(t),
                            node(h), tbwp::Polynomial({value(rng)})});
    }
    return tbwp::Circuit(std::move(branches));
}

} // namespace tbwp_test
