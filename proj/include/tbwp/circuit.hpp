#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbwp/polynomial.hpp"

namespace tbwp {

// ============================================================================
// Circuit model: directed multigraph with device-classified branches.
// ============================================================================

/// Device classes in the fixed block order used by the loop/cutset column
/// split B = (B_m B_c B_l B_r B_u B_j): memristor, capacitor, inductor,
/// resistor, voltage source, current source.
enum class DeviceKind { Memristor = 0, Capacitor, Inductor, Resistor, VSource, ISource };

constexpr int kNumDeviceKinds = 6;

[[nodiscard]] char device_letter(DeviceKind k);
[[nodiscard]] const char* device_name(DeviceKind k);

struct Branch {
    std::string id;
    DeviceKind kind{DeviceKind::Resistor};
    std::string tail; // current flows tail -> head at positive branch current
    std::string head;
    /// Memristance M(q) for M; constant value for C/L/V/I; incremental
    /// resistance R(i_r) for R.
    Polynomial characteristic;
};

/// Error thrown by the parser; carries the 1-based line number when the
/// failure is attributable to a specific input line (0 otherwise).
class NetlistError : public std::runtime_error {
public:
    NetlistError(std::string msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

class Circuit {
public:
    Circuit() = default;
    /// Validates: unique ids, no self-loops, connectivity, non-empty.
    explicit Circuit(std::vector<Branch> branches);

    [[nodiscard]] const std::vector<Branch>& branches() const { return branches_; }
    [[nodiscard]] const std::vector<std::string>& nodes() const { return nodes_; }
    [[nodiscard]] int num_branches() const { return static_cast<int>(branches_.size()); }
    [[nodiscard]] int num_nodes() const { return static_cast<int>(nodes_.size()); }

    /// Branch positions of one device class, in netlist order.
    [[nodiscard]] const std::vector<int>& class_index(DeviceKind k) const {
        return class_index_[static_cast<int>(k)];
    }
    [[nodiscard]] int count(DeviceKind k) const {
        return static_cast<int>(class_index(k).size());
    }

    /// Branch positions in class-block order (m, c, l, r, u, j); this is the
    /// column order of the reduced loop/cutset matrices.
    [[nodiscard]] const std::vector<int>& column_order() const { return column_order_; }

    /// Column (in class-block order) occupied by branch `b` (netlist position).
    [[nodiscard]] int column_of_branch(int b) const { return column_of_branch_[b]; }

    [[nodiscard]] int node_index(const std::string& node) const;
    [[nodiscard]] int tail_index(int branch) const { return tail_idx_[branch]; }
    [[nodiscard]] int head_index(int branch) const { return head_idx_[branch]; }

    [[nodiscard]] int branch_by_id(const std::string& id) const; // -1 if absent

    bool operator==(const Circuit& other) const;

private:
    std::vector<Branch> branches_;
    std::vector<std::string> nodes_;
    std::map<std::string, int> node_index_;
    std::vector<int> tail_idx_, head_idx_;
    std::array<std::vector<int>, kNumDeviceKinds> class_index_;
    std::vector<int> column_order_;
    std::vector<int> column_of_branch_;
};

// ============================================================================
// Netlist text format
// ============================================================================
//
//   <KIND> <id> <tail> <head> <coeff...>
//
// one branch per line, KIND in {M,C,L,R,V,I}, '#' starts a comment,
// whitespace separated.  Coefficients are the characteristic polynomial,
// low degree first (single value for C/L/V/I).

[[nodiscard]] Circuit parse_netlist(const std::string& text);
[[nodiscard]] Circuit load_netlist(const std::string& path);
[[nodiscard]] std::string serialize_netlist(const Circuit& circuit);

} // namespace tbwp
