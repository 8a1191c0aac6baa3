#include "tbwp/circuit.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace tbwp {

char device_letter(DeviceKind k) {
    static constexpr char letters[] = {'M', 'C', 'L', 'R', 'V', 'I'};
    return letters[static_cast<int>(k)];
}

const char* device_name(DeviceKind k) {
    static constexpr const char* names[] = {"memristor", "capacitor", "inductor",
                                            "resistor",  "vsource",   "isource"};
    return names[static_cast<int>(k)];
}

namespace {

// Union-find over node indices, used for the connectivity check.
struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) {
        for (int i = 0; i < n; ++i)
            parent[i] = i;
    }
    int find(int a) {
        while (parent[a] != a)
            a = parent[a] = parent[parent[a]];
        return a;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        parent[a] = b;
        return true;
    }
};

} // namespace

Circuit::Circuit(std::vector<Branch> branches) : branches_(std::move(branches)) {
    if (branches_.empty())
        throw NetlistError("empty circuit: no branches");

    std::set<std::string> ids;
    for (const auto& b : branches_) {
        if (b.tail == b.head)
            throw NetlistError("self-loop on branch '" + b.id + "'");
        if (!ids.insert(b.id).second)
            throw NetlistError("duplicate branch id '" + b.id + "'");
    }

    for (const auto& b : branches_) {
        for (const auto& node : {b.tail, b.head}) {
            if (!node_index_.count(node)) {
                node_index_[node] = static_cast<int>(nodes_.size());
                nodes_.push_back(node);
            }
        }
    }

    tail_idx_.reserve(branches_.size());
    head_idx_.reserve(branches_.size());
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        tail_idx_.push_back(node_index_.at(branches_[i].tail));
        head_idx_.push_back(node_index_.at(branches_[i].head));
        class_index_[static_cast<int>(branches_[i].kind)].push_back(static_cast<int>(i));
    }

    Dsu dsu(num_nodes());
    for (int b = 0; b < num_branches(); ++b)
        dsu.unite(tail_idx_[b], head_idx_[b]);
    for (int v = 1; v < num_nodes(); ++v)
        if (dsu.find(v) != dsu.find(0))
            throw NetlistError("disconnected circuit: node '" + nodes_[v] +
                               "' unreachable from '" + nodes_[0] + "'");

    column_of_branch_.assign(branches_.size(), -1);
    for (const auto& cls : class_index_)
        for (int b : cls) {
            column_of_branch_[b] = static_cast<int>(column_order_.size());
            column_order_.push_back(b);
        }
}

int Circuit::node_index(const std::string& node) const {
    auto it = node_index_.find(node);
    if (it == node_index_.end())
        throw NetlistError("unknown node '" + node + "'");
    return it->second;
}

int Circuit::branch_by_id(const std::string& id) const {
    for (int i = 0; i < num_branches(); ++i)
        if (branches_[i].id == id)
            return i;
    return -1;
}

bool Circuit::operator==(const Circuit& other) const {
    if (branches_.size() != other.branches_.size())
        return false;
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        const auto& a = branches_[i];
        const auto& b = other.branches_[i];
        if (a.id != b.id || a.kind != b.kind || a.tail != b.tail || a.head != b.head ||
            !(a.characteristic == b.characteristic))
            return false;
    }
    return true;
}

namespace {

DeviceKind kind_from_letter(const std::string& token, int line) {
    if (token.size() == 1) {
        switch (token[0]) {
        case 'M': return DeviceKind::Memristor;
        case 'C': return DeviceKind::Capacitor;
        case 'L': return DeviceKind::Inductor;
        case 'R': return DeviceKind::Resistor;
        case 'V': return DeviceKind::VSource;
        case 'I': return DeviceKind::ISource;
        default: break;
        }
    }
    throw NetlistError("unknown device kind '" + token + "'", line);
}

double parse_coeff(const std::string& token, int line) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw NetlistError("bad coefficient '" + token + "'", line);
    }
    if (pos != token.size())
        throw NetlistError("bad coefficient '" + token + "'", line);
    return value;
}

} // namespace

Circuit parse_netlist(const std::string& text) {
    std::vector<Branch> branches;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::istringstream line(raw);
        std::vector<std::string> tokens;
        for (std::string tok; line >> tok;)
            tokens.push_back(tok);
        if (tokens.empty())
            continue;
        if (tokens.size() < 4)
            throw NetlistError("expected '<KIND> <id> <tail> <head> <coeff...>'", line_no);

        Branch b;
        b.kind = kind_from_letter(tokens[0], line_no);
        b.id = tokens[1];
        b.tail = tokens[2];
        b.head = tokens[3];
        if (b.tail == b.head)
            throw NetlistError("self-loop on branch '" + b.id + "'", line_no);

        std::vector<double> coeffs;
        for (std::size_t i = 4; i < tokens.size(); ++i)
            coeffs.push_back(parse_coeff(tokens[i], line_no));
        if (coeffs.empty())
            throw NetlistError("missing characteristic for branch '" + b.id + "'", line_no);

        const bool constant_only = b.kind == DeviceKind::Capacitor ||
                                   b.kind == DeviceKind::Inductor ||
                                   b.kind == DeviceKind::VSource ||
                                   b.kind == DeviceKind::ISource;
        if (constant_only && coeffs.size() != 1)
            throw NetlistError(std::string(device_name(b.kind)) + " '" + b.id +
                                   "' takes a single constant value",
                               line_no);
        b.characteristic = Polynomial(std::move(coeffs));
        branches.push_back(std::move(b));
    }
    return Circuit(std::move(branches));
}

Circuit load_netlist(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw NetlistError("cannot open netlist '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_netlist(buffer.str());
}

std::string serialize_netlist(const Circuit& circuit) {
    std::ostringstream out;
    for (const auto& b : circuit.branches())
        out << device_letter(b.kind) << ' ' << b.id << ' ' << b.tail << ' ' << b.head << ' '
            << b.characteristic.to_netlist_tokens() << '\n';
    return out.str();
}

} // namespace tbwp
