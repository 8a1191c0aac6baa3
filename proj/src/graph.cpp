#include "tbwp/graph.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace tbwp {

namespace {

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

int component_count(const Circuit& c, const std::vector<bool>& branch_alive) {
    Dsu dsu(c.num_nodes());
    int comps = c.num_nodes();
    for (int b = 0; b < c.num_branches(); ++b)
        if (branch_alive[b] && dsu.unite(c.tail_index(b), c.head_index(b)))
            --comps;
    return comps;
}

// Tree-class preference for the default generating tree.
int class_rank(DeviceKind k) {
    switch (k) {
    case DeviceKind::VSource: return 0;
    case DeviceKind::Capacitor: return 1;
    case DeviceKind::Inductor: return 2;
    case DeviceKind::Resistor: return 3;
    case DeviceKind::Memristor: return 4;
    case DeviceKind::ISource: return 5;
    }
    return 6;
}

} // namespace

bool SpanningTree::contains(int branch) const {
    return std::binary_search(branches.begin(), branches.end(), branch);
}

bool is_spanning_tree(const Circuit& circuit, const SpanningTree& tree) {
    if (static_cast<int>(tree.branches.size()) != circuit.num_nodes() - 1)
        return false;
    Dsu dsu(circuit.num_nodes());
    for (int b : tree.branches) {
        if (b < 0 || b >= circuit.num_branches())
            return false;
        if (!dsu.unite(circuit.tail_index(b), circuit.head_index(b)))
            return false; // cycle
    }
    return true; // n-1 acyclic branches on n nodes span
}

SpanningTree default_tree(const Circuit& circuit) {
    // Prim-style growth: among branches joining the grown set to a new node,
    // take the best (class rank, then netlist position).  Deterministic.
    std::vector<bool> in_tree_node(circuit.num_nodes(), false);
    in_tree_node[0] = true;
    SpanningTree tree;
    while (static_cast<int>(tree.branches.size()) < circuit.num_nodes() - 1) {
        int best = -1, best_rank = 7;
        for (int b = 0; b < circuit.num_branches(); ++b) {
            if (in_tree_node[circuit.tail_index(b)] == in_tree_node[circuit.head_index(b)])
                continue;
            int rank = class_rank(circuit.branches()[b].kind);
            if (rank < best_rank) {
                best_rank = rank;
                best = b;
            }
        }
        if (best < 0)
            throw NetlistError("default_tree: circuit not connected");
        in_tree_node[circuit.tail_index(best)] = true;
        in_tree_node[circuit.head_index(best)] = true;
        tree.branches.push_back(best);
    }
    std::sort(tree.branches.begin(), tree.branches.end());
    return tree;
}

ReducedMatrices fundamental_matrices(const Circuit& circuit, const SpanningTree& tree) {
    if (!is_spanning_tree(circuit, tree))
        throw NetlistError("fundamental_matrices: not a spanning tree of this circuit");

    const int m = circuit.num_branches();
    const int n = circuit.num_nodes();

    ReducedMatrices rm;
    rm.generating_tree = tree;
    for (int b = 0; b < m; ++b)
        if (!tree.contains(b))
            rm.cotree.push_back(b);

    // Tree adjacency: node -> list of (branch, neighbor, +1 when traversed
    // tail->head).
    std::vector<std::vector<std::array<int, 3>>> adj(n);
    for (int b : tree.branches) {
        adj[circuit.tail_index(b)].push_back({b, circuit.head_index(b), +1});
        adj[circuit.head_index(b)].push_back({b, circuit.tail_index(b), -1});
    }

    rm.B = Eigen::MatrixXi::Zero(m - n + 1, m);
    for (std::size_t row = 0; row < rm.cotree.size(); ++row) {
        const int e = rm.cotree[row];
        // Loop: e (tail->head) followed by the tree path head(e) -> tail(e).
        const int src = circuit.head_index(e), dst = circuit.tail_index(e);
        std::vector<int> via_branch(n, -1), via_sign(n, 0), prev(n, -1);
        std::queue<int> bfs;
        bfs.push(src);
        std::vector<bool> seen(n, false);
        seen[src] = true;
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop();
            if (v == dst)
                break;
            for (const auto& [b, w, s] : adj[v])
                if (!seen[w]) {
                    seen[w] = true;
                    prev[w] = v;
                    via_branch[w] = b;
                    via_sign[w] = s;
                    bfs.push(w);
                }
        }
        rm.B(static_cast<int>(row), circuit.column_of_branch(e)) = 1;
        for (int v = dst; v != src; v = prev[v])
            rm.B(static_cast<int>(row), circuit.column_of_branch(via_branch[v])) = via_sign[v];
    }

    rm.Q = Eigen::MatrixXi::Zero(n - 1, m);
    for (std::size_t row = 0; row < tree.branches.size(); ++row) {
        const int f = tree.branches[row];
        // Head-side component of the tree with f removed.
        std::vector<bool> head_side(n, false);
        std::queue<int> bfs;
        bfs.push(circuit.head_index(f));
        head_side[circuit.head_index(f)] = true;
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop();
            for (const auto& [b, w, s] : adj[v])
                if (b != f && !head_side[w]) {
                    head_side[w] = true;
                    bfs.push(w);
                }
        }
        // Cutset: all branches crossing the split, oriented with f
        // (tail side -> head side is +1).
        for (int b = 0; b < m; ++b) {
            const bool t = head_side[circuit.tail_index(b)];
            const bool h = head_side[circuit.head_index(b)];
            if (t == h)
                continue;
            rm.Q(static_cast<int>(row), circuit.column_of_branch(b)) = h ? +1 : -1;
        }
    }
    return rm;
}

// ----------------------------------------------------------------------------
// Configuration detection
// ----------------------------------------------------------------------------

namespace {

bool kind_in(DeviceKind k, std::initializer_list<DeviceKind> classes) {
    return std::find(classes.begin(), classes.end(), k) != classes.end();
}

/// First cycle among branches of the given classes, as a sorted branch list;
/// empty when the class-restricted subgraph is a forest.
std::vector<int> find_class_loop(const Circuit& c, std::initializer_list<DeviceKind> classes) {
    const int n = c.num_nodes();
    Dsu dsu(n);
    std::vector<std::vector<std::array<int, 2>>> forest(n); // (branch, neighbor)
    for (int b = 0; b < c.num_branches(); ++b) {
        if (!kind_in(c.branches()[b].kind, classes))
            continue;
        const int t = c.tail_index(b), h = c.head_index(b);
        if (dsu.unite(t, h)) {
            forest[t].push_back({b, h});
            forest[h].push_back({b, t});
            continue;
        }
        // b closes a cycle: path t -> h in the current forest plus b.
        std::vector<int> prev(n, -1), via(n, -1);
        std::vector<bool> seen(n, false);
        std::queue<int> bfs;
        bfs.push(t);
        seen[t] = true;
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop();
            for (const auto& [e, w] : forest[v])
                if (!seen[w]) {
                    seen[w] = true;
                    prev[w] = v;
                    via[w] = e;
                    bfs.push(w);
                }
        }
        std::vector<int> cycle{b};
        for (int v = h; v != t; v = prev[v])
            cycle.push_back(via[v]);
        std::sort(cycle.begin(), cycle.end());
        return cycle;
    }
    return {};
}

/// All simple cycles of the class-restricted subgraph, each a sorted branch
/// list, enumerated once via the minimum-branch-index convention.
std::vector<std::vector<int>> enumerate_class_loops(const Circuit& c,
                                                    std::initializer_list<DeviceKind> classes) {
    const int n = c.num_nodes();
    std::vector<int> sub;
    for (int b = 0; b < c.num_branches(); ++b)
        if (kind_in(c.branches()[b].kind, classes))
            sub.push_back(b);

    std::vector<std::vector<int>> cycles;
    std::vector<std::vector<std::array<int, 2>>> adj(n);
    for (std::size_t i = 0; i < sub.size(); ++i) {
        const int e0 = sub[i];
        // Paths head(e0) -> tail(e0) through branches strictly after e0.
        adj.assign(n, {});
        for (std::size_t k = i + 1; k < sub.size(); ++k) {
            const int b = sub[k];
            adj[c.tail_index(b)].push_back({b, c.head_index(b)});
            adj[c.head_index(b)].push_back({b, c.tail_index(b)});
        }
        const int src = c.head_index(e0), dst = c.tail_index(e0);
        std::vector<bool> on_path(n, false);
        std::vector<int> path;
        on_path[src] = true;

        auto dfs = [&](auto&& self, int v) -> void {
            if (v == dst) {
                std::vector<int> cycle = path;
                cycle.push_back(e0);
                std::sort(cycle.begin(), cycle.end());
                cycles.push_back(std::move(cycle));
                return;
            }
            for (const auto& [b, w] : adj[v]) {
                if (on_path[w])
                    continue;
                on_path[w] = true;
                path.push_back(b);
                self(self, w);
                path.pop_back();
                on_path[w] = false;
            }
        };
        // A parallel copy of e0 itself is a 2-cycle; handle src == dst-free
        // via the same DFS (dst reachable directly when multiple branches
        // join the pair).
        dfs(dfs, src);
    }
    std::sort(cycles.begin(), cycles.end());
    cycles.erase(std::unique(cycles.begin(), cycles.end()), cycles.end());
    return cycles;
}

/// Minimal cutset (bond) consisting of branches of the given classes only;
/// empty list when none exists.  A K-cutset exists iff deleting every
/// K-branch increases the component count.
std::vector<int> find_class_cutset(const Circuit& c, std::initializer_list<DeviceKind> classes) {
    const int n = c.num_nodes();
    std::vector<bool> alive(c.num_branches(), true);
    for (int b = 0; b < c.num_branches(); ++b)
        if (kind_in(c.branches()[b].kind, classes))
            alive[b] = false;
    if (component_count(c, alive) == 1)
        return {};

    // C := component (in G - K) of node 0; W := a component of G[V \ C];
    // delta(W) is a bond contained in K.
    Dsu dsu(n);
    for (int b = 0; b < c.num_branches(); ++b)
        if (alive[b])
            dsu.unite(c.tail_index(b), c.head_index(b));
    const int c0 = dsu.find(0);

    Dsu rest(n);
    for (int b = 0; b < c.num_branches(); ++b) {
        const int t = c.tail_index(b), h = c.head_index(b);
        if (dsu.find(t) != c0 && dsu.find(h) != c0)
            rest.unite(t, h);
    }
    int w0 = -1;
    for (int v = 0; v < n; ++v)
        if (dsu.find(v) != c0) {
            w0 = rest.find(v);
            break;
        }
    std::vector<int> cut;
    for (int b = 0; b < c.num_branches(); ++b) {
        const int t = c.tail_index(b), h = c.head_index(b);
        const bool tin = dsu.find(t) != c0 && rest.find(t) == w0;
        const bool hin = dsu.find(h) != c0 && rest.find(h) == w0;
        if (tin != hin)
            cut.push_back(b);
    }
    return cut;
}

} // namespace

ConfigReport check_configurations(const Circuit& circuit) {
    using K = DeviceKind;
    ConfigReport rep;

    rep.vc_loop_witness = find_class_loop(circuit, {K::VSource, K::Capacitor});
    rep.vmc_loop_witness = find_class_loop(circuit, {K::VSource, K::Memristor, K::Capacitor});
    rep.vl_loop_witness = find_class_loop(circuit, {K::VSource, K::Inductor});
    rep.has_vc_loop = !rep.vc_loop_witness.empty();
    rep.has_vmc_loop = !rep.vmc_loop_witness.empty();
    rep.has_vl_loop = !rep.vl_loop_witness.empty();

    rep.il_cutset_witness = find_class_cutset(circuit, {K::ISource, K::Inductor});
    rep.ilc_cutset_witness =
        find_class_cutset(circuit, {K::ISource, K::Inductor, K::Capacitor});
    rep.ic_cutset_witness = find_class_cutset(circuit, {K::ISource, K::Capacitor});
    rep.has_il_cutset = !rep.il_cutset_witness.empty();
    rep.has_ilc_cutset = !rep.ilc_cutset_witness.empty();
    rep.has_ic_cutset = !rep.ic_cutset_witness.empty();

    rep.vml_loops = enumerate_class_loops(circuit, {K::VSource, K::Memristor, K::Inductor});
    rep.vml_loop_count = static_cast<int>(rep.vml_loops.size());
    if (rep.vml_loop_count == 1) {
        bool has_m = false, has_l = false;
        for (int b : rep.vml_loops.front()) {
            has_m |= circuit.branches()[b].kind == K::Memristor;
            has_l |= circuit.branches()[b].kind == K::Inductor;
        }
        rep.unique_vml_loop_with_m_and_l = has_m && has_l;
    }
    return rep;
}

bool verify_loop_witness(const Circuit& circuit, const std::vector<int>& branches) {
    if (branches.empty())
        return false;
    std::map<int, int> degree;
    for (int b : branches) {
        if (b < 0 || b >= circuit.num_branches())
            return false;
        degree[circuit.tail_index(b)]++;
        degree[circuit.head_index(b)]++;
    }
    for (const auto& [node, d] : degree)
        if (d != 2)
            return false;
    // Connectivity of the cycle's branch set.
    Dsu dsu(circuit.num_nodes());
    int parts = static_cast<int>(degree.size());
    for (int b : branches)
        if (dsu.unite(circuit.tail_index(b), circuit.head_index(b)))
            --parts;
    return parts == 1;
}

bool verify_cutset_witness(const Circuit& circuit, const std::vector<int>& branches) {
    if (branches.empty())
        return false;
    std::vector<bool> alive(circuit.num_branches(), true);
    for (int b : branches) {
        if (b < 0 || b >= circuit.num_branches())
            return false;
        alive[b] = false;
    }
    if (component_count(circuit, alive) != 2)
        return false;
    // Minimality: restoring any one branch reconnects.
    for (int b : branches) {
        alive[b] = true;
        if (component_count(circuit, alive) != 1)
            return false;
        alive[b] = false;
    }
    return true;
}

} // namespace tbwp
