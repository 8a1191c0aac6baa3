#include "tbwp/trees.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tbwp {

const char* family_name(TreeFamilyKind k) {
    switch (k) {
    case TreeFamilyKind::All: return "all";
    case TreeFamilyKind::Proper: return "proper";
    case TreeFamilyKind::LProper: return "l-proper";
    }
    return "?";
}

TreeFamilyKind family_from_name(const std::string& name) {
    if (name == "all")
        return TreeFamilyKind::All;
    if (name == "proper")
        return TreeFamilyKind::Proper;
    if (name == "l-proper" || name == "lproper")
        return TreeFamilyKind::LProper;
    throw std::invalid_argument("unknown tree family '" + name + "'");
}

namespace {

// Union-find with an undo stack (union by size, no path compression so that
// rollback is exact).
struct RollbackDsu {
    std::vector<int> parent, size;
    std::vector<int> undo; // roots that were attached

    explicit RollbackDsu(int n) : parent(n), size(n, 1) {
        for (int i = 0; i < n; ++i)
            parent[i] = i;
    }
    int find(int a) const {
        while (parent[a] != a)
            a = parent[a];
        return a;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        if (size[a] > size[b])
            std::swap(a, b);
        parent[a] = b;
        size[b] += size[a];
        undo.push_back(a);
        return true;
    }
    void rollback(std::size_t mark) {
        while (undo.size() > mark) {
            int a = undo.back();
            undo.pop_back();
            size[parent[a]] -= size[a];
            parent[a] = a;
        }
    }
};

struct FamilyConstraints {
    std::vector<int> required; // contracted first; in every tree
    std::vector<int> optional; // free include/exclude decisions
    bool satisfiable = true;
};

bool family_requires(TreeFamilyKind kind, DeviceKind k) {
    if (kind == TreeFamilyKind::Proper)
        return k == DeviceKind::VSource || k == DeviceKind::Capacitor;
    if (kind == TreeFamilyKind::LProper)
        return k == DeviceKind::VSource || k == DeviceKind::Inductor;
    return false;
}

bool family_forbids(TreeFamilyKind kind, DeviceKind k) {
    if (kind == TreeFamilyKind::Proper)
        return k == DeviceKind::ISource || k == DeviceKind::Inductor;
    if (kind == TreeFamilyKind::LProper)
        return k == DeviceKind::ISource || k == DeviceKind::Capacitor;
    return false;
}

FamilyConstraints split_constraints(const Circuit& c, TreeFamilyKind kind) {
    FamilyConstraints fc;
    for (int b = 0; b < c.num_branches(); ++b) {
        DeviceKind k = c.branches()[b].kind;
        if (family_requires(kind, k))
            fc.required.push_back(b);
        else if (!family_forbids(kind, k))
            fc.optional.push_back(b);
    }
    return fc;
}

// Feasibility: can the remaining optional branches (from index i on) connect
// every current component?
bool can_still_connect(const Circuit& c, RollbackDsu& dsu, const std::vector<int>& optional,
                       std::size_t i, int components_needed) {
    if (components_needed == 1)
        return true;
    std::size_t mark = dsu.undo.size();
    int comps = components_needed;
    for (std::size_t k = i; k < optional.size() && comps > 1; ++k)
        if (dsu.unite(c.tail_index(optional[k]), c.head_index(optional[k])))
            --comps;
    dsu.rollback(mark);
    return comps == 1;
}

struct EnumerationState {
    const Circuit* circuit;
    const std::vector<int>* optional;
    std::vector<int> chosen; // optional branches currently included
    RollbackDsu dsu;
    int components; // current component count over all nodes
};

void enumerate_rec(EnumerationState& st, std::size_t i, std::vector<std::vector<int>>& out) {
    if (st.components == 1) {
        out.push_back(st.chosen);
        return;
    }
    if (i >= st.optional->size())
        return;
    if (!can_still_connect(*st.circuit, st.dsu, *st.optional, i, st.components))
        return;

    const int b = (*st.optional)[i];
    const int t = st.circuit->tail_index(b), h = st.circuit->head_index(b);
    if (st.dsu.find(t) == st.dsu.find(h)) {
        enumerate_rec(st, i + 1, out); // would close a cycle: forced skip
        return;
    }
    // include b
    std::size_t mark = st.dsu.undo.size();
    st.dsu.unite(t, h);
    st.chosen.push_back(b);
    --st.components;
    enumerate_rec(st, i + 1, out);
    ++st.components;
    st.chosen.pop_back();
    st.dsu.rollback(mark);
    // exclude b
    enumerate_rec(st, i + 1, out);
}

/// Partial decision prefix used to split work across threads: include /
/// exclude choices for the first optional branches.
struct Frontier {
    std::vector<int> chosen;
    std::size_t next = 0;
};

std::vector<Frontier> build_frontier(const Circuit& c, const FamilyConstraints& fc,
                                     const RollbackDsu& base, int base_components,
                                     std::size_t target) {
    std::vector<Frontier> frontier{Frontier{}};
    while (frontier.size() < target) {
        std::vector<Frontier> next;
        bool expanded = false;
        for (const auto& fr : frontier) {
            if (fr.next >= fc.optional.size()) {
                next.push_back(fr);
                continue;
            }
            RollbackDsu dsu = base;
            int comps = base_components;
            bool dead = false;
            for (int b : fr.chosen) {
                if (dsu.unite(c.tail_index(b), c.head_index(b)))
                    --comps;
                else
                    dead = true;
            }
            if (dead || comps == 1) {
                next.push_back(fr); // leaf; recursion will finish it quickly
                continue;
            }
            expanded = true;
            Frontier inc = fr;
            inc.chosen.push_back(fc.optional[fr.next]);
            inc.next = fr.next + 1;
            Frontier exc = fr;
            exc.next = fr.next + 1;
            next.push_back(inc);
            next.push_back(exc);
        }
        frontier = std::move(next);
        if (!expanded)
            break;
    }
    return frontier;
}

bool id_sequence_less(const Circuit& c, const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<std::string> ia, ib;
    ia.reserve(a.size());
    ib.reserve(b.size());
    for (int x : a)
        ia.push_back(c.branches()[x].id);
    for (int x : b)
        ib.push_back(c.branches()[x].id);
    std::sort(ia.begin(), ia.end());
    std::sort(ib.begin(), ib.end());
    return ia < ib;
}

TreeFamily finalize_family(const Circuit& c, TreeFamilyKind kind,
                           std::vector<std::vector<int>> raw) {
    // Canonical order: lexicographic in the sorted branch-id sequence.
    std::sort(raw.begin(), raw.end(), [&](const auto& a, const auto& b) {
        return id_sequence_less(c, a, b);
    });
    TreeFamily fam;
    fam.kind = kind;
    fam.trees.reserve(raw.size());
    for (auto& branches : raw) {
        std::sort(branches.begin(), branches.end());
        fam.trees.push_back(SpanningTree{std::move(branches)});
    }
    return fam;
}

std::vector<std::vector<int>> run_enumeration(const Circuit& c, TreeFamilyKind kind,
                                              bool parallel) {
    FamilyConstraints fc = split_constraints(c, kind);

    RollbackDsu base(c.num_nodes());
    int components = c.num_nodes();
    for (int b : fc.required) {
        if (!base.unite(c.tail_index(b), c.head_index(b)))
            return {}; // required branches close a loop: unsatisfiable
        --components;
    }

    std::vector<std::vector<int>> raw;

#ifdef _OPENMP
    if (parallel && components > 1 && fc.optional.size() >= 4) {
        const std::size_t target =
            std::max<std::size_t>(4, 4 * static_cast<std::size_t>(omp_get_max_threads()));
        std::vector<Frontier> frontier = build_frontier(c, fc, base, components, target);
        std::vector<std::vector<std::vector<int>>> buckets(frontier.size());

#pragma omp parallel for schedule(dynamic)
        for (std::size_t fi = 0; fi < frontier.size(); ++fi) {
            const Frontier& fr = frontier[fi];
            EnumerationState st{&c, &fc.optional, {}, base, components};
            bool dead = false;
            for (int b : fr.chosen) {
                if (st.dsu.unite(c.tail_index(b), c.head_index(b))) {
                    st.chosen.push_back(b);
                    --st.components;
                } else {
                    dead = true;
                }
            }
            if (!dead)
                enumerate_rec(st, fr.next, buckets[fi]);
        }
        for (auto& bucket : buckets)
            for (auto& tree : bucket)
                raw.push_back(std::move(tree));
    } else
#endif
    {
        (void)parallel;
        EnumerationState st{&c, &fc.optional, {}, std::move(base), components};
        enumerate_rec(st, 0, raw);
    }

    // Attach the required branches to every result.
    for (auto& tree : raw)
        tree.insert(tree.end(), fc.required.begin(), fc.required.end());
    return raw;
}

} // namespace

TreeFamily enumerate_trees(const Circuit& circuit, TreeFamilyKind kind,
                           const EnumerationOptions& opts) {
    return finalize_family(circuit, kind, run_enumeration(circuit, kind, opts.parallel));
}

TreeFamily enumerate_trees_serial(const Circuit& circuit, TreeFamilyKind kind) {
    return finalize_family(circuit, kind, run_enumeration(circuit, kind, false));
}

double mr_product_sum(const Circuit& circuit, TreeFamily& family, const OperatingValues& point) {
    // Operating value per branch: memristance at q_m for memristors,
    // incremental resistance at the branch current for resistors.
    const auto& r_index = circuit.class_index(DeviceKind::Resistor);
    std::vector<double> value(circuit.num_branches(), 1.0);
    std::vector<bool> counts(circuit.num_branches(), false);
    for (int b : circuit.class_index(DeviceKind::Memristor)) {
        value[b] = circuit.branches()[b].characteristic.eval(point.q_m);
        counts[b] = true;
    }
    for (std::size_t k = 0; k < r_index.size(); ++k) {
        const double i_rk = k < static_cast<std::size_t>(point.i_r.size()) ? point.i_r[k] : 0.0;
        value[r_index[k]] = circuit.branches()[r_index[k]].characteristic.eval(i_rk);
        counts[r_index[k]] = true;
    }

    family.cotree_products.assign(family.trees.size(), 1.0);
    double sum = 0.0;
    for (std::size_t t = 0; t < family.trees.size(); ++t) {
        double prod = 1.0;
        for (int b = 0; b < circuit.num_branches(); ++b)
            if (counts[b] && !family.trees[t].contains(b))
                prod *= value[b];
        family.cotree_products[t] = prod;
        sum += prod;
    }
    return sum;
}

} // namespace tbwp
