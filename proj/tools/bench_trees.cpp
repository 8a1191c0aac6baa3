// Benchmark: serial vs OpenMP spanning-tree enumeration on random connected
// multigraphs.  Verifies that both implementations return identical families.

#include <chrono>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tbwp/trees.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace tbwp;

Circuit random_multigraph(int nodes, int branches, std::mt19937& rng) {
    std::vector<Branch> list;
    auto node_name = [](int k) { return "n" + std::to_string(k); };
    // Random spanning path first so the graph is connected.
    std::vector<int> order(nodes);
    for (int k = 0; k < nodes; ++k)
        order[k] = k;
    std::shuffle(order.begin(), order.end(), rng);
    int id = 0;
    for (int k = 1; k < nodes; ++k)
        list.push_back({"r" + std::to_string(id++), DeviceKind::Resistor,
                        node_name(order[k - 1]), node_name(order[k]),
                        Polynomial{std::vector<double>{1.0}}});
    std::uniform_int_distribution<int> pick(0, nodes - 1);
    while (static_cast<int>(list.size()) < branches) {
        const int a = pick(rng);
        int b = pick(rng);
        while (b == a)
            b = pick(rng);
        list.push_back({"r" + std::to_string(id++), DeviceKind::Resistor, node_name(a),
                        node_name(b), Polynomial{std::vector<double>{1.0}}});
    }
    return Circuit(list);
}

double elapsed_ms(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace

int main(int argc, char** argv) {
    int nodes = 12, branches = 22, trials = 3;
    unsigned seed = 1;
    CLI::App app{"spanning-tree enumeration benchmark"};
    app.add_option("--nodes", nodes, "node count");
    app.add_option("--branches", branches, "branch count");
    app.add_option("--trials", trials, "number of random graphs");
    app.add_option("--seed", seed, "RNG seed");
    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    std::cout << "OpenMP threads: " << omp_get_max_threads() << "\n";
#else
    std::cout << "built without OpenMP; parallel path falls back to serial\n";
#endif

    std::mt19937 rng(seed);
    double total_serial = 0.0, total_parallel = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Circuit circuit = random_multigraph(nodes, branches, rng);

        auto t0 = std::chrono::steady_clock::now();
        const TreeFamily serial = enumerate_trees_serial(circuit, TreeFamilyKind::All);
        const double ms_serial = elapsed_ms(t0);

        EnumerationOptions opts;
        opts.parallel = true;
        t0 = std::chrono::steady_clock::now();
        const TreeFamily parallel = enumerate_trees(circuit, TreeFamilyKind::All, opts);
        const double ms_parallel = elapsed_ms(t0);

        if (serial.trees.size() != parallel.trees.size()) {
            std::cerr << "MISMATCH: serial " << serial.trees.size() << " trees, parallel "
                      << parallel.trees.size() << "\n";
            return 1;
        }
        for (std::size_t k = 0; k < serial.trees.size(); ++k) {
            if (!(serial.trees[k] == parallel.trees[k])) {
                std::cerr << "MISMATCH at tree " << k << "\n";
                return 1;
            }
        }

        total_serial += ms_serial;
        total_parallel += ms_parallel;
        std::cout << "trial " << t << ": " << serial.trees.size() << " trees, serial "
                  << ms_serial << " ms, parallel " << ms_parallel << " ms\n";
    }
    std::cout << "totals: serial " << total_serial << " ms, parallel " << total_parallel
              << " ms, speedup " << (total_parallel > 0 ? total_serial / total_parallel : 0.0)
              << "x\n";
    return 0;
}
