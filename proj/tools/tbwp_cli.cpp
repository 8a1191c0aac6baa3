// Command-line front end: analyze / trees / pencil / simulate / check-ode.
//
// Exit codes: 0 certified, 1 refuted, 2 inconclusive (for the verdict
// commands analyze and check-ode; 0 = success otherwise), 64 input/parse
// errors, 65 runtime failures.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tbwp/analysis.hpp"
#include "tbwp/dae.hpp"
#include "tbwp/field_file.hpp"
#include "tbwp/json_io.hpp"
#include "tbwp/sim.hpp"
#include "tbwp/trees.hpp"

namespace {

using namespace tbwp;

constexpr int kExitUsage = 64;
constexpr int kExitRuntime = 65;

int verdict_exit(Verdict v) {
    switch (v) {
    case Verdict::Certified:
        return 0;
    case Verdict::Refuted:
        return 1;
    default:
        return 2;
    }
}

// --at accepts "q=0.3" as well as a bare "0.3".
double parse_at(const std::string& raw) {
    std::string s = raw;
    if (s.rfind("q=", 0) == 0)
        s = s.substr(2);
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--at", "expected q=<real> or <real>, got '" + raw + "'");
    }
    if (pos != s.size())
        throw CLI::ValidationError("--at", "expected q=<real> or <real>, got '" + raw + "'");
    return v;
}

void set_tolerance(Tolerances& tols, const std::string& key, const std::string& value,
                   const std::string& where) {
    double v = 0.0;
    std::size_t pos = 0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != value.size())
        throw CLI::ValidationError(where, "bad tolerance value '" + value + "'");
    if (key == "zero")
        tols.zero = v;
    else if (key == "realpart")
        tols.realpart = v;
    else if (key == "trans")
        tols.trans = v;
    else if (key == "lsq")
        tols.lsq = v;
    else if (key == "line")
        tols.line = v;
    else if (key == "newton")
        tols.newton = v;
    else if (key == "newton_max_iter")
        tols.newton_max_iter = static_cast<int>(v);
    else if (key == "band")
        tols.band = v;
    else
        throw CLI::ValidationError(where, "unknown tolerance '" + key + "'");
}

// Optional key=value config file, then --tol flags on top.
Tolerances resolve_tolerances(const std::string& config_path,
                              const std::vector<std::string>& overrides) {
    Tolerances tols;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in)
            throw CLI::ValidationError("--config", "cannot open '" + config_path + "'");
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            std::string compact;
            for (char c : line)
                if (!std::isspace(static_cast<unsigned char>(c)))
                    compact += c;
            if (compact.empty())
                continue;
            const std::size_t eq = compact.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("--config", config_path + ":" +
                                                           std::to_string(lineno) +
                                                           ": expected key=value");
            set_tolerance(tols, compact.substr(0, eq), compact.substr(eq + 1), "--config");
        }
    }
    for (const std::string& o : overrides) {
        const std::size_t eq = o.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--tol", "expected key=value, got '" + o + "'");
        set_tolerance(tols, o.substr(0, eq), o.substr(eq + 1), "--tol");
    }
    return tols;
}

const char* outcome_tag(Outcome o) {
    switch (o) {
    case Outcome::Pass:
        return "[pass]";
    case Outcome::Fail:
        return "[fail]";
    default:
        return "[inconclusive]";
    }
}

void print_conditions(const std::vector<ConditionResult>& conditions, const char* indent) {
    for (const auto& c : conditions)
        std::cout << indent << outcome_tag(c.outcome) << " " << c.id << ": " << c.message
                  << "\n";
}

std::string empty_family_explanation(TreeFamilyKind kind, const ConfigReport& config) {
    if (kind == TreeFamilyKind::Proper) {
        if (config.has_vc_loop)
            return "a loop of voltage sources and capacitors makes a proper tree impossible";
        if (config.has_il_cutset)
            return "a cutset of current sources and inductors makes a proper tree impossible";
    }
    if (kind == TreeFamilyKind::LProper) {
        if (config.has_vl_loop)
            return "a loop of voltage sources and inductors makes an L-proper tree impossible";
        if (config.has_ic_cutset)
            return "a cutset of current sources and capacitors makes an L-proper tree "
                   "impossible";
    }
    return "the family constraints cannot be satisfied on this circuit";
}

// ----------------------------------------------------------------------------

struct CommonOpts {
    std::string netlist;
    std::string at = "q=0";
    std::string json_path;
    std::string config_path;
    std::vector<std::string> tol_overrides;
};

void add_common(CLI::App* sub, CommonOpts& opts, bool with_at = true) {
    sub->add_option("netlist", opts.netlist, "netlist file")->required();
    if (with_at)
        sub->add_option("--at", opts.at, "memristor charge, q=<real> or <real>");
    sub->add_option("--json", opts.json_path, "write the JSON report here");
    sub->add_option("--config", opts.config_path, "key=value tolerance file");
    sub->add_option("--tol", opts.tol_overrides, "tolerance override key=value (repeatable)");
}

int run_analyze(const CommonOpts& opts) {
    const Tolerances tols = resolve_tolerances(opts.config_path, opts.tol_overrides);
    const double q_star = parse_at(opts.at);
    const Circuit circuit = load_netlist(opts.netlist);
    const CircuitModel model = assemble_dae(circuit);

    const EquilibriumPoint eq = find_equilibrium(model.dae, q_star, {}, tols);
    const CircuitTbwpReport report = check_circuit_tbwp(model, eq, tols);
    const NonpassiveReport nonpassive = check_nonpassive_zero_multiplicity(model, eq, tols);

    std::vector<std::string> artifacts;
    if (!opts.json_path.empty())
        artifacts.push_back(std::filesystem::path(opts.json_path).filename().string());
    const AnalysisBundle bundle =
        make_analysis_bundle(model, q_star, report, nonpassive, artifacts, tols);
    if (!opts.json_path.empty())
        write_json_file(opts.json_path, bundle.json);

    std::cout << "analyze " << opts.netlist << " at q = " << q_star << "\n";
    std::cout << "structural verdict: " << to_string(report.structural_verdict) << "\n";
    print_conditions(report.structural, "  ");
    std::cout << "numeric verdict: " << to_string(report.numeric_verdict) << "\n";
    print_conditions(report.numeric.conditions, "  ");
    std::cout << "nonpassive check: " << to_string(nonpassive.overall) << " (proper sum "
              << nonpassive.proper_sum << " over " << nonpassive.proper_tree_count
              << " trees, L-proper sum " << nonpassive.lproper_sum << " over "
              << nonpassive.lproper_tree_count << " trees)\n";
    std::cout << "verdict: " << to_string(report.verdict) << "\n";
    return verdict_exit(report.verdict);
}

int run_trees(const CommonOpts& opts, const std::string& family_arg) {
    const Tolerances tols = resolve_tolerances(opts.config_path, opts.tol_overrides);
    (void)tols;
    const double q_m = parse_at(opts.at);
    const Circuit circuit = load_netlist(opts.netlist);
    const TreeFamilyKind kind = family_from_name(family_arg);

    TreeFamily family = enumerate_trees(circuit, kind);
    OperatingValues point;
    point.q_m = q_m;
    point.i_r = Vector::Zero(circuit.count(DeviceKind::Resistor));
    const double sum = mr_product_sum(circuit, family, point);

    std::string explanation;
    if (family.trees.empty())
        explanation = empty_family_explanation(kind, check_configurations(circuit));

    std::cout << family_name(kind) << " trees of " << opts.netlist << ": "
              << family.trees.size() << "\n";
    for (std::size_t i = 0; i < family.trees.size(); ++i) {
        std::cout << "  {";
        const auto& branches = family.trees[i].branches;
        for (std::size_t k = 0; k < branches.size(); ++k)
            std::cout << (k ? ", " : "") << circuit.branches()[branches[k]].id;
        std::cout << "}  cotree product " << family.cotree_products[i] << "\n";
    }
    if (!explanation.empty())
        std::cout << "  (" << explanation << ")\n";
    std::cout << "MR-product sum at q_m = " << q_m << ": " << sum << "\n";

    if (!opts.json_path.empty()) {
        Json j{{"schema", 1},
               {"command", "trees"},
               {"netlist", std::filesystem::path(opts.netlist).filename().string()},
               {"q_m", q_m},
               {"family", to_json(family, circuit)},
               {"sum", sum}};
        if (!explanation.empty())
            j["explanation"] = explanation;
        write_json_file(opts.json_path, j);
    }
    return 0;
}

int run_pencil(const CommonOpts& opts) {
    const Tolerances tols = resolve_tolerances(opts.config_path, opts.tol_overrides);
    const double q_m = parse_at(opts.at);
    const Circuit circuit = load_netlist(opts.netlist);
    const CircuitModel model = assemble_dae(circuit);
    const EquilibriumPoint eq = find_equilibrium(model.dae, q_m, {}, tols);
    const PencilSpectrum ps = pencil_spectrum(model.dae, eq, tols);

    std::cout << "pencil spectrum of " << opts.netlist << " at q_m = " << q_m << "\n";
    std::cout << "  eigenvalues:";
    for (int k = 0; k < ps.spectrum.eigenvalues.size(); ++k) {
        const auto ev = ps.spectrum.eigenvalues(k);
        std::cout << " " << ev.real();
        if (ev.imag() != 0.0)
            std::cout << (ev.imag() > 0 ? "+" : "") << ev.imag() << "i";
    }
    std::cout << "\n";
    std::cout << "  zero cluster size: " << ps.spectrum.zero_cluster.size() << "\n";
    std::cout << "  corank f': " << ps.corank_f_prime << ", corank F': " << ps.corank_F_prime
              << ", corank g_z: " << ps.corank_g_z << "\n";
    std::cout << "  g_z condition: " << ps.gz_condition << "\n";

    if (!opts.json_path.empty()) {
        Json j{{"schema", 1},
               {"command", "pencil"},
               {"netlist", std::filesystem::path(opts.netlist).filename().string()},
               {"q_m", q_m},
               {"equilibrium",
                Json{{"residual_h", eq.residual_h},
                     {"residual_g", eq.residual_g},
                     {"newton_iterations", eq.newton_iterations}}},
               {"pencil", to_json(ps)}};
        write_json_file(opts.json_path, j);
    }
    return 0;
}

int run_simulate(const CommonOpts& opts, const ExchangeParams& params,
                 const std::string& out_dir) {
    const Tolerances tols = resolve_tolerances(opts.config_path, opts.tol_overrides);
    const double q_star = parse_at(opts.at);
    const Circuit circuit = load_netlist(opts.netlist);
    const CircuitModel model = assemble_dae(circuit);

    // The experiment is most meaningful at a certified bifurcation point, but
    // it runs regardless; the certification verdict rides along in the output.
    const CircuitTbwpReport certification = check_circuit_tbwp(model, q_star, tols);
    const ExchangeReport report = stability_exchange_experiment(model, q_star, params, tols);

    std::filesystem::create_directories(out_dir);
    const auto csv_plus = std::filesystem::path(out_dir) / "trajectory_plus.csv";
    const auto csv_minus = std::filesystem::path(out_dir) / "trajectory_minus.csv";
    const auto json_file = std::filesystem::path(out_dir) / "exchange.json";
    write_trajectory_csv(csv_plus.string(), report.plus_side, model.dae.y_names);
    write_trajectory_csv(csv_minus.string(), report.minus_side, model.dae.y_names);

    Json j{{"schema", 1},
           {"command", "simulate"},
           {"netlist", std::filesystem::path(opts.netlist).filename().string()},
           {"q_star", q_star},
           {"certification_verdict", to_string(certification.verdict)},
           {"exchange", to_json(report)},
           {"artifacts",
            Json::array({csv_plus.filename().string(), csv_minus.filename().string(),
                         json_file.filename().string()})}};
    write_json_file(json_file.string(), j);
    if (!opts.json_path.empty())
        write_json_file(opts.json_path, j);

    std::cout << "simulate " << opts.netlist << " around q* = " << q_star
              << " (certification: " << to_string(certification.verdict) << ")\n";
    for (const SideResult* side : {&report.plus_side, &report.minus_side}) {
        std::cout << "  " << side->label << " (q_m = " << side->q_m
                  << "): " << to_string(side->verdict);
        if (side->error.empty())
            std::cout << ", max distance " << side->max_distance << ", final distance "
                      << side->final_distance << ", max |g| "
                      << side->max_constraint_residual;
        else
            std::cout << " (" << side->error << ")";
        std::cout << "\n";
    }
    std::cout << "wrote " << csv_plus.string() << ", " << csv_minus.string() << ", "
              << json_file.string() << "\n";
    return 0;
}

int run_check_ode(const CommonOpts& opts) {
    const Tolerances tols = resolve_tolerances(opts.config_path, opts.tol_overrides);
    const FieldSpec spec = load_field_file(opts.netlist);
    const PolyField& field = spec.field;
    const TbwpReport report = check_ode_tbwp(
        [&field](const Vector& x) { return field.eval(x); },
        [&field](const Vector& x) { return field.jacobian(x); }, spec.point, spec.direction,
        tols);

    std::cout << "check-ode " << opts.netlist << "\n";
    print_conditions(report.conditions, "  ");
    std::cout << "verdict: " << to_string(report.verdict) << "\n";

    if (!opts.json_path.empty()) {
        Json j{{"schema", 1},
               {"command", "check-ode"},
               {"field_file", std::filesystem::path(opts.netlist).filename().string()},
               {"report", to_json(report)}};
        write_json_file(opts.json_path, j);
    }
    return verdict_exit(report.verdict);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Detects and certifies transcritical bifurcations without parameters along "
                 "lines of equilibria in memristive circuits"};
    app.require_subcommand(1);

    CommonOpts analyze_opts, trees_opts, pencil_opts, simulate_opts, ode_opts;
    std::string family_arg = "all";
    ExchangeParams params;
    std::string out_dir = ".";

    CLI::App* analyze = app.add_subcommand("analyze", "full TBWP certification of a netlist");
    add_common(analyze, analyze_opts);

    CLI::App* trees = app.add_subcommand("trees", "spanning-tree families and MR-product sums");
    add_common(trees, trees_opts);
    trees->add_option("--family", family_arg, "all | proper | l-proper");

    CLI::App* pencil = app.add_subcommand("pencil", "pencil spectrum at an equilibrium");
    add_common(pencil, pencil_opts);

    CLI::App* simulate =
        app.add_subcommand("simulate", "stability-exchange experiment on both sides of q*");
    add_common(simulate, simulate_opts);
    simulate->add_option("--dq", params.dq, "offset of q_m on each side");
    simulate->add_option("--eps", params.eps, "initial perturbation off the line");
    simulate->add_option("--tmax", params.t_end, "integration horizon");
    simulate->add_option("--step", params.step, "RK4 step size");
    simulate->add_option("--out", out_dir, "directory for CSV/JSON artifacts");

    CLI::App* check_ode =
        app.add_subcommand("check-ode", "certification check of a polynomial vector field");
    check_ode->add_option("field_file", ode_opts.netlist, "vector field description")
        ->required();
    check_ode->add_option("--json", ode_opts.json_path, "write the JSON report here");
    check_ode->add_option("--config", ode_opts.config_path, "key=value tolerance file");
    check_ode->add_option("--tol", ode_opts.tol_overrides,
                          "tolerance override key=value (repeatable)");

    try {
        app.parse(argc, argv);
        if (analyze->parsed())
            return run_analyze(analyze_opts);
        if (trees->parsed())
            return run_trees(trees_opts, family_arg);
        if (pencil->parsed())
            return run_pencil(pencil_opts);
        if (simulate->parsed())
            return run_simulate(simulate_opts, params, out_dir);
        if (check_ode->parsed())
            return run_check_ode(ode_opts);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const NetlistError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const FieldFileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
