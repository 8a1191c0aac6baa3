#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tbwp/json_io.hpp"

using namespace tbwp;

namespace {

std::string circuits_dir() { return TBWP_CIRCUITS_DIR; }

} // namespace

TEST_CASE("json: tolerances round trip") {
    Tolerances tols;
    tols.zero = 1e-9;
    tols.band = 5.0;
    Json j = to_json(tols);
    CHECK(j.at("zero").get<double>() == 1e-9);
    CHECK(j.at("band").get<double>() == 5.0);
    CHECK(j.at("newton_max_iter").get<int>() == 50);
    CHECK(j.contains("realpart"));
    CHECK(j.contains("trans"));
    CHECK(j.contains("lsq"));
    CHECK(j.contains("line"));
}

TEST_CASE("json: spectra serialize complex eigenvalues as re/im pairs") {
    Matrix A(2, 2);
    A << 0.0, 1.0, -1.0, 0.0; // eigenvalues +-i
    Spectrum s = classify_spectrum(A);
    Json j = to_json(s);
    REQUIRE(j.at("eigenvalues").size() == 2);
    CHECK(j.at("eigenvalues")[0].contains("re"));
    CHECK(j.at("eigenvalues")[0].contains("im"));
    CHECK(j.at("eigenvalues")[0].at("im").get<double>() == doctest::Approx(-1.0));
    CHECK(j.contains("zero_cluster"));
    CHECK(j.contains("critical"));
    CHECK(j.at("scale").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("json: tree families carry branch ids and products") {
    Circuit c = load_netlist(circuits_dir() + "/mrl.net");
    TreeFamily fam = enumerate_trees(c, TreeFamilyKind::LProper);
    (void)mr_product_sum(c, fam, {0.3, {}});
    Json j = to_json(fam, c);
    CHECK(j.at("family") == "l-proper");
    CHECK(j.at("count").get<int>() == 2);
    REQUIRE(j.at("trees").size() == 2);
    CHECK(j.at("trees")[0][0].get<std::string>() == "m1");
    REQUIRE(j.at("cotree_products").size() == 2);
    CHECK(j.at("cotree_products")[1].get<double>() == doctest::Approx(-0.7));
}

TEST_CASE("json: circuit summary") {
    Circuit c = load_netlist(circuits_dir() + "/mrl.net");
    Json j = circuit_summary_json(c);
    CHECK(j.at("num_nodes").get<int>() == 3);
    CHECK(j.at("num_branches").get<int>() == 3);
    CHECK(j.at("counts").at("memristor").get<int>() == 1);
    CHECK(j.at("counts").at("resistor").get<int>() == 1);
    CHECK(j.at("counts").at("inductor").get<int>() == 1);
    REQUIRE(j.at("branches").size() == 3);
    CHECK(j.at("branches")[0].at("id") == "m1");
    CHECK(j.at("branches")[0].at("kind") == "M");
    CHECK(j.at("branches")[0].at("coeffs")[1].get<double>() == 1.0);
}

TEST_CASE("json: analysis bundle schema and reproducibility") {
    CircuitModel model = assemble_dae(load_netlist(circuits_dir() + "/ml_parallel.net"));
    Tolerances tols;
    EquilibriumPoint eq = find_equilibrium(model.dae, 0.0, {}, tols);
    CircuitTbwpReport rep = check_circuit_tbwp(model, eq, tols);
    NonpassiveReport np = check_nonpassive_zero_multiplicity(model, eq, tols);

    AnalysisBundle b1 = make_analysis_bundle(model, 0.0, rep, np, {"out.json"}, tols);
    AnalysisBundle b2 = make_analysis_bundle(model, 0.0, rep, np, {"out.json"}, tols);

    CHECK(b1.json.at("schema").get<int>() == 1);
    CHECK(b1.json.at("command") == "analyze");
    CHECK(b1.json.at("q_star").get<double>() == 0.0);
    CHECK(b1.json.at("verdict") == "certified");
    CHECK(b1.json.contains("circuit"));
    CHECK(b1.json.contains("report"));
    CHECK(b1.json.contains("nonpassive"));
    CHECK(b1.json.contains("tolerances"));
    CHECK(b1.json.at("artifacts")[0] == "out.json");

    // identical inputs give byte-identical text (sorted keys, fixed layout)
    const std::string s1 = json_to_string(b1.json);
    const std::string s2 = json_to_string(b2.json);
    CHECK(s1 == s2);
    CHECK(s1.back() == '\n');

    // condition certificates expose their numeric evidence
    const Json& conds = b1.json.at("report").at("numeric").at("conditions");
    bool has_trans = false;
    for (const auto& c : conds)
        if (c.at("id") == "transversality") {
            has_trans = true;
            CHECK(c.at("outcome") == "pass");
            CHECK(c.at("scalars").contains("det_derivative"));
        }
    CHECK(has_trans);
}

TEST_CASE("json: exchange reports") {
    CircuitModel ml = assemble_dae(load_netlist(circuits_dir() + "/ml_parallel.net"));
    ExchangeParams params;
    params.dq = 0.5;
    params.t_end = 1.0;
    ExchangeReport rep = stability_exchange_experiment(ml, 0.0, params);
    Json j = to_json(rep);
    CHECK(j.at("params").at("dq").get<double>() == 0.5);
    CHECK(j.at("plus_side").at("label") == "M>0");
    CHECK(j.at("plus_side").at("samples").get<int>() > 100);
    CHECK(j.at("minus_side").contains("max_distance"));
    CHECK(j.at("minus_side").contains("verdict"));
}

TEST_CASE("json: write_json_file round trip") {
    const std::string path = "/tmp/tbwp_test_json_io.json";
    Json j = {{"schema", 1}, {"x", 2.5}};
    write_json_file(path, j);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == json_to_string(j));
    Json back = Json::parse(ss.str());
    CHECK(back.at("x").get<double>() == 2.5);
    std::remove(path.c_str());
}
