#include "tbwp/json_io.hpp"

#include <cmath>
#include <fstream>

namespace tbwp {

namespace {

Json vector_json(const Vector& v) {
    Json arr = Json::array();
    for (int k = 0; k < v.size(); ++k)
        arr.push_back(v(k));
    return arr;
}

Json complex_vector_json(const Eigen::VectorXcd& v) {
    Json arr = Json::array();
    for (int k = 0; k < v.size(); ++k)
        arr.push_back(Json{{"re", v(k).real()}, {"im", v(k).imag()}});
    return arr;
}

Json index_json(const std::vector<int>& idx) {
    Json arr = Json::array();
    for (int k : idx)
        arr.push_back(k);
    return arr;
}

Json branch_ids_json(const Circuit& circuit, const std::vector<int>& branches) {
    Json arr = Json::array();
    for (int b : branches)
        arr.push_back(circuit.branches()[b].id);
    return arr;
}

} // namespace

Json to_json(const Tolerances& t) {
    return Json{{"zero", t.zero},
                {"realpart", t.realpart},
                {"trans", t.trans},
                {"lsq", t.lsq},
                {"line", t.line},
                {"newton", t.newton},
                {"newton_max_iter", t.newton_max_iter},
                {"band", t.band}};
}

Json to_json(const Spectrum& s) {
    return Json{{"eigenvalues", complex_vector_json(s.eigenvalues)},
                {"zero_cluster", index_json(s.zero_cluster)},
                {"stable", index_json(s.stable)},
                {"unstable", index_json(s.unstable)},
                {"critical", index_json(s.critical)},
                {"ambiguous", index_json(s.ambiguous)},
                {"zero_tol_eff", s.zero_tol_eff},
                {"realpart_tol_eff", s.realpart_tol_eff},
                {"scale", s.scale}};
}

Json to_json(const RankInfo& r) {
    Json null_basis = Json::array();
    for (int c = 0; c < r.null_basis.cols(); ++c)
        null_basis.push_back(vector_json(r.null_basis.col(c)));
    return Json{{"rank", r.rank},
                {"corank", r.corank},
                {"singular_values", vector_json(r.singular_values)},
                {"null_basis", null_basis},
                {"tol_used", r.tol_used},
                {"sigma_max", r.sigma_max}};
}

Json to_json(const ConditionResult& c) {
    Json scalars = Json::object();
    for (const auto& [key, value] : c.scalars)
        scalars[key] = value;
    Json vectors = Json::object();
    for (const auto& [key, value] : c.vectors)
        vectors[key] = vector_json(value);
    return Json{{"id", c.id},
                {"outcome", to_string(c.outcome)},
                {"message", c.message},
                {"scalars", scalars},
                {"vectors", vectors}};
}

Json to_json(const TbwpReport& r) {
    Json conditions = Json::array();
    for (const auto& c : r.conditions)
        conditions.push_back(to_json(c));
    return Json{{"verdict", to_string(r.verdict)},
                {"conditions", conditions},
                {"spectrum", to_json(r.spectrum)},
                {"p", vector_json(r.p)},
                {"q", vector_json(r.q)},
                {"line_provenance", r.line_provenance},
                {"tolerances", to_json(r.tolerances)}};
}

Json to_json(const ConfigReport& c, const Circuit& circuit) {
    Json vml = Json::array();
    for (const auto& loop : c.vml_loops)
        vml.push_back(branch_ids_json(circuit, loop));
    return Json{{"has_vc_loop", c.has_vc_loop},
                {"has_vmc_loop", c.has_vmc_loop},
                {"has_vl_loop", c.has_vl_loop},
                {"has_il_cutset", c.has_il_cutset},
                {"has_ilc_cutset", c.has_ilc_cutset},
                {"has_ic_cutset", c.has_ic_cutset},
                {"vc_loop_witness", branch_ids_json(circuit, c.vc_loop_witness)},
                {"vmc_loop_witness", branch_ids_json(circuit, c.vmc_loop_witness)},
                {"vl_loop_witness", branch_ids_json(circuit, c.vl_loop_witness)},
                {"il_cutset_witness", branch_ids_json(circuit, c.il_cutset_witness)},
                {"ilc_cutset_witness", branch_ids_json(circuit, c.ilc_cutset_witness)},
                {"ic_cutset_witness", branch_ids_json(circuit, c.ic_cutset_witness)},
                {"vml_loops", vml},
                {"vml_loop_count", c.vml_loop_count},
                {"unique_vml_loop_with_m_and_l", c.unique_vml_loop_with_m_and_l}};
}

Json to_json(const CircuitTbwpReport& r, const Circuit& circuit) {
    Json structural = Json::array();
    for (const auto& c : r.structural)
        structural.push_back(to_json(c));
    return Json{{"verdict", to_string(r.verdict)},
                {"structural_verdict", to_string(r.structural_verdict)},
                {"numeric_verdict", to_string(r.numeric_verdict)},
                {"structural", structural},
                {"numeric", to_json(r.numeric)},
                {"config", to_json(r.config, circuit)},
                {"memristance_value", r.memristance_value},
                {"memristance_slope", r.memristance_slope},
                {"min_eig_C", r.min_eig_C},
                {"min_eig_L", r.min_eig_L},
                {"min_eig_R", r.min_eig_R},
                {"tolerances", to_json(r.tolerances)}};
}

Json to_json(const NonpassiveReport& r) {
    Json conditions = Json::array();
    for (const auto& c : r.conditions)
        conditions.push_back(to_json(c));
    return Json{{"overall", to_string(r.overall)},
                {"conditions", conditions},
                {"proper_sum", r.proper_sum},
                {"lproper_sum", r.lproper_sum},
                {"sum_scale", r.sum_scale},
                {"proper_tree_count", r.proper_tree_count},
                {"lproper_tree_count", r.lproper_tree_count},
                {"conditions_hold", r.conditions_hold},
                {"multiplicity_confirmed", r.multiplicity_confirmed},
                {"spectrum", to_json(r.spectrum)},
                {"tolerances", to_json(r.tolerances)}};
}

Json to_json(const PencilSpectrum& p) {
    return Json{{"spectrum", to_json(p.spectrum)},
                {"corank_f_prime", p.corank_f_prime},
                {"corank_F_prime", p.corank_F_prime},
                {"corank_g_z", p.corank_g_z},
                {"gz_condition", p.gz_condition}};
}

Json to_json(const TreeFamily& f, const Circuit& circuit) {
    Json trees = Json::array();
    for (const auto& tree : f.trees)
        trees.push_back(branch_ids_json(circuit, tree.branches));
    Json out{{"family", family_name(f.kind)},
             {"count", static_cast<int>(f.trees.size())},
             {"trees", trees}};
    if (!f.cotree_products.empty()) {
        Json products = Json::array();
        for (double v : f.cotree_products)
            products.push_back(v);
        out["cotree_products"] = products;
    }
    return out;
}

namespace {

Json side_json(const SideResult& s) {
    Json out{{"label", s.label},
             {"q_m", s.q_m},
             {"memristance", s.memristance},
             {"initial_offset", s.initial_offset},
             {"final_distance", s.final_distance},
             {"max_distance", s.max_distance},
             {"verdict", to_string(s.verdict)},
             {"samples", static_cast<int>(s.trajectory.states.size())},
             {"blew_up", s.trajectory.blew_up},
             {"max_constraint_residual", s.max_constraint_residual}};
    if (s.trajectory.blew_up)
        out["blowup_time"] = s.trajectory.blowup_time;
    if (!s.trajectory.states.empty()) {
        out["final_time"] = s.trajectory.times.back();
        out["final_state"] = vector_json(s.trajectory.states.back());
    }
    if (!s.error.empty())
        out["error"] = s.error;
    return out;
}

} // namespace

Json to_json(const ExchangeReport& r) {
    return Json{{"params",
                 Json{{"dq", r.params.dq},
                      {"eps", r.params.eps},
                      {"t_end", r.params.t_end},
                      {"step", r.params.step}}},
                {"plus_side", side_json(r.plus_side)},
                {"minus_side", side_json(r.minus_side)}};
}

Json circuit_summary_json(const Circuit& circuit) {
    Json branches = Json::array();
    for (const auto& b : circuit.branches()) {
        Json coeffs = Json::array();
        for (double c : b.characteristic.coeffs())
            coeffs.push_back(c);
        branches.push_back(Json{{"id", b.id},
                                {"kind", std::string(1, device_letter(b.kind))},
                                {"tail", b.tail},
                                {"head", b.head},
                                {"coeffs", coeffs}});
    }
    Json counts = Json::object();
    const DeviceKind kinds[] = {DeviceKind::Memristor, DeviceKind::Capacitor,
                                DeviceKind::Inductor,  DeviceKind::Resistor,
                                DeviceKind::VSource,   DeviceKind::ISource};
    for (DeviceKind k : kinds)
        counts[device_name(k)] = circuit.count(k);
    return Json{{"nodes", circuit.nodes()},
                {"num_nodes", circuit.num_nodes()},
                {"num_branches", circuit.num_branches()},
                {"branches", branches},
                {"counts", counts}};
}

AnalysisBundle make_analysis_bundle(const CircuitModel& model, double q_star,
                                    const CircuitTbwpReport& circuit_report,
                                    const NonpassiveReport& nonpassive,
                                    const std::vector<std::string>& artifacts,
                                    const Tolerances& tols) {
    AnalysisBundle bundle;
    bundle.json = Json{{"schema", 1},
                       {"command", "analyze"},
                       {"q_star", q_star},
                       {"circuit", circuit_summary_json(model.circuit)},
                       {"verdict", to_string(circuit_report.verdict)},
                       {"report", to_json(circuit_report, model.circuit)},
                       {"nonpassive", to_json(nonpassive)},
                       {"artifacts", artifacts},
                       {"tolerances", to_json(tols)}};
    return bundle;
}

std::string json_to_string(const Json& j) { return j.dump(2) + "\n"; }

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << json_to_string(j);
}

} // namespace tbwp
