#include "tbwp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "tbwp/trees.hpp"

namespace tbwp {

const ConditionResult* TbwpReport::condition(const std::string& id) const {
    for (const auto& c : conditions)
        if (c.id == id)
            return &c;
    return nullptr;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

Vector indices_to_vector(const std::vector<int>& idx) {
    Vector v(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k)
        v(static_cast<int>(k)) = idx[k];
    return v;
}

std::string branch_id_list(const Circuit& circuit, const std::vector<int>& branches) {
    std::string out;
    for (std::size_t k = 0; k < branches.size(); ++k) {
        if (k)
            out += ", ";
        out += circuit.branches()[branches[k]].id;
    }
    return out;
}

Verdict combine_conditions(const std::vector<ConditionResult>& conditions) {
    bool all_pass = true;
    for (const auto& c : conditions) {
        if (c.outcome == Outcome::Fail)
            return Verdict::Refuted;
        if (c.outcome != Outcome::Pass)
            all_pass = false;
    }
    return all_pass ? Verdict::Certified : Verdict::Inconclusive;
}

// Condition 1: the field vanishes on a symmetric 9-point grid along the line.
ConditionResult line_condition(const MapEvaluator& field, const Vector& x_star, Vector direction,
                               const Tolerances& tols) {
    ConditionResult c;
    c.id = "line_of_equilibria";
    const double dn = direction.norm();
    if (dn == 0.0) {
        c.outcome = Outcome::Fail;
        c.message = "line direction is the zero vector";
        return c;
    }
    direction /= dn;
    const double delta = 1e-3 * (1.0 + x_star.norm());
    double max_res = 0.0;
    for (int k = -4; k <= 4; ++k) {
        const double t = delta * (static_cast<double>(k) / 4.0);
        Vector r = field(x_star + t * direction);
        max_res = std::max(max_res, r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0);
    }
    c.outcome = judge_vanishing(max_res, tols.line, tols.band);
    c.scalars["max_residual"] = max_res;
    c.scalars["delta"] = delta;
    c.scalars["threshold"] = tols.line;
    c.vectors["direction"] = direction;
    switch (c.outcome) {
    case Outcome::Pass:
        c.message = "field vanishes along the line (max residual " + fmt(max_res) + ")";
        break;
    case Outcome::Fail:
        c.message = "field does not vanish along the line (max residual " + fmt(max_res) + ")";
        break;
    default:
        c.message = "line residual " + fmt(max_res) + " sits in the tolerance band";
    }
    return c;
}

// Condition 2 working set: the classified spectrum plus the Jordan chain when
// one could be extracted.
struct ChainCheck {
    ConditionResult cond;
    Spectrum spectrum;
    Vector p, q;
    bool have_chain = false;
};

int near_zero_ambiguous_count(const Spectrum& s, double band) {
    int count = 0;
    for (int idx : s.ambiguous)
        if (std::abs(s.eigenvalues(idx)) <= band * s.zero_tol_eff)
            ++count;
    return count;
}

ChainCheck double_zero_condition(const Matrix& A, const Tolerances& tols) {
    ChainCheck out;
    ConditionResult& c = out.cond;
    c.id = "double_index2_zero";
    out.spectrum = classify_spectrum(A, tols);
    const Spectrum& s = out.spectrum;
    RankInfo info = rank_info(A);

    const int n_zero = static_cast<int>(s.zero_cluster.size());
    const int n_ambiguous = static_cast<int>(s.ambiguous.size());
    c.scalars["zero_cluster_size"] = n_zero;
    c.scalars["corank"] = info.corank;
    c.scalars["n_stable"] = static_cast<double>(s.stable.size());
    c.scalars["n_unstable"] = static_cast<double>(s.unstable.size());
    c.scalars["n_critical"] = static_cast<double>(s.critical.size());
    c.scalars["n_ambiguous"] = n_ambiguous;
    c.scalars["zero_tol_eff"] = s.zero_tol_eff;
    c.scalars["realpart_tol_eff"] = s.realpart_tol_eff;

    std::string chain_note;
    if (info.corank == 1) {
        Vector p = info.null_basis.col(0);
        int imax = 0;
        p.cwiseAbs().maxCoeff(&imax);
        if (p(imax) < 0.0)
            p = -p;
        try {
            GeneralizedEigvec ge = generalized_eigvec(A, p, tols.lsq);
            out.p = p;
            out.q = ge.q;
            out.have_chain = true;
            c.scalars["chain_residual"] = ge.residual;
            c.vectors["p"] = out.p;
            c.vectors["q"] = out.q;
        } catch (const NumericsError& e) {
            chain_note = e.what();
        }
    }

    if (n_zero > 2) {
        c.outcome = Outcome::Fail;
        c.message = "zero cluster holds " + std::to_string(n_zero) + " eigenvalues, expected 2";
    } else if (n_ambiguous > 0) {
        c.outcome = Outcome::Inconclusive;
        c.message = std::to_string(n_ambiguous) +
                    " eigenvalue(s) fall in the tolerance band; classification unstable";
    } else if (n_zero < 2) {
        c.outcome = Outcome::Fail;
        c.message = n_zero == 0 ? "no zero eigenvalue" : "zero eigenvalue is simple";
    } else if (info.corank == 0) {
        c.outcome = Outcome::Inconclusive;
        c.message = "two eigenvalues cluster at zero but the matrix is numerically full-rank";
    } else if (info.corank > 1) {
        c.outcome = Outcome::Fail;
        c.message = "kernel dimension " + std::to_string(info.corank) +
                    ": double zero is semisimple, not index two";
    } else if (!out.have_chain) {
        c.outcome = Outcome::Inconclusive;
        c.message = "Jordan chain could not be certified: " + chain_note;
    } else if (!s.critical.empty()) {
        c.outcome = Outcome::Fail;
        c.message = std::to_string(s.critical.size()) +
                    " additional eigenvalue(s) on the imaginary axis";
    } else {
        c.outcome = Outcome::Pass;
        c.message = "double zero eigenvalue with a length-2 Jordan chain; remaining spectrum "
                    "hyperbolic";
    }
    return out;
}

// Condition 3: transversality by two routes.  Primary: directional derivative
// of det J along q.  Cross-check: the second derivative F'' p q must stay
// outside im J.  Route disagreement is reported as inconclusive.
ConditionResult transversality_condition(const MapEvaluator& field, const MatrixEvaluator& jac,
                                         const Vector& x_star, const Vector& p_unit,
                                         const Vector& q_unit, const Tolerances& tols) {
    ConditionResult c;
    c.id = "transversality";

    Matrix A = jac(x_star);
    const double dscale = det_derivative_scale(A);
    const double dd = det_jacobian_derivative(jac, x_star, q_unit);
    const double primary_tol = tols.trans * dscale;
    const Outcome primary = judge_nonvanishing(dd, primary_tol, tols.band);

    Vector w = second_directional_derivative(field, x_star, p_unit, q_unit);
    RankInfo info = rank_info(A);
    const double eps = std::numeric_limits<double>::epsilon();
    const double noise = std::sqrt(eps) * std::max(1.0, info.sigma_max) * (1.0 + x_star.norm());
    Outcome cross = Outcome::Inconclusive;
    double image_res = 0.0;
    if (w.norm() > noise) {
        image_res = info.image_residual(w);
        cross = judge_nonvanishing(image_res, tols.trans, tols.band);
    }

    c.scalars["det_derivative"] = dd;
    c.scalars["det_scale"] = dscale;
    c.scalars["primary_threshold"] = primary_tol;
    c.scalars["image_residual"] = image_res;
    c.scalars["second_derivative_norm"] = w.norm();
    c.scalars["noise_floor"] = noise;
    c.vectors["second_derivative"] = w;

    if (cross == Outcome::Inconclusive) {
        c.outcome = primary;
        c.message = "det derivative " + fmt(dd) + " against threshold " + fmt(primary_tol) +
                    "; image cross-check below noise floor";
    } else if (primary == cross) {
        c.outcome = primary;
        c.message = primary == Outcome::Pass
                        ? "det derivative " + fmt(dd) + " and image residual " + fmt(image_res) +
                              " both clear their thresholds"
                        : "det derivative " + fmt(dd) + " and image residual " + fmt(image_res) +
                              " both vanish at tolerance";
    } else if (primary == Outcome::Inconclusive) {
        c.outcome = Outcome::Inconclusive;
        c.message = "det derivative " + fmt(dd) + " sits in the tolerance band";
    } else {
        c.outcome = Outcome::Inconclusive;
        c.message = "routes disagree: det derivative says " +
                    std::string(to_string(primary)) + ", image membership says " +
                    std::string(to_string(cross));
    }
    return c;
}

ConditionResult skipped_transversality(const std::string& why) {
    ConditionResult c;
    c.id = "transversality";
    c.outcome = Outcome::Inconclusive;
    c.message = "prerequisite failed: " + why;
    return c;
}

} // namespace

// ============================================================================
// Explicit-ODE level
// ============================================================================

TbwpReport check_ode_tbwp(const MapEvaluator& field, const MatrixEvaluator& jacobian,
                          const Vector& x_star, const Vector& line_direction,
                          const Tolerances& tols) {
    TbwpReport rep;
    rep.tolerances = tols;
    rep.line_provenance = "caller-supplied";

    rep.conditions.push_back(line_condition(field, x_star, line_direction, tols));

    Matrix A = jacobian(x_star);
    ChainCheck chain = double_zero_condition(A, tols);
    rep.spectrum = chain.spectrum;
    if (chain.have_chain) {
        rep.p = chain.p;
        rep.q = chain.q;
    }
    rep.conditions.push_back(chain.cond);

    if (chain.have_chain)
        rep.conditions.push_back(
            transversality_condition(field, jacobian, x_star, chain.p, chain.q, tols));
    else
        rep.conditions.push_back(skipped_transversality("no Jordan chain available"));

    rep.verdict = combine_conditions(rep.conditions);
    return rep;
}

ConditionResult check_transversality(const MapEvaluator& field, const MatrixEvaluator& jacobian,
                                     const Vector& x_star, const Vector& p, const Vector& q,
                                     const Tolerances& tols) {
    if (p.norm() == 0.0 || q.norm() == 0.0)
        return skipped_transversality("chain vector is zero");
    return transversality_condition(field, jacobian, x_star, p.normalized(), q.normalized(),
                                    tols);
}

// ============================================================================
// Semiexplicit-DAE level
// ============================================================================

TbwpReport check_dae_tbwp(const SemiexplicitDae& dae, const EquilibriumPoint& eq,
                          const Vector& line_direction_y, const Tolerances& tols) {
    TbwpReport rep;
    rep.tolerances = tols;
    rep.line_provenance = "caller-supplied (y-space)";
    const int r = dae.r;
    const int p = dae.p;

    {
        MapEvaluator restricted = [&dae, &eq](const Vector& y) { return dae.F(y, eq.z_star); };
        rep.conditions.push_back(line_condition(restricted, eq.y_star, line_direction_y, tols));
    }

    SchurReduction red;
    bool have_red = false;
    try {
        red = schur_reduce(dae, eq, tols);
        have_red = true;
    } catch (const DaeError& e) {
        ConditionResult c;
        c.id = "double_index2_zero";
        c.outcome = Outcome::Fail;
        c.message = e.what();
        rep.conditions.push_back(c);
    }

    Matrix full = dae.Fprime(eq.y_star, eq.z_star);
    RankInfo full_info = rank_info(full);

    ChainCheck chain;
    if (have_red) {
        chain = double_zero_condition(red.f_prime, tols);
        rep.spectrum = chain.spectrum;
        chain.cond.scalars["corank_F_prime"] = full_info.corank;
        chain.cond.scalars["gz_condition"] = red.gz_condition;
        // The kernel lifting is a bijection when g_z is regular, so the full
        // Jacobian must mirror corank 1; a mismatch is numerical trouble, not
        // a refutation.
        if (chain.cond.outcome == Outcome::Pass && full_info.corank != 1) {
            chain.cond.outcome = Outcome::Inconclusive;
            chain.cond.message = "Schur reduction has corank 1 but the full Jacobian has corank " +
                                 std::to_string(full_info.corank);
        }
        rep.conditions.push_back(chain.cond);
    }

    if (have_red && chain.have_chain) {
        Eigen::FullPivLU<Matrix> dlu(red.D);
        Vector pbar(r + p), qbar(r + p);
        pbar.head(r) = chain.p;
        pbar.tail(p) = -dlu.solve(red.C * chain.p);
        qbar.head(r) = chain.q;
        qbar.tail(p) = -dlu.solve(red.C * chain.q);
        pbar.normalize();
        qbar.normalize();
        rep.p = pbar;
        rep.q = qbar;

        MapEvaluator field = [&dae, r](const Vector& x) {
            return dae.F(x.head(r), x.tail(x.size() - r));
        };
        MatrixEvaluator jac = [&dae, r](const Vector& x) {
            return dae.Fprime(x.head(r), x.tail(x.size() - r));
        };
        Vector x_star(r + p);
        x_star.head(r) = eq.y_star;
        x_star.tail(p) = eq.z_star;
        rep.conditions.push_back(transversality_condition(field, jac, x_star, pbar, qbar, tols));
    } else {
        rep.conditions.push_back(skipped_transversality(
            have_red ? "no Jordan chain available" : "Schur reduction unavailable"));
    }

    rep.verdict = combine_conditions(rep.conditions);
    return rep;
}

// ============================================================================
// Circuit level
// ============================================================================

namespace {

// max(1, sum_k |c_k| max(1,|x|)^k): the natural magnitude of the polynomial's
// terms at x, against which "the value is zero" is judged.
double poly_magnitude(const Polynomial& poly, double x) {
    const double base = std::max(1.0, std::abs(x));
    double mag = 0.0, powx = 1.0;
    for (double c : poly.coeffs()) {
        mag += std::abs(c) * powx;
        powx *= base;
    }
    return std::max(1.0, mag);
}

ConditionResult passivity_condition(const std::string& id, const char* what, const Matrix& value,
                                    int n, double* min_eig_out) {
    ConditionResult c;
    c.id = id;
    if (n == 0) {
        c.outcome = Outcome::Pass;
        c.message = std::string("no ") + what + " branches (vacuous)";
        *min_eig_out = 0.0;
        return c;
    }
    const Matrix sym = 0.5 * (value + value.transpose());
    const double asym = (value - value.transpose()).norm();
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    const double lmin = es.eigenvalues()(0);
    *min_eig_out = lmin;
    c.scalars["min_eigenvalue"] = lmin;
    c.scalars["asymmetry"] = asym;
    c.outcome = lmin > 0.0 ? Outcome::Pass : Outcome::Fail;
    c.message = std::string(what) + " matrix " +
                (lmin > 0.0 ? "is positive definite (min eigenvalue "
                            : "is not positive definite (min eigenvalue ") +
                fmt(lmin) + ")";
    return c;
}

} // namespace

CircuitTbwpReport check_circuit_tbwp(const CircuitModel& model, double q_star,
                                     const Tolerances& tols) {
    EquilibriumPoint eq = find_equilibrium(model.dae, q_star, {}, tols);
    return check_circuit_tbwp(model, eq, tols);
}

CircuitTbwpReport check_circuit_tbwp(const CircuitModel& model, const EquilibriumPoint& eq,
                                     const Tolerances& tols) {
    CircuitTbwpReport rep;
    rep.tolerances = tols;
    rep.config = check_configurations(model.circuit);
    const Circuit& circuit = model.circuit;
    const DaeLayout& lay = model.dae.layout;

    {
        ConditionResult c;
        c.id = "config_no_vmc_loop";
        if (rep.config.has_vmc_loop) {
            c.outcome = Outcome::Fail;
            c.message =
                "VMC-loop found: " + branch_id_list(circuit, rep.config.vmc_loop_witness);
            c.vectors["witness"] = indices_to_vector(rep.config.vmc_loop_witness);
        } else {
            c.outcome = Outcome::Pass;
            c.message = "no loop formed by voltage sources, memristors and capacitors";
        }
        rep.structural.push_back(std::move(c));
    }
    {
        ConditionResult c;
        c.id = "config_no_ilc_cutset";
        if (rep.config.has_ilc_cutset) {
            c.outcome = Outcome::Fail;
            c.message =
                "ILC-cutset found: " + branch_id_list(circuit, rep.config.ilc_cutset_witness);
            c.vectors["witness"] = indices_to_vector(rep.config.ilc_cutset_witness);
        } else {
            c.outcome = Outcome::Pass;
            c.message = "no cutset formed by current sources, inductors and capacitors";
        }
        rep.structural.push_back(std::move(c));
    }
    {
        ConditionResult c;
        c.id = "config_unique_vml_loop";
        c.scalars["vml_loop_count"] = rep.config.vml_loop_count;
        if (rep.config.unique_vml_loop_with_m_and_l) {
            c.outcome = Outcome::Pass;
            c.message = "unique VML-loop through the memristor and an inductor: " +
                        branch_id_list(circuit, rep.config.vml_loops[0]);
            c.vectors["witness"] = indices_to_vector(rep.config.vml_loops[0]);
        } else {
            c.outcome = Outcome::Fail;
            if (rep.config.vml_loop_count == 0)
                c.message = "the V-M-L subgraph has no loop";
            else if (rep.config.vml_loop_count > 1)
                c.message = "the V-M-L subgraph has " +
                            std::to_string(rep.config.vml_loop_count) + " loops, need exactly 1";
            else
                c.message = "the single V-M-L loop misses the memristor or an inductor: " +
                            branch_id_list(circuit, rep.config.vml_loops[0]);
        }
        rep.structural.push_back(std::move(c));
    }

    const Vector vc = eq.y_star.segment(lay.y_vc(), lay.n_c);
    const Vector il = eq.y_star.segment(lay.y_il(), lay.n_l);
    const Vector ir = eq.z_star.segment(lay.z_ir(), lay.n_r);
    rep.structural.push_back(passivity_condition("passivity_capacitance", "capacitance",
                                                 model.C_matrix(vc), lay.n_c, &rep.min_eig_C));
    rep.structural.push_back(passivity_condition("passivity_inductance", "inductance",
                                                 model.L_matrix(il), lay.n_l, &rep.min_eig_L));
    rep.structural.push_back(passivity_condition("passivity_resistance", "resistance",
                                                 model.R_matrix(ir), lay.n_r, &rep.min_eig_R));

    if (model.has_memristor) {
        const double q_star = eq.y_star(lay.y_qm());
        rep.memristance_value = model.memristance_at(q_star);
        rep.memristance_slope = model.memristance_slope_at(q_star);
        {
            ConditionResult c;
            c.id = "memristance_zero";
            const double threshold = tols.zero * poly_magnitude(model.memristance, q_star);
            c.outcome = judge_vanishing(std::abs(rep.memristance_value), threshold, tols.band);
            c.scalars["value"] = rep.memristance_value;
            c.scalars["q_star"] = q_star;
            c.scalars["threshold"] = threshold;
            c.message = "M(" + fmt(q_star) + ") = " + fmt(rep.memristance_value) +
                        (c.outcome == Outcome::Pass ? " vanishes" : " against threshold ") +
                        (c.outcome == Outcome::Pass ? "" : fmt(threshold));
            rep.structural.push_back(std::move(c));
        }
        {
            ConditionResult c;
            c.id = "memristance_slope";
            const double threshold = tols.zero * poly_magnitude(model.memristance_deriv, q_star);
            c.outcome = judge_nonvanishing(std::abs(rep.memristance_slope), threshold, tols.band);
            c.scalars["value"] = rep.memristance_slope;
            c.scalars["threshold"] = threshold;
            c.message = "M'(" + fmt(q_star) + ") = " + fmt(rep.memristance_slope);
            rep.structural.push_back(std::move(c));
        }
    } else {
        for (const char* id : {"memristance_zero", "memristance_slope"}) {
            ConditionResult c;
            c.id = id;
            c.outcome = Outcome::Fail;
            c.message = "circuit has no memristor";
            rep.structural.push_back(std::move(c));
        }
    }

    if (model.has_memristor) {
        Vector d = Vector::Zero(model.dae.r);
        d(lay.y_qm()) = 1.0;
        rep.numeric = check_dae_tbwp(model.dae, eq, d, tols);
        rep.numeric.line_provenance = "memristor charge axis";
    } else {
        rep.numeric.tolerances = tols;
        ConditionResult c;
        c.id = "line_of_equilibria";
        c.outcome = Outcome::Fail;
        c.message = "circuit has no memristor, hence no charge axis to follow";
        rep.numeric.conditions.push_back(std::move(c));
        rep.numeric.verdict = Verdict::Refuted;
    }

    rep.structural_verdict = combine_conditions(rep.structural);
    rep.numeric_verdict = rep.numeric.verdict;
    rep.verdict = rep.structural_verdict == rep.numeric_verdict ? rep.structural_verdict
                                                                : Verdict::Inconclusive;
    return rep;
}

// ============================================================================
// Stability profile along the line
// ============================================================================

std::vector<BranchSample> classify_equilibrium_branch(const CircuitModel& model,
                                                      const std::vector<double>& q_samples,
                                                      const Tolerances& tols) {
    std::vector<BranchSample> out;
    out.reserve(q_samples.size());
    for (double q : q_samples) {
        BranchSample sample;
        sample.q_m = q;
        sample.memristance = model.has_memristor ? model.memristance_at(q) : 0.0;
        try {
            EquilibriumPoint eq = find_equilibrium(model.dae, q, {}, tols);
            PencilSpectrum ps = pencil_spectrum(model.dae, eq, tols);
            sample.eigenvalues = ps.spectrum.eigenvalues;
            sample.n_positive = static_cast<int>(ps.spectrum.unstable.size());
            sample.n_negative = static_cast<int>(ps.spectrum.stable.size());
            sample.n_zero = static_cast<int>(ps.spectrum.zero_cluster.size());
            sample.n_critical = static_cast<int>(ps.spectrum.critical.size());
            sample.exactly_one_zero = sample.n_zero == 1 && ps.spectrum.ambiguous.empty();
            sample.ok = true;
        } catch (const std::exception& e) {
            sample.error = e.what();
        }
        out.push_back(std::move(sample));
    }
    return out;
}

// ============================================================================
// Non-passive multiplicity check
// ============================================================================

NonpassiveReport check_nonpassive_zero_multiplicity(const CircuitModel& model,
                                                    const EquilibriumPoint& eq,
                                                    const Tolerances& tols) {
    NonpassiveReport rep;
    rep.tolerances = tols;
    const Circuit& circuit = model.circuit;
    ConfigReport config = check_configurations(circuit);

    {
        ConditionResult c;
        c.id = "nonpassive_config";
        std::vector<std::string> offending;
        if (config.has_vc_loop)
            offending.push_back("VC-loop (" + branch_id_list(circuit, config.vc_loop_witness) +
                                ")");
        if (config.has_il_cutset)
            offending.push_back("IL-cutset (" + branch_id_list(circuit, config.il_cutset_witness) +
                                ")");
        if (config.has_vl_loop)
            offending.push_back("VL-loop (" + branch_id_list(circuit, config.vl_loop_witness) +
                                ")");
        if (config.has_ic_cutset)
            offending.push_back("IC-cutset (" + branch_id_list(circuit, config.ic_cutset_witness) +
                                ")");
        if (offending.empty()) {
            c.outcome = Outcome::Pass;
            c.message = "no VC-loops, IL-cutsets, VL-loops or IC-cutsets";
        } else {
            c.outcome = Outcome::Fail;
            c.message = offending[0];
            for (std::size_t k = 1; k < offending.size(); ++k)
                c.message += "; " + offending[k];
        }
        rep.conditions.push_back(std::move(c));
    }

    OperatingValues point;
    const DaeLayout& lay = model.dae.layout;
    if (model.has_memristor)
        point.q_m = eq.y_star(lay.y_qm());
    point.i_r = eq.z_star.segment(lay.z_ir(), lay.n_r);

    TreeFamily proper = enumerate_trees(circuit, TreeFamilyKind::Proper);
    TreeFamily lproper = enumerate_trees(circuit, TreeFamilyKind::LProper);
    rep.proper_sum = mr_product_sum(circuit, proper, point);
    rep.lproper_sum = mr_product_sum(circuit, lproper, point);
    rep.proper_tree_count = static_cast<int>(proper.trees.size());
    rep.lproper_tree_count = static_cast<int>(lproper.trees.size());

    auto abs_sum = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v)
            s += std::abs(x);
        return std::max(1.0, s);
    };
    const double scale_proper = abs_sum(proper.cotree_products);
    const double scale_lproper = abs_sum(lproper.cotree_products);
    rep.sum_scale = std::max(scale_proper, scale_lproper);

    {
        ConditionResult c;
        c.id = "proper_sum_nonzero";
        const double threshold = tols.zero * scale_proper;
        c.outcome = judge_nonvanishing(rep.proper_sum, threshold, tols.band);
        c.scalars["sum"] = rep.proper_sum;
        c.scalars["tree_count"] = rep.proper_tree_count;
        c.scalars["threshold"] = threshold;
        c.message = "proper-tree MR sum " + fmt(rep.proper_sum) + " over " +
                    std::to_string(rep.proper_tree_count) + " trees";
        rep.conditions.push_back(std::move(c));
    }
    {
        ConditionResult c;
        c.id = "lproper_sum_zero";
        const double threshold = tols.zero * scale_lproper;
        c.outcome = judge_vanishing(std::abs(rep.lproper_sum), threshold, tols.band);
        c.scalars["sum"] = rep.lproper_sum;
        c.scalars["tree_count"] = rep.lproper_tree_count;
        c.scalars["threshold"] = threshold;
        c.message = "L-proper-tree MR sum " + fmt(rep.lproper_sum) + " over " +
                    std::to_string(rep.lproper_tree_count) + " trees";
        rep.conditions.push_back(std::move(c));
    }

    rep.conditions_hold = rep.conditions[0].outcome == Outcome::Pass &&
                          rep.conditions[1].outcome == Outcome::Pass &&
                          rep.conditions[2].outcome == Outcome::Pass;

    {
        ConditionResult c;
        c.id = "zero_multiplicity";
        if (rep.conditions_hold) {
            try {
                PencilSpectrum ps = pencil_spectrum(model.dae, eq, tols);
                rep.spectrum = ps.spectrum;
                const int n_zero = static_cast<int>(ps.spectrum.zero_cluster.size());
                const int near = near_zero_ambiguous_count(ps.spectrum, tols.band);
                c.scalars["zero_cluster_size"] = n_zero;
                if (n_zero >= 2) {
                    c.outcome = Outcome::Pass;
                    c.message = "zero eigenvalue of algebraic multiplicity >= 2 confirmed (" +
                                std::to_string(n_zero) + " in cluster)";
                    rep.multiplicity_confirmed = true;
                } else if (n_zero + near >= 2) {
                    c.outcome = Outcome::Inconclusive;
                    c.message = "zero cluster has " + std::to_string(n_zero) +
                                " members plus " + std::to_string(near) +
                                " borderline eigenvalue(s)";
                } else {
                    c.outcome = Outcome::Fail;
                    c.message = "hypotheses hold but the zero cluster has only " +
                                std::to_string(n_zero) + " member(s)";
                }
            } catch (const DaeError& e) {
                c.outcome = Outcome::Inconclusive;
                c.message = std::string("pencil spectrum unavailable: ") + e.what();
            }
        } else {
            c.outcome = Outcome::Inconclusive;
            c.message = "hypotheses not satisfied; the multiplicity assertion does not apply "
                        "here";
        }
        rep.conditions.push_back(std::move(c));
    }

    bool any_fail = false, all_pass = true;
    for (const auto& c : rep.conditions) {
        if (c.outcome == Outcome::Fail)
            any_fail = true;
        if (c.outcome != Outcome::Pass)
            all_pass = false;
    }
    rep.overall = any_fail ? Outcome::Fail : (all_pass ? Outcome::Pass : Outcome::Inconclusive);
    return rep;
}

} // namespace tbwp
