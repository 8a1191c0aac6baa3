#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "tbwp/analysis.hpp"

using namespace tbwp;

namespace {

std::string circuits_dir() { return TBWP_CIRCUITS_DIR; }

// normal form of the bifurcation: x' = y, y' = x y
Vector nf_eval(const Vector& x) {
    Vector f(2);
    f << x(1), x(0) * x(1);
    return f;
}
Matrix nf_jac(const Vector& x) {
    Matrix J(2, 2);
    J << 0.0, 1.0, x(1), x(0);
    return J;
}

// cubic degeneracy: x' = y, y' = x^2 y  (line and double zero survive,
// transversality does not)
Vector cubic_eval(const Vector& x) {
    Vector f(2);
    f << x(1), x(0) * x(0) * x(1);
    return f;
}
Matrix cubic_jac(const Vector& x) {
    Matrix J(2, 2);
    J << 0.0, 1.0, 2.0 * x(0) * x(1), x(0) * x(0);
    return J;
}

Vector unit(int n, int k) {
    Vector e = Vector::Zero(n);
    e(k) = 1.0;
    return e;
}

Outcome outcome_of(const TbwpReport& rep, const std::string& id) {
    const ConditionResult* c = rep.condition(id);
    REQUIRE(c != nullptr);
    return c->outcome;
}

// random passive circuit in scope for the circuit-level certification: an R
// core with optional capacitors in parallel with core resistors, plus a
// memristor-inductor pair in parallel between two random nodes
Circuit random_passive_ml_circuit(std::mt19937& rng) {
    std::uniform_int_distribution<int> nd(2, 5);
    const int n = nd(rng);
    std::uniform_int_distribution<int> extra(0, 4);
    Circuit core = tbwp_test::random_resistor_multigraph(rng, n, n - 1 + extra(rng));

    std::vector<Branch> branches = core.branches();
    std::uniform_real_distribution<double> val(0.5, 2.0);
    std::uniform_int_distribution<int> ncap(0, 2);
    std::uniform_int_distribution<int> host_pick(0, core.num_branches() - 1);
    const int caps = ncap(rng);
    for (int i = 0; i < caps; ++i) {
        const int hb = host_pick(rng);
        const std::string tail = branches[static_cast<std::size_t>(hb)].tail;
        const std::string head = branches[static_cast<std::size_t>(hb)].head;
        branches.push_back({"c" + std::to_string(i), DeviceKind::Capacitor, tail, head,
                            Polynomial({val(rng)})});
    }

    std::uniform_int_distribution<int> node_pick(0, n - 1);
    const int a = node_pick(rng);
    int b = a;
    while (b == a)
        b = node_pick(rng);
    const std::string na = "n" + std::to_string(a), nb = "n" + std::to_string(b);
    branches.push_back({"m1", DeviceKind::Memristor, na, nb, Polynomial({0.0, 1.0})});
    branches.push_back({"l1", DeviceKind::Inductor, na, nb, Polynomial({val(rng)})});
    return Circuit(std::move(branches));
}

// neural-network cell topology with caller-chosen resistances; M(q) = q
std::string neural_netlist(double r1, double r2, double r10, double r11, double r12,
                           double r20, double r22) {
    std::ostringstream out;
    out.precision(17);
    out << "C c1 u1 g 1\nR r1 u1 g " << r1 << "\nC c2 u2 g 1\nR r2 u2 g " << r2
        << "\nR r10 u1 x " << r10 << "\nR r11 u1 x " << r11 << "\nM m1 u2 x 0 1\nR r12 u1 y "
        << r12 << "\nR r20 u2 y " << r20 << "\nR r22 u2 y " << r22 << "\n";
    return out.str();
}

// closed-form L-proper tree sum of the neural-network cell
double neural_lproper_sum(double m, double r1, double r2, double r10, double r11, double r12,
                          double r20, double r22) {
    const double ra = m * (r10 + r11) + r10 * r11;
    const double rb = r12 * (r20 + r22) + r20 * r22;
    return ra * rb + (r1 + r2) * ((r20 + r22) * ra + (r10 + r11) * rb);
}

} // namespace

TEST_CASE("analysis: normal form certified at the origin") {
    TbwpReport rep = check_ode_tbwp(nf_eval, nf_jac, Vector::Zero(2), unit(2, 0));
    CHECK(rep.verdict == Verdict::Certified);
    REQUIRE(rep.conditions.size() == 3);
    CHECK(rep.conditions[0].id == "line_of_equilibria");
    CHECK(rep.conditions[1].id == "double_index2_zero");
    CHECK(rep.conditions[2].id == "transversality");
    for (const auto& c : rep.conditions)
        CHECK(c.outcome == Outcome::Pass);

    // chain vectors: p spans the line, q the nilpotent direction
    CHECK(std::abs(rep.p(0)) == doctest::Approx(1.0));
    CHECK(std::abs(rep.q(1)) == doctest::Approx(1.0));

    // |d/dt det J| along q is exactly 1 here
    const ConditionResult* tr = rep.condition("transversality");
    REQUIRE(tr != nullptr);
    CHECK(std::abs(tr->scalars.at("det_derivative")) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(tr->scalars.at("image_residual") > 0.1); // cross-check route agrees
    CHECK(rep.spectrum.zero_cluster.size() == 2);
}

TEST_CASE("analysis: simple zero away from the bifurcation is refuted") {
    Vector x_star(2);
    x_star << 0.5, 0.0;
    TbwpReport rep = check_ode_tbwp(nf_eval, nf_jac, x_star, unit(2, 0));
    CHECK(rep.verdict == Verdict::Refuted);
    CHECK(outcome_of(rep, "line_of_equilibria") == Outcome::Pass);
    CHECK(outcome_of(rep, "double_index2_zero") == Outcome::Fail);
    // transversality cannot run without a chain
    CHECK(outcome_of(rep, "transversality") == Outcome::Inconclusive);
}

TEST_CASE("analysis: zero or non-equilibrium directions fail the line condition") {
    TbwpReport rep = check_ode_tbwp(nf_eval, nf_jac, Vector::Zero(2), Vector::Zero(2));
    CHECK(outcome_of(rep, "line_of_equilibria") == Outcome::Fail);

    // e2 is not a direction of equilibria for the normal form
    TbwpReport rep2 = check_ode_tbwp(nf_eval, nf_jac, Vector::Zero(2), unit(2, 1));
    CHECK(outcome_of(rep2, "line_of_equilibria") == Outcome::Fail);
    CHECK(rep2.verdict == Verdict::Refuted);
}

TEST_CASE("analysis: cubic degeneracy fails exactly the transversality condition") {
    TbwpReport rep = check_ode_tbwp(cubic_eval, cubic_jac, Vector::Zero(2), unit(2, 0));
    CHECK(rep.verdict == Verdict::Refuted);
    CHECK(outcome_of(rep, "line_of_equilibria") == Outcome::Pass);
    CHECK(outcome_of(rep, "double_index2_zero") == Outcome::Pass);
    CHECK(outcome_of(rep, "transversality") == Outcome::Fail);
}

TEST_CASE("analysis: transversality verdict survives chain reparametrization") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> au(0.5, 2.0);
    std::uniform_real_distribution<double> bu(-2.0, 2.0);

    TbwpReport good = check_ode_tbwp(nf_eval, nf_jac, Vector::Zero(2), unit(2, 0));
    TbwpReport bad = check_ode_tbwp(cubic_eval, cubic_jac, Vector::Zero(2), unit(2, 0));
    REQUIRE(good.q.size() == 2);
    REQUIRE(bad.q.size() == 2);

    for (int trial = 0; trial < 20; ++trial) {
        const double alpha = (trial % 2 ? 1.0 : -1.0) * au(rng);
        const double beta = bu(rng);
        Vector qg = alpha * good.q + beta * good.p;
        ConditionResult cg =
            check_transversality(nf_eval, nf_jac, Vector::Zero(2), good.p, qg);
        CHECK(cg.outcome == Outcome::Pass);

        Vector qb = alpha * bad.q + beta * bad.p;
        ConditionResult cb =
            check_transversality(cubic_eval, cubic_jac, Vector::Zero(2), bad.p, qb);
        CHECK(cb.outcome == Outcome::Fail);
    }
}

TEST_CASE("analysis: DAE-level certification of the parallel pair") {
    CircuitModel ml = assemble_dae(load_netlist(circuits_dir() + "/ml_parallel.net"));
    EquilibriumPoint eq = find_equilibrium(ml.dae, 0.0);
    TbwpReport rep = check_dae_tbwp(ml.dae, eq, unit(ml.dae.r, 0));
    CHECK(rep.verdict == Verdict::Certified);

    const ConditionResult* dz = rep.condition("double_index2_zero");
    REQUIRE(dz != nullptr);
    CHECK(dz->scalars.at("corank_F_prime") == 1.0);
    CHECK(dz->scalars.at("gz_condition") >= 1.0);

    // chain vectors are lifted to (y, z) space
    CHECK(rep.p.size() == ml.dae.r + ml.dae.p);
    CHECK(rep.q.size() == ml.dae.r + ml.dae.p);

    // invariance of the lifted transversality data
    auto field = [&](const Vector& x) {
        return ml.dae.F(x.head(ml.dae.r), x.tail(ml.dae.p));
    };
    auto jac = [&](const Vector& x) {
        return ml.dae.Fprime(x.head(ml.dae.r), x.tail(ml.dae.p));
    };
    Vector x_star(ml.dae.r + ml.dae.p);
    x_star << eq.y_star, eq.z_star;
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> au(0.5, 2.0), bu(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        Vector qhat = (trial % 2 ? 1.0 : -1.0) * au(rng) * rep.q + bu(rng) * rep.p;
        ConditionResult c = check_transversality(field, jac, x_star, rep.p, qhat);
        CHECK(c.outcome == Outcome::Pass);
    }
}

TEST_CASE("analysis: circuit verdict combinations on the bundled examples") {
    SUBCASE("parallel pair at the memristance zero: certified") {
        CircuitModel ml = assemble_dae(load_netlist(circuits_dir() + "/ml_parallel.net"));
        CircuitTbwpReport rep = check_circuit_tbwp(ml, 0.0);
        CHECK(rep.verdict == Verdict::Certified);
        CHECK(rep.structural_verdict == Verdict::Certified);
        CHECK(rep.numeric_verdict == Verdict::Certified);
        CHECK(rep.memristance_value == doctest::Approx(0.0));
        CHECK(rep.memristance_slope == doctest::Approx(1.0));
        CHECK(rep.min_eig_L == doctest::Approx(1.0));
        CHECK(rep.numeric.line_provenance == "memristor charge axis");
        REQUIRE(rep.structural.size() == 8);
        for (const auto& c : rep.structural)
            CHECK(c.outcome == Outcome::Pass);
    }

    SUBCASE("series loop away from the loop-sum zero: refuted") {
        CircuitModel mrl = assemble_dae(load_netlist(circuits_dir() + "/mrl.net"));
        CircuitTbwpReport rep = check_circuit_tbwp(mrl, 1.0);
        CHECK(rep.verdict == Verdict::Refuted);
        CHECK(rep.structural_verdict == Verdict::Refuted);
        CHECK(rep.numeric_verdict == Verdict::Refuted);
        // the series topology has no VML loop at all
        bool vml_failed = false;
        for (const auto& c : rep.structural)
            if (c.id == "config_unique_vml_loop")
                vml_failed = c.outcome == Outcome::Fail;
        CHECK(vml_failed);
    }

    SUBCASE("series loop at the loop-sum zero: structural and numeric disagree") {
        CircuitModel mrl = assemble_dae(load_netlist(circuits_dir() + "/mrl.net"));
        CircuitTbwpReport rep = check_circuit_tbwp(mrl, 0.0);
        // M(0) = -1 != 0 refutes the structural route, but the exchange is
        // genuine (non-passive multiplicity territory), so the numeric route certifies
        CHECK(rep.structural_verdict == Verdict::Refuted);
        CHECK(rep.numeric_verdict == Verdict::Certified);
        CHECK(rep.verdict == Verdict::Inconclusive);
        CHECK(rep.memristance_value == doctest::Approx(-1.0));
    }

    SUBCASE("neural cell: numeric certificate, structural refutation (no inductor)") {
        CircuitModel nn = assemble_dae(load_netlist(circuits_dir() + "/neural.net"));
        CircuitTbwpReport rep = check_circuit_tbwp(nn, -19.0 / 14.0);
        CHECK(rep.numeric_verdict == Verdict::Certified);
        CHECK(rep.structural_verdict == Verdict::Refuted);
        CHECK(rep.verdict == Verdict::Inconclusive);
    }

    SUBCASE("no memristor: refuted outright") {
        CircuitModel vc = assemble_dae(load_netlist(circuits_dir() + "/vc_loop.net"));
        CircuitTbwpReport rep = check_circuit_tbwp(vc, 0.0);
        CHECK(rep.verdict == Verdict::Refuted);
        bool mentions = false;
        for (const auto& c : rep.numeric.conditions)
            if (c.message.find("no memristor") != std::string::npos)
                mentions = true;
        CHECK(mentions);
    }
}

TEST_CASE("analysis: flat memristance refutes the slope condition") {
    Circuit flat = parse_netlist("M m1 a b 0 0 1\nL l1 a b 1\n"); // M(q) = q^2
    CircuitModel model = assemble_dae(flat);
    CircuitTbwpReport rep = check_circuit_tbwp(model, 0.0);
    CHECK(rep.verdict == Verdict::Refuted);
    CHECK(rep.structural_verdict == Verdict::Refuted);
    bool slope_failed = false;
    for (const auto& c : rep.structural)
        if (c.id == "memristance_slope")
            slope_failed = c.outcome == Outcome::Fail;
    CHECK(slope_failed);
    // the numeric route fails transversality for the same reason
    CHECK(rep.numeric_verdict == Verdict::Refuted);
    const ConditionResult* tr = rep.numeric.condition("transversality");
    REQUIRE(tr != nullptr);
    CHECK(tr->outcome == Outcome::Fail);
}

TEST_CASE("analysis: negative branch values break passivity") {
    Circuit c = parse_netlist("M m1 a b 0 1\nL l1 a b -1\n");
    CircuitModel model = assemble_dae(c);
    CircuitTbwpReport rep = check_circuit_tbwp(model, 0.0);
    CHECK(rep.structural_verdict == Verdict::Refuted);
    bool lfail = false;
    for (const auto& cond : rep.structural)
        if (cond.id == "passivity_inductance")
            lfail = cond.outcome == Outcome::Fail;
    CHECK(lfail);
    CHECK(rep.min_eig_L == doctest::Approx(-1.0));
}

TEST_CASE("analysis: stability exchange along the charge axis of the parallel pair") {
    CircuitModel ml = assemble_dae(load_netlist(circuits_dir() + "/ml_parallel.net"));
    std::vector<double> grid;
    for (int k = 0; k <= 20; ++k)
        grid.push_back(-1.0 + 0.1 * k);
    std::vector<BranchSample> rows = classify_equilibrium_branch(ml, grid);
    REQUIRE(rows.size() == grid.size());
    for (const auto& row : rows) {
        REQUIRE(row.ok);
        CHECK(row.memristance == doctest::Approx(row.q_m));
        if (std::abs(row.q_m) < 1e-12) {
            CHECK(row.n_zero == 2);
            CHECK_FALSE(row.exactly_one_zero);
            continue;
        }
        CHECK(row.exactly_one_zero);
        // the nonzero eigenvalue is -q_m / L = -q_m
        double lead = 0.0;
        for (int i = 0; i < row.eigenvalues.size(); ++i)
            if (std::abs(row.eigenvalues(i)) > std::abs(lead))
                lead = row.eigenvalues(i).real();
        CHECK(lead == doctest::Approx(-row.q_m).epsilon(1e-8));
        CHECK(row.n_positive == (row.q_m < 0.0 ? 1 : 0));
        CHECK(row.n_negative == (row.q_m > 0.0 ? 1 : 0));
    }
}

TEST_CASE("analysis: structural certificate implies the numeric one on random passive circuits") {
    std::mt19937 rng(2718);
    int structural_ok = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Circuit c = random_passive_ml_circuit(rng);
        CAPTURE(trial);
        CAPTURE(serialize_netlist(c));
        CircuitModel model = assemble_dae(c);
        CircuitTbwpReport rep = check_circuit_tbwp(model, 0.0);
        if (rep.structural_verdict != Verdict::Certified)
            continue; // capacitor bonds and similar exclusions are legitimate
        ++structural_ok;
        CHECK(rep.numeric_verdict == Verdict::Certified);
        CHECK(rep.verdict == Verdict::Certified);
    }
    // the filter must leave a meaningful sample behind
    CHECK(structural_ok >= 120);
}

TEST_CASE("analysis: non-passive multiplicity hypotheses on the bundled circuits") {
    SUBCASE("series loop at the loop-sum zero") {
        CircuitModel mrl = assemble_dae(load_netlist(circuits_dir() + "/mrl.net"));
        EquilibriumPoint eq = find_equilibrium(mrl.dae, 0.0);
        NonpassiveReport rep = check_nonpassive_zero_multiplicity(mrl, eq);
        CHECK(rep.overall == Outcome::Pass);
        CHECK(rep.conditions_hold);
        CHECK(rep.multiplicity_confirmed);
        CHECK(rep.proper_tree_count == 1);
        CHECK(rep.lproper_tree_count == 2);
        CHECK(rep.proper_sum == doctest::Approx(1.0));
        CHECK(rep.lproper_sum == doctest::Approx(0.0));
    }

    SUBCASE("series loop off the loop-sum zero") {
        CircuitModel mrl = assemble_dae(load_netlist(circuits_dir() + "/mrl.net"));
        EquilibriumPoint eq = find_equilibrium(mrl.dae, 0.5);
        NonpassiveReport rep = check_nonpassive_zero_multiplicity(mrl, eq);
        CHECK(rep.overall == Outcome::Fail);
        CHECK_FALSE(rep.conditions_hold);
        CHECK(rep.lproper_sum == doctest::Approx(0.5));
        for (const auto& cond : rep.conditions)
            if (cond.id == "lproper_sum_zero")
                CHECK(cond.outcome == Outcome::Fail);
    }

    SUBCASE("source-capacitor loop violates the configuration hypothesis") {
        CircuitModel vc = assemble_dae(load_netlist(circuits_dir() + "/vc_loop.net"));
        EquilibriumPoint eq;
        eq.y_star = Vector::Zero(1);
        eq.z_star = Vector::Zero(2);
        NonpassiveReport rep = check_nonpassive_zero_multiplicity(vc, eq);
        CHECK(rep.overall == Outcome::Fail);
        REQUIRE(!rep.conditions.empty());
        CHECK(rep.conditions[0].id == "nonpassive_config");
        CHECK(rep.conditions[0].outcome == Outcome::Fail);
    }
}

TEST_CASE("analysis: tuned neural instances confirm the multiplicity claim") {
    std::mt19937 rng(14);
    std::uniform_real_distribution<double> val(0.5, 2.0);
    for (int trial = 0; trial < 25; ++trial) {
        const double r1 = val(rng), r2 = val(rng), r10 = val(rng), r11 = val(rng),
                     r12 = val(rng), r20 = val(rng), r22 = val(rng);
        Circuit c = parse_netlist(neural_netlist(r1, r2, r10, r11, r12, r20, r22));
        CircuitModel model = assemble_dae(c);

        // the L-proper sum is affine in M; its root is the bifurcation point
        TreeFamily lp0 = enumerate_trees(c, TreeFamilyKind::LProper);
        TreeFamily lp1 = enumerate_trees(c, TreeFamilyKind::LProper);
        const double s0 = mr_product_sum(c, lp0, {0.0, {}});
        const double s1 = mr_product_sum(c, lp1, {1.0, {}}) - s0;
        REQUIRE(std::abs(s1) > 1e-9);
        const double m_star = -s0 / s1;

        // closed-form cross-check of the sum at a random memristance
        const double m_probe = val(rng) - 1.0;
        TreeFamily lpp = enumerate_trees(c, TreeFamilyKind::LProper);
        CHECK(mr_product_sum(c, lpp, {m_probe, {}}) ==
              doctest::Approx(neural_lproper_sum(m_probe, r1, r2, r10, r11, r12, r20, r22))
                  .epsilon(1e-9));

        EquilibriumPoint eq = find_equilibrium(model.dae, m_star);
        NonpassiveReport rep = check_nonpassive_zero_multiplicity(model, eq);
        CAPTURE(trial);
        CAPTURE(m_star);
        CHECK(rep.conditions_hold);
        CHECK(rep.multiplicity_confirmed);
        CHECK(rep.overall == Outcome::Pass);
        CHECK(rep.spectrum.zero_cluster.size() >= 2);
    }
}
