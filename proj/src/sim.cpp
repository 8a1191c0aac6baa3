#include "tbwp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include <Eigen/Eigenvalues>

namespace tbwp {

const char* to_string(ExchangeVerdict v) {
    switch (v) {
    case ExchangeVerdict::Attracted:
        return "attracted";
    case ExchangeVerdict::Repelled:
        return "repelled";
    default:
        return "undecided";
    }
}

// ============================================================================
// Reduced ODE
// ============================================================================

ReducedOde::ReducedOde(const SemiexplicitDae& dae, Vector z_seed, const Tolerances& tols)
    : dae_(&dae), tols_(tols), z_(std::move(z_seed)) {}

Vector ReducedOde::operator()(const Vector& y) const {
    if (dae_->p == 0) {
        residual_ = 0.0;
        return dae_->h(y, z_);
    }
    MapEvaluator residual = [this, &y](const Vector& z) { return dae_->g(y, z); };
    MatrixEvaluator jacobian = [this, &y](const Vector& z) { return dae_->g_z(y, z); };
    try {
        NewtonResult nr = newton_solve(residual, jacobian, z_, tols_.newton,
                                       tols_.newton_max_iter);
        z_ = nr.x;
        residual_ = nr.residual_norm;
    } catch (const NumericsError& e) {
        throw DaeError(std::string("constraint solve failed: ") + e.what());
    }
    return dae_->h(y, z_);
}

// ============================================================================
// Stability exchange experiment
// ============================================================================

namespace {

int pinned_components(const SemiexplicitDae& dae) {
    if (dae.has_layout)
        return dae.layout.n_m;
    return dae.r > 0 ? 1 : 0;
}

// Distance to the side's equilibrium in the transverse (non-line) components.
double line_distance(const Vector& y, const Vector& y_star, int n_pin) {
    Vector d = y - y_star;
    d.head(n_pin).setZero();
    return d.norm();
}

SideResult run_side(const SemiexplicitDae& dae, double q_side, std::string label,
                    const ExchangeParams& params, const Tolerances& tols) {
    SideResult side;
    side.label = std::move(label);
    side.q_m = q_side;
    try {
        EquilibriumPoint eq = find_equilibrium(dae, q_side, {}, tols);
        SchurReduction red = schur_reduce(dae, eq, tols);
        Spectrum spec = classify_spectrum(red.f_prime, tols);

        // Leading non-null direction: eigenvector of the nonzero eigenvalue
        // with the largest real part.
        Eigen::EigenSolver<Matrix> es(red.f_prime);
        if (es.info() != Eigen::Success)
            throw NumericsError("eigensolver failed on the reduced Jacobian");
        int pick = -1;
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            if (std::abs(es.eigenvalues()(i)) <= spec.zero_tol_eff)
                continue;
            if (pick < 0 || es.eigenvalues()(i).real() > es.eigenvalues()(pick).real() ||
                (es.eigenvalues()(i).real() == es.eigenvalues()(pick).real() &&
                 std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(pick))))
                pick = i;
        }
        if (pick < 0)
            throw NumericsError("no transverse eigendirection (all eigenvalues in the zero "
                                "cluster)");
        Vector u = es.eigenvectors().col(pick).real();
        if (u.norm() <= 1e-12)
            u = es.eigenvectors().col(pick).imag();
        u.normalize();

        const int n_pin = pinned_components(dae);
        Vector y0 = eq.y_star + params.eps * u;
        side.initial_offset = line_distance(y0, eq.y_star, n_pin);

        // A constraint-solve failure far from the line is an escape, not an
        // error: surface it as a non-finite state so RK4 truncates and flags
        // the blow-up.
        ReducedOde ode(dae, eq.z_star, tols);
        MapEvaluator field = [&ode](const Vector& y) -> Vector {
            try {
                return ode(y);
            } catch (const DaeError&) {
                return Vector::Constant(y.size(),
                                        std::numeric_limits<double>::quiet_NaN());
            }
        };
        side.trajectory = integrate_rk4(field, y0, params.t_end, params.step);

        double max_dist = 0.0;
        for (const Vector& y : side.trajectory.states)
            max_dist = std::max(max_dist, line_distance(y, eq.y_star, n_pin));
        side.max_distance = max_dist;

        // Constraint residuals along the stored states (warm-started pass).
        ReducedOde replay(dae, eq.z_star, tols);
        side.constraint_residuals.reserve(side.trajectory.states.size());
        for (const Vector& y : side.trajectory.states) {
            try {
                (void)replay(y);
            } catch (const DaeError&) {
                break;
            }
            side.constraint_residuals.push_back(replay.last_constraint_residual());
            side.max_constraint_residual =
                std::max(side.max_constraint_residual, replay.last_constraint_residual());
        }
        side.final_distance = side.trajectory.states.empty()
                                  ? 0.0
                                  : line_distance(side.trajectory.states.back(), eq.y_star,
                                                  n_pin);

        if (side.trajectory.blew_up || side.max_distance >= 10.0 * params.eps)
            side.verdict = ExchangeVerdict::Repelled;
        else if (side.final_distance <= params.eps / 10.0)
            side.verdict = ExchangeVerdict::Attracted;
        else
            side.verdict = ExchangeVerdict::Undecided;
    } catch (const std::exception& e) {
        side.error = e.what();
        side.verdict = ExchangeVerdict::Undecided;
    }
    return side;
}

} // namespace

ExchangeReport stability_exchange_experiment(const SemiexplicitDae& dae, double q_star,
                                             const ExchangeParams& params,
                                             const Tolerances& tols) {
    ExchangeReport rep;
    rep.params = params;
    rep.plus_side = run_side(dae, q_star + params.dq, "q>q*", params, tols);
    rep.minus_side = run_side(dae, q_star - params.dq, "q<q*", params, tols);
    return rep;
}

ExchangeReport stability_exchange_experiment(const CircuitModel& model, double q_star,
                                             const ExchangeParams& params,
                                             const Tolerances& tols) {
    ExchangeReport rep;
    rep.params = params;
    auto side_label = [&](double q, const char* fallback) {
        if (!model.has_memristor)
            return std::string(fallback);
        const double m = model.memristance_at(q);
        if (m > 0.0)
            return std::string("M>0");
        if (m < 0.0)
            return std::string("M<0");
        return std::string(fallback);
    };
    rep.plus_side = run_side(model.dae, q_star + params.dq,
                             side_label(q_star + params.dq, "q>q*"), params, tols);
    rep.minus_side = run_side(model.dae, q_star - params.dq,
                              side_label(q_star - params.dq, "q<q*"), params, tols);
    if (model.has_memristor) {
        rep.plus_side.memristance = model.memristance_at(rep.plus_side.q_m);
        rep.minus_side.memristance = model.memristance_at(rep.minus_side.q_m);
    }
    return rep;
}

// ============================================================================
// Line tracing
// ============================================================================

std::vector<LineTraceRow> trace_equilibrium_line(const CircuitModel& model, double q_lo,
                                                 double q_hi, int samples,
                                                 const Tolerances& tols) {
    std::vector<LineTraceRow> rows;
    if (samples <= 0)
        return rows;
    rows.reserve(samples);
    const double step = samples > 1 ? (q_hi - q_lo) / (samples - 1) : 0.0;
    for (int k = 0; k < samples; ++k) {
        LineTraceRow row;
        row.q_m = q_lo + step * k;
        row.memristance = model.has_memristor ? model.memristance_at(row.q_m) : 0.0;
        try {
            EquilibriumPoint eq = find_equilibrium(model.dae, row.q_m, {}, tols);
            row.residual = std::max(eq.residual_h, eq.residual_g);
            PencilSpectrum ps = pencil_spectrum(model.dae, eq, tols);
            row.eigenvalues = ps.spectrum.eigenvalues;
            row.n_zero = static_cast<int>(ps.spectrum.zero_cluster.size());
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// ============================================================================
// CSV output
// ============================================================================

void write_trajectory_csv(const std::string& path, const SideResult& side,
                          const std::vector<std::string>& y_names) {
    std::ofstream out(path);
    if (!out)
        throw DaeError("cannot open '" + path + "' for writing");
    out << std::setprecision(17);

    const std::size_t dim =
        side.trajectory.states.empty() ? y_names.size() : side.trajectory.states[0].size();
    out << "t";
    for (std::size_t k = 0; k < dim; ++k) {
        if (k < y_names.size())
            out << "," << y_names[k];
        else
            out << ",y" << k;
    }
    out << ",constraint_residual\n";

    for (std::size_t i = 0; i < side.trajectory.states.size(); ++i) {
        out << side.trajectory.times[i];
        const Vector& y = side.trajectory.states[i];
        for (int k = 0; k < y.size(); ++k)
            out << "," << y(k);
        out << ",";
        if (i < side.constraint_residuals.size())
            out << side.constraint_residuals[i];
        out << "\n";
    }
}

void write_line_trace_csv(const std::string& path, const std::vector<LineTraceRow>& rows) {
    std::ofstream out(path);
    if (!out)
        throw DaeError("cannot open '" + path + "' for writing");
    out << std::setprecision(17);

    std::size_t max_eigs = 0;
    for (const auto& row : rows)
        max_eigs = std::max(max_eigs, static_cast<std::size_t>(row.eigenvalues.size()));

    out << "q_m,memristance,residual,ok,n_zero";
    for (std::size_t k = 0; k < max_eigs; ++k)
        out << ",eig" << k << "_re,eig" << k << "_im";
    out << "\n";
    for (const auto& row : rows) {
        out << row.q_m << "," << row.memristance << "," << row.residual << ","
            << (row.ok ? 1 : 0) << "," << row.n_zero;
        for (std::size_t k = 0; k < max_eigs; ++k) {
            if (k < static_cast<std::size_t>(row.eigenvalues.size()))
                out << "," << row.eigenvalues(static_cast<int>(k)).real() << ","
                    << row.eigenvalues(static_cast<int>(k)).imag();
            else
                out << ",,";
        }
        out << "\n";
    }
}

} // namespace tbwp
