#include "tbwp/dae.hpp"

#include <cmath>
#include <limits>
#include <memory>

namespace tbwp {

Vector SemiexplicitDae::F(const Vector& y, const Vector& z) const {
    Vector out(r + p);
    out.head(r) = h(y, z);
    out.tail(p) = g(y, z);
    return out;
}

Matrix SemiexplicitDae::Fprime(const Vector& y, const Vector& z) const {
    Matrix out(r + p, r + p);
    out.topLeftCorner(r, r) = h_y(y, z);
    out.topRightCorner(r, p) = h_z(y, z);
    out.bottomLeftCorner(p, r) = g_y(y, z);
    out.bottomRightCorner(p, p) = g_z(y, z);
    return out;
}

namespace {

// Central-difference Jacobian block of f(y,z) with respect to y (wrt_y) or z.
Matrix fd_block(const DaeMap& f, const Vector& y, const Vector& z, bool wrt_y, int out_dim) {
    const double eps = std::numeric_limits<double>::epsilon();
    const Vector& v = wrt_y ? y : z;
    const int cols = static_cast<int>(v.size());
    Matrix J(out_dim, cols);
    const double h = std::cbrt(eps) * (1.0 + v.norm());
    for (int j = 0; j < cols; ++j) {
        Vector vp = v, vm = v;
        vp(j) += h;
        vm(j) -= h;
        Vector fp = wrt_y ? f(vp, z) : f(y, vp);
        Vector fm = wrt_y ? f(vm, z) : f(y, vm);
        J.col(j) = (fp - fm) / (2.0 * h);
    }
    return J;
}

} // namespace

SemiexplicitDae make_dae(int r, int p, DaeMap h, DaeMap g, DaeBlock h_y, DaeBlock h_z,
                         DaeBlock g_y, DaeBlock g_z) {
    SemiexplicitDae dae;
    dae.r = r;
    dae.p = p;
    dae.h = std::move(h);
    dae.g = std::move(g);
    dae.h_y = h_y ? std::move(h_y) : [f = dae.h, r](const Vector& y, const Vector& z) {
        return fd_block(f, y, z, true, r);
    };
    dae.h_z = h_z ? std::move(h_z) : [f = dae.h, r](const Vector& y, const Vector& z) {
        return fd_block(f, y, z, false, r);
    };
    dae.g_y = g_y ? std::move(g_y) : [f = dae.g, p](const Vector& y, const Vector& z) {
        return fd_block(f, y, z, true, p);
    };
    dae.g_z = g_z ? std::move(g_z) : [f = dae.g, p](const Vector& y, const Vector& z) {
        return fd_block(f, y, z, false, p);
    };
    return dae;
}

// ============================================================================
// Circuit assembly
// ============================================================================

namespace {

/// Everything the DAE evaluators need, shared by the closures.
struct AssemblyContext {
    DaeLayout lay;
    // Loop/cutset blocks per device class, as doubles.
    Matrix Bm, Bc, Bl, Br, Bu, Bj;
    Matrix Qm, Qc, Ql, Qr, Qu, Qj;
    Polynomial memristance{std::vector<double>{0.0}};
    Polynomial memristance_deriv{std::vector<double>{0.0}};
    std::vector<Polynomial> resistances, gammas;
    Vector cap_values, ind_values;
    Vector source_V, source_I;
    CircuitCharacteristics custom;
    bool has_custom = false;

    [[nodiscard]] Matrix C_matrix(const Vector& v_c) const {
        if (has_custom && custom.capacitance)
            return custom.capacitance(v_c);
        return cap_values.asDiagonal();
    }
    [[nodiscard]] Matrix L_matrix(const Vector& i_l) const {
        if (has_custom && custom.inductance)
            return custom.inductance(i_l);
        return ind_values.asDiagonal();
    }
    [[nodiscard]] Matrix R_matrix(const Vector& i_r) const {
        if (has_custom && custom.resistance)
            return custom.resistance(i_r);
        Vector d(lay.n_r);
        for (int k = 0; k < lay.n_r; ++k)
            d(k) = resistances[k].eval(i_r(k));
        return d.asDiagonal();
    }
    [[nodiscard]] Vector gamma_vec(const Vector& i_r) const {
        if (has_custom && custom.gamma)
            return custom.gamma(i_r);
        Vector out(lay.n_r);
        for (int k = 0; k < lay.n_r; ++k)
            out(k) = gammas[k].eval(i_r(k));
        return out;
    }

    [[nodiscard]] Vector h_eval(const Vector& y, const Vector& z) const {
        Vector out(lay.r());
        out.head(lay.n_m) = z.segment(lay.z_im(), lay.n_m);
        if (lay.n_c)
            out.segment(lay.y_vc(), lay.n_c) =
                C_matrix(y.segment(lay.y_vc(), lay.n_c))
                    .fullPivLu()
                    .solve(z.segment(lay.z_ic(), lay.n_c));
        if (lay.n_l)
            out.segment(lay.y_il(), lay.n_l) =
                L_matrix(y.segment(lay.y_il(), lay.n_l))
                    .fullPivLu()
                    .solve(z.segment(lay.z_vl(), lay.n_l));
        return out;
    }

    [[nodiscard]] Vector g_eval(const Vector& y, const Vector& z) const {
        const int loops = static_cast<int>(Bm.rows());
        const int cuts = static_cast<int>(Qm.rows());
        Vector kvl = Vector::Zero(loops), kcl = Vector::Zero(cuts);

        const auto qm = y.segment(lay.y_qm(), lay.n_m);
        const auto vc = y.segment(lay.y_vc(), lay.n_c);
        const auto il = y.segment(lay.y_il(), lay.n_l);
        const auto im = z.segment(lay.z_im(), lay.n_m);
        const auto ic = z.segment(lay.z_ic(), lay.n_c);
        const auto vl = z.segment(lay.z_vl(), lay.n_l);
        const auto ir = z.segment(lay.z_ir(), lay.n_r);
        const auto vj = z.segment(lay.z_vj(), lay.n_j);
        const auto iu = z.segment(lay.z_iu(), lay.n_u);

        if (lay.n_m) {
            Vector mv(lay.n_m);
            for (int k = 0; k < lay.n_m; ++k)
                mv(k) = memristance.eval(qm(k)) * im(k);
            kvl += Bm * mv;
            kcl += Qm * im;
        }
        if (lay.n_c) {
            kvl += Bc * vc;
            kcl += Qc * ic;
        }
        if (lay.n_l) {
            kvl += Bl * vl;
            kcl += Ql * il;
        }
        if (lay.n_r) {
            kvl += Br * gamma_vec(ir);
            kcl += Qr * ir;
        }
        if (lay.n_u) {
            kvl += Bu * source_V;
            kcl += Qu * iu;
        }
        if (lay.n_j) {
            kvl += Bj * vj;
            kcl += Qj * source_I;
        }
        Vector out(lay.p());
        out.head(loops) = kvl;
        out.tail(cuts) = kcl;
        return out;
    }

    // Analytic blocks (constant C, L; polynomial M, R).  Used only when no
    // custom characteristics are installed.
    [[nodiscard]] Matrix h_y_eval(const Vector&, const Vector&) const {
        return Matrix::Zero(lay.r(), lay.r());
    }
    [[nodiscard]] Matrix h_z_eval(const Vector&, const Vector&) const {
        Matrix J = Matrix::Zero(lay.r(), lay.p());
        for (int k = 0; k < lay.n_m; ++k)
            J(lay.y_qm() + k, lay.z_im() + k) = 1.0;
        for (int k = 0; k < lay.n_c; ++k)
            J(lay.y_vc() + k, lay.z_ic() + k) = 1.0 / cap_values(k);
        for (int k = 0; k < lay.n_l; ++k)
            J(lay.y_il() + k, lay.z_vl() + k) = 1.0 / ind_values(k);
        return J;
    }
    [[nodiscard]] Matrix g_y_eval(const Vector& y, const Vector& z) const {
        const int loops = static_cast<int>(Bm.rows());
        Matrix J = Matrix::Zero(lay.p(), lay.r());
        for (int k = 0; k < lay.n_m; ++k) {
            const double mprime = memristance_deriv.eval(y(lay.y_qm() + k));
            J.block(0, lay.y_qm() + k, loops, 1) = Bm.col(k) * (mprime * z(lay.z_im() + k));
        }
        if (lay.n_c)
            J.block(0, lay.y_vc(), loops, lay.n_c) = Bc;
        if (lay.n_l)
            J.block(loops, lay.y_il(), Qm.rows(), lay.n_l) = Ql;
        return J;
    }
    [[nodiscard]] Matrix g_z_eval(const Vector& y, const Vector& z) const {
        const int loops = static_cast<int>(Bm.rows());
        const int cuts = static_cast<int>(Qm.rows());
        Matrix J = Matrix::Zero(lay.p(), lay.p());
        for (int k = 0; k < lay.n_m; ++k) {
            const double m = memristance.eval(y(lay.y_qm() + k));
            J.block(0, lay.z_im() + k, loops, 1) = Bm.col(k) * m;
        }
        if (lay.n_l)
            J.block(0, lay.z_vl(), loops, lay.n_l) = Bl;
        if (lay.n_r) {
            Matrix R(lay.n_r, lay.n_r);
            R.setZero();
            for (int k = 0; k < lay.n_r; ++k)
                R(k, k) = resistances[k].eval(z(lay.z_ir() + k));
            J.block(0, lay.z_ir(), loops, lay.n_r) = Br * R;
        }
        if (lay.n_j)
            J.block(0, lay.z_vj(), loops, lay.n_j) = Bj;
        if (lay.n_m)
            J.block(loops, lay.z_im(), cuts, lay.n_m) = Qm;
        if (lay.n_c)
            J.block(loops, lay.z_ic(), cuts, lay.n_c) = Qc;
        if (lay.n_r)
            J.block(loops, lay.z_ir(), cuts, lay.n_r) = Qr;
        if (lay.n_u)
            J.block(loops, lay.z_iu(), cuts, lay.n_u) = Qu;
        return J;
    }
};

Matrix class_columns(const Eigen::MatrixXi& M, int offset, int count) {
    return M.middleCols(offset, count).cast<double>();
}

} // namespace

double CircuitModel::memristance_at(double q) const { return memristance.eval(q); }
double CircuitModel::memristance_slope_at(double q) const { return memristance_deriv.eval(q); }

Matrix CircuitModel::C_matrix(const Vector& v_c) const {
    if (has_custom && custom.capacitance)
        return custom.capacitance(v_c);
    return cap_values.asDiagonal();
}
Matrix CircuitModel::L_matrix(const Vector& i_l) const {
    if (has_custom && custom.inductance)
        return custom.inductance(i_l);
    return ind_values.asDiagonal();
}
Matrix CircuitModel::R_matrix(const Vector& i_r) const {
    if (has_custom && custom.resistance)
        return custom.resistance(i_r);
    Vector d(resistances.size());
    for (std::size_t k = 0; k < resistances.size(); ++k)
        d(static_cast<int>(k)) = resistances[k].eval(i_r(static_cast<int>(k)));
    return d.asDiagonal();
}

CircuitModel assemble_dae(const Circuit& circuit) {
    return assemble_dae(circuit, CircuitCharacteristics{});
}

CircuitModel assemble_dae(const Circuit& circuit, const CircuitCharacteristics& chars) {
    CircuitModel model;
    model.circuit = circuit;

    const int n_m = circuit.count(DeviceKind::Memristor);
    if (n_m > 1)
        throw DaeError("assemble_dae: more than one memristor (" + std::to_string(n_m) + ")");

    model.matrices = fundamental_matrices(circuit, default_tree(circuit));

    auto ctx = std::make_shared<AssemblyContext>();
    DaeLayout& lay = ctx->lay;
    lay.n_m = n_m;
    lay.n_c = circuit.count(DeviceKind::Capacitor);
    lay.n_l = circuit.count(DeviceKind::Inductor);
    lay.n_r = circuit.count(DeviceKind::Resistor);
    lay.n_u = circuit.count(DeviceKind::VSource);
    lay.n_j = circuit.count(DeviceKind::ISource);

    // Column offsets in the class-blocked B/Q (order m, c, l, r, u, j).
    const int off_m = 0;
    const int off_c = off_m + lay.n_m;
    const int off_l = off_c + lay.n_c;
    const int off_r = off_l + lay.n_l;
    const int off_u = off_r + lay.n_r;
    const int off_j = off_u + lay.n_u;

    const Eigen::MatrixXi& B = model.matrices.B;
    const Eigen::MatrixXi& Q = model.matrices.Q;
    ctx->Bm = class_columns(B, off_m, lay.n_m);
    ctx->Bc = class_columns(B, off_c, lay.n_c);
    ctx->Bl = class_columns(B, off_l, lay.n_l);
    ctx->Br = class_columns(B, off_r, lay.n_r);
    ctx->Bu = class_columns(B, off_u, lay.n_u);
    ctx->Bj = class_columns(B, off_j, lay.n_j);
    ctx->Qm = class_columns(Q, off_m, lay.n_m);
    ctx->Qc = class_columns(Q, off_c, lay.n_c);
    ctx->Ql = class_columns(Q, off_l, lay.n_l);
    ctx->Qr = class_columns(Q, off_r, lay.n_r);
    ctx->Qu = class_columns(Q, off_u, lay.n_u);
    ctx->Qj = class_columns(Q, off_j, lay.n_j);

    auto constant_of = [&](int branch) { return circuit.branches()[branch].characteristic; };

    if (n_m == 1) {
        model.has_memristor = true;
        model.memristance = constant_of(circuit.class_index(DeviceKind::Memristor)[0]);
        model.memristance_deriv = model.memristance.derivative();
        ctx->memristance = model.memristance;
        ctx->memristance_deriv = model.memristance_deriv;
    }

    ctx->cap_values.resize(lay.n_c);
    for (int k = 0; k < lay.n_c; ++k) {
        ctx->cap_values(k) = constant_of(circuit.class_index(DeviceKind::Capacitor)[k]).eval(0.0);
        if (ctx->cap_values(k) == 0.0 && !(chars.capacitance))
            throw DaeError("assemble_dae: zero capacitance on branch '" +
                           circuit.branches()[circuit.class_index(DeviceKind::Capacitor)[k]].id +
                           "'");
    }
    ctx->ind_values.resize(lay.n_l);
    for (int k = 0; k < lay.n_l; ++k) {
        ctx->ind_values(k) = constant_of(circuit.class_index(DeviceKind::Inductor)[k]).eval(0.0);
        if (ctx->ind_values(k) == 0.0 && !(chars.inductance))
            throw DaeError("assemble_dae: zero inductance on branch '" +
                           circuit.branches()[circuit.class_index(DeviceKind::Inductor)[k]].id +
                           "'");
    }
    for (int k = 0; k < lay.n_r; ++k) {
        Polynomial R = constant_of(circuit.class_index(DeviceKind::Resistor)[k]);
        ctx->resistances.push_back(R);
        ctx->gammas.push_back(R.antiderivative());
    }
    ctx->source_V.resize(lay.n_u);
    for (int k = 0; k < lay.n_u; ++k)
        ctx->source_V(k) = constant_of(circuit.class_index(DeviceKind::VSource)[k]).eval(0.0);
    ctx->source_I.resize(lay.n_j);
    for (int k = 0; k < lay.n_j; ++k)
        ctx->source_I(k) = constant_of(circuit.class_index(DeviceKind::ISource)[k]).eval(0.0);

    ctx->custom = chars;
    ctx->has_custom = chars.capacitance || chars.inductance || chars.gamma || chars.resistance;

    model.cap_values = ctx->cap_values;
    model.ind_values = ctx->ind_values;
    model.resistances = ctx->resistances;
    model.source_V = ctx->source_V;
    model.source_I = ctx->source_I;
    model.custom = chars;
    model.has_custom = ctx->has_custom;

    SemiexplicitDae dae;
    dae.r = lay.r();
    dae.p = lay.p();
    dae.layout = lay;
    dae.has_layout = true;
    dae.h = [ctx](const Vector& y, const Vector& z) { return ctx->h_eval(y, z); };
    dae.g = [ctx](const Vector& y, const Vector& z) { return ctx->g_eval(y, z); };
    if (ctx->has_custom) {
        // Caller-supplied smooth characteristics: differentiate numerically.
        dae.h_y = [ctx, r = dae.r](const Vector& y, const Vector& z) {
            return fd_block([ctx](const Vector& a, const Vector& b) { return ctx->h_eval(a, b); },
                            y, z, true, r);
        };
        dae.h_z = [ctx, r = dae.r](const Vector& y, const Vector& z) {
            return fd_block([ctx](const Vector& a, const Vector& b) { return ctx->h_eval(a, b); },
                            y, z, false, r);
        };
        dae.g_y = [ctx, p = dae.p](const Vector& y, const Vector& z) {
            return fd_block([ctx](const Vector& a, const Vector& b) { return ctx->g_eval(a, b); },
                            y, z, true, p);
        };
        dae.g_z = [ctx, p = dae.p](const Vector& y, const Vector& z) {
            return fd_block([ctx](const Vector& a, const Vector& b) { return ctx->g_eval(a, b); },
                            y, z, false, p);
        };
    } else {
        dae.h_y = [ctx](const Vector& y, const Vector& z) { return ctx->h_y_eval(y, z); };
        dae.h_z = [ctx](const Vector& y, const Vector& z) { return ctx->h_z_eval(y, z); };
        dae.g_y = [ctx](const Vector& y, const Vector& z) { return ctx->g_y_eval(y, z); };
        dae.g_z = [ctx](const Vector& y, const Vector& z) { return ctx->g_z_eval(y, z); };
    }

    // Component names for CSV headers and diagnostics.
    auto names_of = [&](DeviceKind k, const char* prefix) {
        std::vector<std::string> out;
        for (int b : circuit.class_index(k))
            out.push_back(std::string(prefix) + "[" + circuit.branches()[b].id + "]");
        return out;
    };
    for (const auto& s : names_of(DeviceKind::Memristor, "q_m"))
        dae.y_names.push_back(s);
    for (const auto& s : names_of(DeviceKind::Capacitor, "v_c"))
        dae.y_names.push_back(s);
    for (const auto& s : names_of(DeviceKind::Inductor, "i_l"))
        dae.y_names.push_back(s);
    for (const auto& s : names_of(DeviceKind::Memristor, "i_m"))
        dae.z_names.push_back(s);
    for (const auto& s : names_of(DeviceKind::Capacitor, "i_c"))
        dae.z_names.push_back(s);
    for (const auto& s : names_of(DeviceKind::Inductor, "v_l"))
        dae.z_names.push_back(s);
    for (const auto& s : names_of(DeviceKind::Resistor, "i_r"))
        dae.z_names.push_back(s);
    for (const auto& s : names_of(DeviceKind::ISource, "v_j"))
        dae.z_names.push_back(s);
    for (const auto& s : names_of(DeviceKind::VSource, "i_u"))
        dae.z_names.push_back(s);

    model.dae = std::move(dae);
    return model;
}

// ============================================================================
// Equilibria
// ============================================================================

EquilibriumPoint find_equilibrium(const SemiexplicitDae& dae, double q_m_value,
                                  const std::optional<Vector>& seed, const Tolerances& tols) {
    const int r = dae.r, p = dae.p;
    const int n_pin = dae.has_layout ? dae.layout.n_m : (r > 0 ? 1 : 0);

    Vector y = Vector::Zero(r), z = Vector::Zero(p);
    if (seed) {
        if (seed->size() != r + p)
            throw DaeError("find_equilibrium: seed size mismatch");
        y = seed->head(r);
        z = seed->tail(p);
    }
    for (int k = 0; k < n_pin; ++k)
        y(k) = q_m_value;

    // Unknowns: y without the pinned charges, then z.  The pinned system is
    // consistent-overdetermined (each memristor shows up as both a zero
    // current and a zero branch voltage), so steps are QR least-squares and
    // convergence is judged on the true residual.
    const int unknowns = r - n_pin + p;
    auto assemble_residual = [&]() { return dae.F(y, z); };
    auto assemble_jacobian = [&]() {
        Matrix full = dae.Fprime(y, z);
        Matrix J(r + p, unknowns);
        J.leftCols(r - n_pin) = full.middleCols(n_pin, r - n_pin);
        J.rightCols(p) = full.rightCols(p);
        return J;
    };

    EquilibriumPoint eq;
    for (int iter = 0;; ++iter) {
        Vector res = assemble_residual();
        const double rn = res.size() ? res.lpNorm<Eigen::Infinity>() : 0.0;
        if (rn <= tols.newton) {
            eq.newton_iterations = iter;
            break;
        }
        if (iter >= tols.newton_max_iter)
            throw DaeError("find_equilibrium: no convergence (residual " + std::to_string(rn) +
                           ")");
        Matrix J = assemble_jacobian();
        Eigen::ColPivHouseholderQR<Matrix> qr(J);
        if (qr.rank() < unknowns)
            throw DaeError("find_equilibrium: singular pinned Jacobian (rank " +
                           std::to_string(qr.rank()) + " of " + std::to_string(unknowns) + ")");
        Vector step = qr.solve(res);
        y.tail(r - n_pin) -= step.head(r - n_pin);
        z -= step.tail(p);
    }

    eq.y_star = y;
    eq.z_star = z;
    Vector hv = dae.h(y, z), gv = dae.g(y, z);
    eq.residual_h = hv.size() ? hv.lpNorm<Eigen::Infinity>() : 0.0;
    eq.residual_g = gv.size() ? gv.lpNorm<Eigen::Infinity>() : 0.0;
    return eq;
}

// ============================================================================
// Schur reduction / pencil spectrum
// ============================================================================

SchurReduction schur_reduce(const SemiexplicitDae& dae, const EquilibriumPoint& eq,
                            const Tolerances& tols) {
    (void)tols;
    SchurReduction red;
    red.A = dae.h_y(eq.y_star, eq.z_star);
    red.B = dae.h_z(eq.y_star, eq.z_star);
    red.C = dae.g_y(eq.y_star, eq.z_star);
    red.D = dae.g_z(eq.y_star, eq.z_star);

    RankInfo dinfo = rank_info(red.D);
    if (dinfo.corank > 0)
        throw DaeError("schur_reduce: g_z singular at this point (corank " +
                       std::to_string(dinfo.corank) +
                       "); index > 1 here and the reduction does not apply");
    const double smin = dinfo.singular_values(dinfo.singular_values.size() - 1);
    red.gz_condition = smin > 0.0 ? dinfo.sigma_max / smin : 0.0;
    red.f_prime = red.A - red.B * red.D.fullPivLu().solve(red.C);
    return red;
}

PencilSpectrum pencil_spectrum(const SemiexplicitDae& dae, const EquilibriumPoint& eq,
                               const Tolerances& tols) {
    SchurReduction red = schur_reduce(dae, eq, tols);
    PencilSpectrum out;
    out.spectrum = classify_spectrum(red.f_prime, tols);
    out.corank_f_prime = rank_info(red.f_prime).corank;
    out.corank_g_z = rank_info(red.D).corank;
    out.gz_condition = red.gz_condition;

    Matrix full = dae.Fprime(eq.y_star, eq.z_star);
    out.corank_F_prime = rank_info(full).corank;
    return out;
}

} // namespace tbwp
