#include "tbwp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tbwp {

const char* to_string(Outcome o) {
    switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Certified: return "certified";
    case Verdict::Refuted: return "refuted";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

Outcome judge_nonvanishing(double value, double threshold, double band) {
    const double v = std::abs(value);
    if (v >= band * threshold)
        return Outcome::Pass;
    if (v < threshold)
        return Outcome::Fail;
    return Outcome::Inconclusive;
}

Outcome judge_vanishing(double value, double threshold, double band) {
    const double v = std::abs(value);
    if (v <= threshold)
        return Outcome::Pass;
    if (v > band * threshold)
        return Outcome::Fail;
    return Outcome::Inconclusive;
}

// ============================================================================
// rank_info
// ============================================================================

bool RankInfo::in_image(const Vector& w) const { return image_residual(w) <= tol_used; }

double RankInfo::image_residual(const Vector& w) const {
    const double nw = w.norm();
    if (nw == 0.0)
        return 0.0;
    Vector proj = w;
    if (rank > 0)
        proj -= left_range * (left_range.transpose() * w);
    return proj.norm() / nw;
}

RankInfo rank_info(const Matrix& A, std::optional<double> tol) {
    RankInfo info;
    const int rows = static_cast<int>(A.rows());
    const int cols = static_cast<int>(A.cols());
    if (rows == 0 || cols == 0) {
        info.rank = 0;
        info.corank = cols;
        info.null_basis = Matrix::Identity(cols, cols);
        info.left_range = Matrix::Zero(rows, 0);
        info.tol_used = tol.value_or(0.0);
        return info;
    }

    Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    info.singular_values = svd.singularValues();
    info.sigma_max = info.singular_values.size() ? info.singular_values(0) : 0.0;
    info.tol_used = tol.value_or(std::max(rows, cols) *
                                 std::numeric_limits<double>::epsilon() * info.sigma_max);

    info.rank = 0;
    for (int i = 0; i < info.singular_values.size(); ++i)
        if (info.singular_values(i) > info.tol_used)
            ++info.rank;
    info.corank = cols - info.rank;
    info.null_basis = svd.matrixV().rightCols(info.corank);
    info.left_range = svd.matrixU().leftCols(info.rank);
    return info;
}

// ============================================================================
// classify_spectrum
// ============================================================================

Spectrum classify_spectrum(const Matrix& A, const Tolerances& tols) {
    Spectrum s;
    Eigen::EigenSolver<Matrix> solver(A);
    if (solver.info() != Eigen::Success)
        throw NumericsError("eigen decomposition failed");

    Eigen::VectorXcd ev = solver.eigenvalues();
    std::vector<int> order(ev.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (ev(a).real() != ev(b).real())
            return ev(a).real() < ev(b).real();
        return ev(a).imag() < ev(b).imag();
    });
    s.eigenvalues.resize(ev.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        s.eigenvalues(static_cast<int>(i)) = ev(order[i]);

    s.scale = A.size() == 0 ? 0.0 : A.jacobiSvd().singularValues()(0);
    s.zero_tol_eff = tols.zero * s.scale;
    s.realpart_tol_eff = tols.realpart * s.scale;

    for (int i = 0; i < s.eigenvalues.size(); ++i) {
        const auto lam = s.eigenvalues(i);
        const double mag = std::abs(lam);
        const double re = lam.real();
        if (mag <= s.zero_tol_eff) {
            s.zero_cluster.push_back(i);
            continue;
        }
        if (mag <= tols.band * s.zero_tol_eff)
            s.ambiguous.push_back(i); // too close to the zero cluster to call
        if (re < -s.realpart_tol_eff) {
            s.stable.push_back(i);
            if (-re <= tols.band * s.realpart_tol_eff &&
                (s.ambiguous.empty() || s.ambiguous.back() != i))
                s.ambiguous.push_back(i);
        } else if (re > s.realpart_tol_eff) {
            s.unstable.push_back(i);
            if (re <= tols.band * s.realpart_tol_eff &&
                (s.ambiguous.empty() || s.ambiguous.back() != i))
                s.ambiguous.push_back(i);
        } else {
            s.critical.push_back(i);
        }
    }
    return s;
}

// ============================================================================
// Derivative stencils
// ============================================================================

Vector second_directional_derivative(const MapEvaluator& F, const Vector& x, const Vector& p,
                                     const Vector& q) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double h = std::pow(eps, 0.25) * (1.0 + x.norm());
    const Vector hp = h * p, hq = h * q;
    Vector v = F(x + hp + hq) - F(x + hp - hq) - F(x - hp + hq) + F(x - hp - hq);
    return v / (4.0 * h * h);
}

double det_jacobian_derivative(const MatrixEvaluator& J, const Vector& x, const Vector& q) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double h = std::cbrt(eps) * (1.0 + x.norm());
    const double dplus = J(x + h * q).fullPivLu().determinant();
    const double dminus = J(x - h * q).fullPivLu().determinant();
    return (dplus - dminus) / (2.0 * h);
}

double det_derivative_scale(const Matrix& Jx) {
    if (Jx.rows() == 0)
        return 1.0;
    Vector sv = Jx.jacobiSvd().singularValues();
    double scale = 1.0;
    for (int i = 0; i + 1 < sv.size(); ++i)
        scale *= sv(i);
    return scale;
}

// ============================================================================
// generalized_eigvec
// ============================================================================

GeneralizedEigvec generalized_eigvec(const Matrix& A, const Vector& p, double lsq_tol) {
    RankInfo info = rank_info(A);
    if (info.corank != 1)
        throw NumericsError("generalized_eigvec: corank is " + std::to_string(info.corank) +
                            ", expected 1");
    const double np = p.norm();
    if (np == 0.0)
        throw NumericsError("generalized_eigvec: p is zero");

    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
    cod.setThreshold(info.tol_used / std::max(info.sigma_max, 1e-300));
    Vector q = cod.solve(p); // minimum-norm least-squares solution
    const double residual = (A * q - p).norm() / np;
    if (residual > lsq_tol)
        throw NumericsError(
            "generalized_eigvec: no index-2 structure (simple zero eigenvalue), residual " +
            std::to_string(residual));
    GeneralizedEigvec out;
    out.residual = residual;
    out.q = q.normalized();
    return out;
}

// ============================================================================
// newton_solve
// ============================================================================

NewtonResult newton_solve(const MapEvaluator& residual, const MatrixEvaluator& jacobian,
                          const Vector& guess, double tol, int max_iter) {
    Vector x = guess;
    for (int iter = 0; iter <= max_iter; ++iter) {
        Vector r = residual(x);
        const double rn = r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0;
        if (rn <= tol)
            return NewtonResult{x, rn, iter};
        if (iter == max_iter)
            break;
        Matrix J = jacobian(x);
        if (J.rows() != J.cols())
            throw NumericsError("newton_solve: non-square Jacobian");
        Eigen::JacobiSVD<Matrix> svd(J);
        const double smin = svd.singularValues()(svd.singularValues().size() - 1);
        const double smax = svd.singularValues()(0);
        if (smin == 0.0 || smax / smin > 1e14)
            throw NumericsError("newton_solve: singular Jacobian (condition estimate " +
                                std::to_string(smin == 0.0 ? std::numeric_limits<double>::infinity()
                                                           : smax / smin) +
                                ")");
        x -= J.fullPivLu().solve(r);
    }
    throw NumericsError("newton_solve: no convergence within " + std::to_string(max_iter) +
                        " iterations");
}

// ============================================================================
// integrate_rk4
// ============================================================================

Trajectory integrate_rk4(const MapEvaluator& field, const Vector& x0, double t_end, double step) {
    if (step <= 0.0)
        throw NumericsError("integrate_rk4: step must be positive");
    Trajectory traj;
    Vector x = x0;
    double t = 0.0;
    traj.times.push_back(t);
    traj.states.push_back(x);

    auto finite = [](const Vector& v) { return v.allFinite(); };

    while (t < t_end) {
        const double h = std::min(step, t_end - t);
        Vector k1 = field(x);
        Vector k2 = field(x + 0.5 * h * k1);
        Vector k3 = field(x + 0.5 * h * k2);
        Vector k4 = field(x + h * k3);
        Vector next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
        if (!finite(k1) || !finite(next)) {
            traj.blew_up = true;
            traj.blowup_time = t;
            return traj;
        }
        x = next;
        traj.times.push_back(t);
        traj.states.push_back(x);
    }
    return traj;
}

} // namespace tbwp
