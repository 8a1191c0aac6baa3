#pragma once

namespace tbwp {

/// Central tolerance registry.  The relative ones (zero, realpart) are scaled
/// by the norm of the matrix under test; every report records the effective
/// values used.  A one-decade band around each threshold maps to an
/// inconclusive verdict instead of pass/fail.
struct Tolerances {
    double zero = 1e-7;     // eigenvalue zero-clustering, relative to ||A||
    double realpart = 1e-7; // hyperbolicity margin, relative to ||A||
    double trans = 1e-6;    // transversality nonvanishing, relative to det scale
    double lsq = 1e-8;      // generalized-eigenvector residual, relative to ||p||
    double line = 1e-9;     // residual bound when sampling the equilibrium line
    double newton = 1e-12;  // Newton convergence (inf-norm of residual)
    int newton_max_iter = 50;
    double band = 10.0;     // inconclusive decade around thresholds
};

/// Three-valued outcome of a numerical hypothesis check.
enum class Outcome { Pass, Fail, Inconclusive };

/// Overall verdict of a checker.
enum class Verdict { Certified, Refuted, Inconclusive };

[[nodiscard]] const char* to_string(Outcome o);
[[nodiscard]] const char* to_string(Verdict v);

/// |value| must exceed the threshold to count as nonzero:
/// pass if |value| >= band*threshold, fail if < threshold, else inconclusive.
[[nodiscard]] Outcome judge_nonvanishing(double value, double threshold, double band);

/// |value| must stay below the threshold to count as zero:
/// pass if |value| <= threshold, fail if > band*threshold, else inconclusive.
[[nodiscard]] Outcome judge_vanishing(double value, double threshold, double band);

} // namespace tbwp
