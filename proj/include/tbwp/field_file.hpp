#pragma once

#include <string>
#include <vector>

#include "tbwp/numerics.hpp"

namespace tbwp {

// ============================================================================
// Polynomial vector fields from a small text format (check-ode input)
// ============================================================================
//
//   dim 2
//   point 0 0
//   direction 1 0
//   term 1 1.0 0 1    # f1 += 1.0 * x1^0 x2^1
//   term 2 1.0 1 1    # f2 += 1.0 * x1^1 x2^1
//
// '#' starts a comment.  `point` is the candidate equilibrium, `direction`
// the equilibrium-line direction; both default to zeros / e1.

struct Monomial {
    double coeff = 0.0;
    std::vector<int> exponents; // one per variable
};

/// Polynomial map R^n -> R^n with exact evaluation and analytic Jacobian.
struct PolyField {
    int dim = 0;
    std::vector<std::vector<Monomial>> components;

    [[nodiscard]] Vector eval(const Vector& x) const;
    [[nodiscard]] Matrix jacobian(const Vector& x) const;
};

struct FieldSpec {
    PolyField field;
    Vector point;
    Vector direction;
};

class FieldFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

[[nodiscard]] FieldSpec parse_field_file(const std::string& text);
[[nodiscard]] FieldSpec load_field_file(const std::string& path);

} // namespace tbwp
