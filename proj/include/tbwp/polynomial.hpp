#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tbwp {

/// Real polynomial with coefficients stored low degree first.
/// The zero polynomial is {0}; an empty coefficient list is rejected.
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}
    explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty())
            throw std::invalid_argument("Polynomial: empty coefficient list");
    }

    [[nodiscard]] const std::vector<double>& coeffs() const { return coeffs_; }
    [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] bool is_constant() const { return coeffs_.size() == 1; }

    /// Horner evaluation.
    [[nodiscard]] double eval(double x) const;

    /// Formal derivative; derivative of a degree-0 polynomial is {0}.
    [[nodiscard]] Polynomial derivative() const;

    /// Antiderivative with zero constant term (used for the resistor map
    /// gamma with gamma(0) = 0).
    [[nodiscard]] Polynomial antiderivative() const;

    /// Coefficients as netlist tokens, space separated.
    [[nodiscard]] std::string to_netlist_tokens() const;

    bool operator==(const Polynomial& other) const { return coeffs_ == other.coeffs_; }

private:
    std::vector<double> coeffs_;
};

/// Free-function spellings used throughout the code base.
[[nodiscard]] double eval_poly(const Polynomial& p, double x);
[[nodiscard]] Polynomial deriv_poly(const Polynomial& p);

} // namespace tbwp
