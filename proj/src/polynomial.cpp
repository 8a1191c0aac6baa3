#include "tbwp/polynomial.hpp"

#include <sstream>

namespace tbwp {

double Polynomial::eval(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() == 1)
        return Polynomial{};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k)
        d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
    std::vector<double> a(coeffs_.size() + 1, 0.0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
        a[k + 1] = coeffs_[k] / static_cast<double>(k + 1);
    return Polynomial(std::move(a));
}

std::string Polynomial::to_netlist_tokens() const {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (k)
            out << ' ';
        out << coeffs_[k];
    }
    return out.str();
}

double eval_poly(const Polynomial& p, double x) { return p.eval(x); }

Polynomial deriv_poly(const Polynomial& p) { return p.derivative(); }

} // namespace tbwp
