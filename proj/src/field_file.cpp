#include "tbwp/field_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace tbwp {

Vector PolyField::eval(const Vector& x) const {
    Vector out = Vector::Zero(dim);
    for (int i = 0; i < dim; ++i) {
        for (const Monomial& m : components[i]) {
            double term = m.coeff;
            for (int v = 0; v < dim; ++v)
                for (int e = 0; e < m.exponents[v]; ++e)
                    term *= x(v);
            out(i) += term;
        }
    }
    return out;
}

Matrix PolyField::jacobian(const Vector& x) const {
    Matrix J = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (const Monomial& m : components[i]) {
            for (int j = 0; j < dim; ++j) {
                if (m.exponents[j] == 0)
                    continue;
                double term = m.coeff * m.exponents[j];
                for (int v = 0; v < dim; ++v) {
                    const int e = m.exponents[v] - (v == j ? 1 : 0);
                    for (int k = 0; k < e; ++k)
                        term *= x(v);
                }
                J(i, j) += term;
            }
        }
    }
    return J;
}

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    throw FieldFileError("line " + std::to_string(line) + ": " + msg);
}

double parse_real(const std::string& tok, int line) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        fail(line, "bad number '" + tok + "'");
    }
    if (pos != tok.size())
        fail(line, "bad number '" + tok + "'");
    return v;
}

int parse_int(const std::string& tok, int line) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(tok, &pos);
    } catch (const std::exception&) {
        fail(line, "bad integer '" + tok + "'");
    }
    if (pos != tok.size())
        fail(line, "bad integer '" + tok + "'");
    return v;
}

} // namespace

FieldSpec parse_field_file(const std::string& text) {
    FieldSpec spec;
    bool have_dim = false, have_point = false, have_direction = false;

    std::istringstream stream(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(stream, raw)) {
        ++lineno;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos)
            raw.erase(hash);
        std::istringstream ls(raw);
        std::string keyword;
        if (!(ls >> keyword))
            continue;
        std::vector<std::string> args;
        for (std::string tok; ls >> tok;)
            args.push_back(tok);

        if (keyword == "dim") {
            if (have_dim)
                fail(lineno, "duplicate dim");
            if (args.size() != 1)
                fail(lineno, "dim takes one integer");
            spec.field.dim = parse_int(args[0], lineno);
            if (spec.field.dim <= 0)
                fail(lineno, "dim must be positive");
            spec.field.components.assign(spec.field.dim, {});
            have_dim = true;
        } else if (keyword == "point" || keyword == "direction") {
            if (!have_dim)
                fail(lineno, keyword + " before dim");
            if (static_cast<int>(args.size()) != spec.field.dim)
                fail(lineno, keyword + " needs " + std::to_string(spec.field.dim) + " values");
            Vector v(spec.field.dim);
            for (int k = 0; k < spec.field.dim; ++k)
                v(k) = parse_real(args[k], lineno);
            if (keyword == "point") {
                spec.point = v;
                have_point = true;
            } else {
                spec.direction = v;
                have_direction = true;
            }
        } else if (keyword == "term") {
            if (!have_dim)
                fail(lineno, "term before dim");
            if (static_cast<int>(args.size()) != 2 + spec.field.dim)
                fail(lineno, "term needs component, coefficient and " +
                                 std::to_string(spec.field.dim) + " exponents");
            const int comp = parse_int(args[0], lineno);
            if (comp < 1 || comp > spec.field.dim)
                fail(lineno, "component " + std::to_string(comp) + " out of range");
            Monomial m;
            m.coeff = parse_real(args[1], lineno);
            m.exponents.resize(spec.field.dim);
            for (int k = 0; k < spec.field.dim; ++k) {
                m.exponents[k] = parse_int(args[2 + k], lineno);
                if (m.exponents[k] < 0)
                    fail(lineno, "negative exponent");
            }
            spec.field.components[comp - 1].push_back(std::move(m));
        } else {
            fail(lineno, "unknown keyword '" + keyword + "'");
        }
    }

    if (!have_dim)
        throw FieldFileError("missing dim line");
    if (!have_point)
        spec.point = Vector::Zero(spec.field.dim);
    if (!have_direction) {
        spec.direction = Vector::Zero(spec.field.dim);
        spec.direction(0) = 1.0;
    }
    return spec;
}

FieldSpec load_field_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw FieldFileError("cannot open field file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_field_file(buf.str());
}

} // namespace tbwp
