#include "subrig/catalog.hpp"

#include <cmath>

#include "subrig/errors.hpp"

namespace subrig {

namespace {

VectorFieldSpec field_from(const std::vector<std::string>& components, const Coordinates& coords)
{
    VectorFieldSpec f;
    for (const auto& c : components) {
        f.coefficients.push_back(parse(c, coords));
    }
    return f;
}

VectorFieldSpec coordinate_field(std::size_t index, const Coordinates& coords)
{
    VectorFieldSpec f;
    for (std::size_t m = 0; m < coords.size(); ++m) {
        f.coefficients.push_back(Expression::constant(m == index ? 1.0 : 0.0, coords));
    }
    return f;
}

// Dilation map delta_lambda(x)_i = lambda^w_i x_i.
DilatingFlow weighted_dilation(const Coordinates& coords, const std::vector<double>& weights,
                               std::vector<double> gammas)
{
    Coordinates with_lambda = coords;
    with_lambda.emplace_back("lambda");
    const Expression lambda = Expression::variable(coords.size(), with_lambda);
    DilatingFlow flow;
    flow.gammas = std::move(gammas);
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const Expression x = Expression::variable(i, with_lambda);
        flow.map.push_back(weights[i] == 1.0 ? lambda * x : pow(lambda, weights[i]) * x);
    }
    flow.origin = Point::Zero(static_cast<Eigen::Index>(coords.size()));
    return flow;
}

// Sum of c * x_b * x_d terms, skipping zeros. `quadratic[b][d]` and
// `linear[b]` are coefficients of x_b x_d and x_b.
Expression polynomial(double constant, const std::vector<double>& linear,
                      const std::vector<std::vector<double>>& quadratic, const Coordinates& coords)
{
    std::optional<Expression> sum;
    auto add = [&](Expression term) { sum = sum ? *sum + term : term; };
    if (constant != 0.0) {
        add(Expression::constant(constant, coords));
    }
    for (std::size_t b = 0; b < linear.size(); ++b) {
        if (linear[b] != 0.0) {
            add(linear[b] * Expression::variable(b, coords));
        }
    }
    for (std::size_t b = 0; b < quadratic.size(); ++b) {
        for (std::size_t d = b; d < quadratic.size(); ++d) {
            const double c = b == d ? quadratic[b][d] : quadratic[b][d] + quadratic[d][b];
            if (c != 0.0) {
                add(c * (Expression::variable(b, coords) * Expression::variable(d, coords)));
            }
        }
    }
    return sum ? *sum : Expression::constant(0.0, coords);
}

} // namespace

VRStructure heisenberg(int n)
{
    if (n < 1) {
        throw UnsupportedDimension("Heisenberg group needs n >= 1");
    }
    VRStructure s;
    s.name = n == 1 ? "heisenberg1" : "heisenberg" + std::to_string(n);
    if (n == 1) {
        s.coords = {"x", "y", "t"};
    } else {
        for (int i = 1; i <= n; ++i) {
            s.coords.push_back("x" + std::to_string(i));
        }
        for (int i = 1; i <= n; ++i) {
            s.coords.push_back("y" + std::to_string(i));
        }
        s.coords.emplace_back("t");
    }
    const auto N = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < N; ++i) {
        std::vector<std::string> c(2 * N + 1, "0");
        c[i] = "1";
        c[2 * N] = "-" + s.coords[N + i] + "/2";
        s.horizontal.push_back(field_from(c, s.coords));
    }
    for (std::size_t i = 0; i < N; ++i) {
        std::vector<std::string> c(2 * N + 1, "0");
        c[N + i] = "1";
        c[2 * N] = s.coords[i] + "/2";
        s.horizontal.push_back(field_from(c, s.coords));
    }
    s.vertical.push_back(coordinate_field(2 * N, s.coords));
    s.partition = {0};
    s.carnot = heisenberg_algebra(n);
    std::vector<double> weights(2 * N + 1, 1.0);
    weights[2 * N] = 2.0;
    s.flow = weighted_dilation(s.coords, weights, {2.0});
    return s;
}

VRStructure heisenberg_times_r()
{
    VRStructure s;
    s.name = "hxr";
    s.coords = {"x", "y", "t", "s"};
    s.horizontal.push_back(field_from({"1", "0", "-y/2", "0"}, s.coords));
    s.horizontal.push_back(field_from({"0", "1", "x/2", "0"}, s.coords));
    s.horizontal.push_back(field_from({"0", "0", "0", "1"}, s.coords));
    s.vertical.push_back(field_from({"0", "0", "1", "0"}, s.coords));
    s.partition = {0};
    CarnotData data({3, 1});
    data.set_bracket(0, 1, 3, 1.0);
    s.carnot = data;
    s.flow = weighted_dilation(s.coords, {1.0, 1.0, 2.0, 1.0}, {2.0});
    return s;
}

VRStructure martinet(const std::string& f, const std::string& g, std::optional<int> degree)
{
    VRStructure s;
    s.name = "martinet";
    s.coords = {"x", "y", "z"};
    VectorFieldSpec x = coordinate_field(0, s.coords);
    x.coefficients[2] = parse(f, s.coords);
    VectorFieldSpec y = coordinate_field(1, s.coords);
    y.coefficients[2] = parse(g, s.coords);
    s.horizontal = {x, y};
    s.vertical = {coordinate_field(2, s.coords)};
    s.partition = {0};
    if (degree) {
        if (*degree < 0) {
            throw ConfigError("Martinet degree must be nonnegative");
        }
        const double w = *degree + 1.0;
        s.flow = weighted_dilation(s.coords, {1.0, 1.0, w}, {w});
    }
    return s;
}

CarnotData heisenberg_algebra(int n)
{
    CarnotData data({2 * n, 1});
    for (int i = 0; i < n; ++i) {
        data.set_bracket(static_cast<std::size_t>(i), static_cast<std::size_t>(n + i),
                         static_cast<std::size_t>(2 * n), 1.0);
    }
    return data;
}

CarnotData engel_algebra()
{
    CarnotData data({2, 1, 1});
    data.set_bracket(0, 1, 2, 1.0);
    data.set_bracket(0, 2, 3, 1.0);
    return data;
}

VRStructure carnot(const CarnotData& data, std::string name)
{
    validate_carnot(data);
    if (data.step() > 3) {
        throw UnsupportedDimension("Carnot frames are generated for step <= 3, got step " +
                                   std::to_string(data.step()));
    }
    const std::size_t n = data.dimension();
    VRStructure s;
    s.name = std::move(name);
    for (std::size_t i = 1; i <= n; ++i) {
        s.coords.push_back("x" + std::to_string(i));
    }
    // X_a(x) = e_a + 1/2 [x, e_a] + 1/12 [x, [x, e_a]]; the next BCH term is
    // ad_x^4 and vanishes through step 3.
    for (std::size_t a = 0; a < n; ++a) {
        VectorFieldSpec f;
        for (std::size_t c = 0; c < n; ++c) {
            std::vector<double> linear(n, 0.0);
            std::vector<std::vector<double>> quadratic(n, std::vector<double>(n, 0.0));
            for (std::size_t b = 0; b < n; ++b) {
                linear[b] = 0.5 * data.c(b, a, c);
                for (std::size_t d = 0; d < n; ++d) {
                    double sum = 0.0;
                    for (std::size_t e = 0; e < n; ++e) {
                        sum += data.c(d, a, e) * data.c(b, e, c);
                    }
                    quadratic[b][d] = sum / 12.0;
                }
            }
            f.coefficients.push_back(polynomial(a == c ? 1.0 : 0.0, linear, quadratic, s.coords));
        }
        if (data.layer(a) == 0) {
            s.horizontal.push_back(std::move(f));
        } else {
            s.vertical.push_back(std::move(f));
            s.partition.push_back(data.layer(a));
        }
    }
    std::vector<double> weights;
    std::vector<double> gammas;
    for (std::size_t a = 0; a < n; ++a) {
        weights.push_back(data.layer(a) + 1.0);
        if (data.layer(a) > 0) {
            gammas.push_back(data.layer(a) + 1.0);
        }
    }
    s.carnot = data;
    s.flow = weighted_dilation(s.coords, weights, gammas);
    return s;
}

VRStructure catalog(const std::string& name, const CatalogParams& params)
{
    if (name == "heisenberg1") {
        return heisenberg(1);
    }
    if (name == "heisenbergN") {
        return heisenberg(params.n);
    }
    if (name == "hxr") {
        return heisenberg_times_r();
    }
    if (name == "martinet") {
        return martinet(params.f, params.g, params.degree);
    }
    if (name == "engel") {
        return carnot(engel_algebra(), "engel");
    }
    if (name == "carnot") {
        if (!params.carnot) {
            throw ConfigError("catalog entry 'carnot' needs structure constants");
        }
        return carnot(*params.carnot);
    }
    throw UnknownCatalogName(name);
}

} // namespace subrig
