#include "dilat/structures.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace {
std::string format_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}
}  // namespace

namespace dilat {

// ---------------------------------------------------------------- Euclidean

EuclideanStructure::EuclideanStructure(std::size_t dim, double p)
    : DilatationStructure("euclidean:" + std::to_string(dim), dim), p_(p) {
    if (dim == 0) throw std::invalid_argument("EuclideanStructure: dim must be positive");
    if (!(p >= 1.0)) throw std::invalid_argument("EuclideanStructure: p-norm needs p >= 1");
}

double EuclideanStructure::metric(const Point& x, const Point& y) const {
    return pnorm(sub(y, x), p_);
}

Point EuclideanStructure::map(const Point& x, double eps, const Point& y) const {
    Point r(dim());
    for (std::size_t i = 0; i < dim(); ++i) r[i] = x[i] + eps * (y[i] - x[i]);
    return r;
}

// ----------------------------------------------------------------- Rotating

RotatingStructure::RotatingStructure(double theta)
    : DilatationStructure("rotating:" + format_param(theta), 2), theta_(theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("RotatingStructure: theta not finite");
}

double RotatingStructure::metric(const Point& x, const Point& y) const {
    return dist2(x, y);
}

Point RotatingStructure::map(const Point& x, double eps, const Point& y) const {
    const double h1 = y[0] - x[0], h2 = y[1] - x[1];
    const double ang = theta_ * std::log(eps);
    const double c = std::cos(ang), s = std::sin(ang);
    return {x[0] + eps * (c * h1 - s * h2), x[1] + eps * (s * h1 + c * h2)};
}

// --------------------------------------------------------------- Heisenberg

HeisenbergStructure::HeisenbergStructure() : DilatationStructure("heisenberg", 3) {}

Point HeisenbergStructure::group_op(const Point& g, const Point& h) {
    return {g[0] + h[0], g[1] + h[1], g[2] + h[2] + 0.5 * (g[0] * h[1] - g[1] * h[0])};
}

Point HeisenbergStructure::group_inv(const Point& g) { return {-g[0], -g[1], -g[2]}; }

Point HeisenbergStructure::graded_dilation(double eps, const Point& g) {
    return {eps * g[0], eps * g[1], eps * eps * g[2]};
}

double HeisenbergStructure::gauge(const Point& g) {
    const double r2 = g[0] * g[0] + g[1] * g[1];
    return std::pow(r2 * r2 + 16.0 * g[2] * g[2], 0.25);
}

double HeisenbergStructure::metric(const Point& x, const Point& y) const {
    return gauge(group_op(group_inv(x), y));
}

Point HeisenbergStructure::map(const Point& x, double eps, const Point& y) const {
    return group_op(x, graded_dilation(eps, group_op(group_inv(x), y)));
}

// --------------------------------------------------------- Heisenberg frame

HeisenbergFrameStructure::HeisenbergFrameStructure()
    : DilatationStructure("heisenberg-frame", 3) {}

double HeisenbergFrameStructure::metric(const Point& x, const Point& y) const {
    return norm2(HeisenbergStructure::group_op(HeisenbergStructure::group_inv(x), y));
}

Point HeisenbergFrameStructure::map(const Point& x, double eps, const Point& y) const {
    Point r(3);
    for (std::size_t i = 0; i < 3; ++i) r[i] = x[i] + eps * (y[i] - x[i]);
    return r;
}

// ------------------------------------------------------------------- Broken

BrokenSquareStructure::BrokenSquareStructure(std::size_t dim)
    : DilatationStructure("broken:" + std::to_string(dim), dim) {
    if (dim == 0) throw std::invalid_argument("BrokenSquareStructure: dim must be positive");
}

double BrokenSquareStructure::metric(const Point& x, const Point& y) const {
    return dist2(x, y);
}

Point BrokenSquareStructure::map(const Point& x, double eps, const Point& y) const {
    Point r(dim());
    for (std::size_t i = 0; i < dim(); ++i) r[i] = x[i] + eps * eps * (y[i] - x[i]);
    return r;
}

// ----------------------------------------------------------------- registry

namespace {

double parse_real(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("make_structure: malformed ") + what + " '" + s +
                                    "'");
    }
}

std::size_t parse_dim(const std::string& s) {
    try {
        std::size_t used = 0;
        long v = std::stol(s, &used);
        if (used != s.size() || v < 1 || v > 16) throw std::invalid_argument(s);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw std::invalid_argument("make_structure: malformed dimension '" + s + "'");
    }
}

}  // namespace

StructurePtr make_structure(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (head == "euclidean") {
        if (rest.empty()) throw std::invalid_argument("make_structure: euclidean needs ':<dim>'");
        const auto colon2 = rest.find(':');
        const std::string dim_part = rest.substr(0, colon2);
        double p = 2.0;
        if (colon2 != std::string::npos) {
            std::string p_part = rest.substr(colon2 + 1);
            if (p_part.size() < 2 || p_part[0] != 'p')
                throw std::invalid_argument("make_structure: expected 'p<value>' after dimension");
            p = p_part.substr(1) == "inf" ? std::numeric_limits<double>::infinity()
                                          : parse_real(p_part.substr(1), "p-norm");
        }
        return std::make_shared<EuclideanStructure>(parse_dim(dim_part), p);
    }
    if (head == "rotating") {
        if (rest.empty()) throw std::invalid_argument("make_structure: rotating needs ':<theta>'");
        return std::make_shared<RotatingStructure>(parse_real(rest, "theta"));
    }
    if (head == "heisenberg" && rest.empty()) return std::make_shared<HeisenbergStructure>();
    if (head == "heisenberg-frame" && rest.empty())
        return std::make_shared<HeisenbergFrameStructure>();
    if (head == "broken") {
        return std::make_shared<BrokenSquareStructure>(rest.empty() ? 2 : parse_dim(rest));
    }
    throw std::invalid_argument("make_structure: unknown structure '" + spec + "'");
}

}  // namespace dilat
