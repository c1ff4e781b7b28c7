#pragma once

#include <functional>
#include <optional>
#include <string>

#include "dilat/geometry.hpp"

namespace dilat {

/// A parametrized curve [a,b] -> model space, evaluated by closure (fixtures
/// are exact formulas, not sample arrays). lip_bound, when present, is a
/// promised Lipschitz constant that tests may check on sampled increments.
struct Curve {
    double a = 0.0;
    double b = 1.0;
    std::function<Point(double)> eval_fn;
    std::optional<double> lip_bound;
    std::string name;

    Point eval(double t) const {
        if (!(t >= a - 1e-12 && t <= b + 1e-12))
            throw std::invalid_argument("Curve::eval: parameter outside [a,b]");
        return eval_fn(std::min(std::max(t, a), b));
    }

    double length_of_domain() const { return b - a; }
};

/// Depth-limited Cantor staircase: the piecewise-linear stage-`depth`
/// approximant of the Cantor function on [0,1].
double cantor_staircase(double t, int depth);

/// Named curve fixtures, dimension-checked against `dim`:
///   segment            (t, 0, ...) on [0,1]
///   sign               (t, sign t) on [-1,1]
///   abs                (t, |t|) on [-1,1]
///   circle[:w]         (cos wt, sin wt) on [0, 2pi]
///   polyline           unit-speed staircase with 3 right-angle corners
///   cantor[:depth]     staircase into the line, depth defaults to 12
///   cantor-graph[:d]   t -> (t, cantor(t))
///   hline              (t, 0, 0) on [0,1]
///   hlift-circle       horizontal lift (cos t, sin t, t/2) on [0, 2pi]
///   vseg               (0, 0, t) on [0,1]
///   file:<path>        CSV rows "t,x0,x1[,x2]" with linear interpolation
Curve make_curve(const std::string& spec, std::size_t dim);

}  // namespace dilat
