#include "dilat/curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dilat {

double cantor_staircase(double t, int depth) {
    t = std::min(std::max(t, 0.0), 1.0);
    double lo = 0.0, scale = 1.0;
    for (int i = 0; i < depth; ++i) {
        if (t < 1.0 / 3.0) {
            t *= 3.0;
            scale *= 0.5;
        } else if (t > 2.0 / 3.0) {
            t = 3.0 * t - 2.0;
            lo += 0.5 * scale;
            scale *= 0.5;
        } else {
            return lo + 0.5 * scale;
        }
    }
    return lo + scale * t;
}

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

Curve segment_curve(std::size_t dim) {
    Curve c;
    c.a = 0.0;
    c.b = 1.0;
    c.name = "segment";
    c.lip_bound = 1.0;
    c.eval_fn = [dim](double t) {
        Point p(dim, 0.0);
        p[0] = t;
        return p;
    };
    return c;
}

Curve sign_curve() {
    Curve c;
    c.a = -1.0;
    c.b = 1.0;
    c.name = "sign";
    c.eval_fn = [](double t) {
        return Point{t, t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0)};
    };
    return c;
}

Curve abs_curve() {
    Curve c;
    c.a = -1.0;
    c.b = 1.0;
    c.name = "abs";
    c.lip_bound = std::sqrt(2.0);
    c.eval_fn = [](double t) { return Point{t, std::abs(t)}; };
    return c;
}

Curve circle_curve(double w) {
    Curve c;
    c.a = 0.0;
    c.b = kTau;
    c.name = "circle";
    c.lip_bound = std::abs(w);
    c.eval_fn = [w](double t) { return Point{std::cos(w * t), std::sin(w * t)}; };
    return c;
}

Curve polyline_curve() {
    // Unit-speed through (0,0) -> (1,0) -> (1,1) -> (2,1) -> (2,2):
    // three interior right-angle corners at t = 1, 2, 3.
    static const std::vector<Point> pts = {
        {0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {2.0, 1.0}, {2.0, 2.0}};
    Curve c;
    c.a = 0.0;
    c.b = 4.0;
    c.name = "polyline";
    c.lip_bound = 1.0;
    c.eval_fn = [](double t) {
        const int seg = std::min(3, static_cast<int>(std::floor(t)));
        const double s = t - seg;
        return Point{pts[seg][0] + s * (pts[seg + 1][0] - pts[seg][0]),
                     pts[seg][1] + s * (pts[seg + 1][1] - pts[seg][1])};
    };
    return c;
}

Curve cantor_curve(int depth) {
    Curve c;
    c.a = 0.0;
    c.b = 1.0;
    c.name = "cantor:" + std::to_string(depth);
    c.eval_fn = [depth](double t) { return Point{cantor_staircase(t, depth)}; };
    return c;
}

Curve cantor_graph_curve(int depth) {
    Curve c;
    c.a = 0.0;
    c.b = 1.0;
    c.name = "cantor-graph:" + std::to_string(depth);
    c.eval_fn = [depth](double t) { return Point{t, cantor_staircase(t, depth)}; };
    return c;
}

Curve hline_curve() {
    Curve c;
    c.a = 0.0;
    c.b = 1.0;
    c.name = "hline";
    c.lip_bound = 1.0;
    c.eval_fn = [](double t) { return Point{t, 0.0, 0.0}; };
    return c;
}

Curve hlift_circle_curve() {
    // Horizontal lift of the unit circle through (1,0,0): the third
    // coordinate tracks half the swept area, so the tangent stays in the
    // left-invariant horizontal plane.
    Curve c;
    c.a = 0.0;
    c.b = kTau;
    c.name = "hlift-circle";
    c.lip_bound = 1.0;
    c.eval_fn = [](double t) { return Point{std::cos(t), std::sin(t), 0.5 * t}; };
    return c;
}

Curve vseg_curve() {
    Curve c;
    c.a = 0.0;
    c.b = 1.0;
    c.name = "vseg";
    c.eval_fn = [](double t) { return Point{0.0, 0.0, t}; };
    return c;
}

Curve csv_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("make_curve: cannot open '" + path + "'");
    std::vector<double> ts;
    std::vector<Point> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(row, cell, ',')) {
            if (cell.find_first_not_of(" \t\r") == std::string::npos) continue;
            vals.push_back(std::stod(cell));
        }
        if (vals.empty()) continue;
        if (vals.size() < 2)
            throw std::invalid_argument("make_curve: CSV row needs t plus coordinates");
        ts.push_back(vals[0]);
        pts.emplace_back(vals.begin() + 1, vals.end());
    }
    if (ts.size() < 2) throw std::invalid_argument("make_curve: CSV curve needs >= 2 samples");
    for (std::size_t i = 1; i < ts.size(); ++i) {
        if (!(ts[i] > ts[i - 1]))
            throw std::invalid_argument("make_curve: CSV t column must increase strictly");
        if (pts[i].size() != pts[0].size())
            throw std::invalid_argument("make_curve: CSV rows have mixed dimensions");
    }
    Curve c;
    c.a = ts.front();
    c.b = ts.back();
    c.name = "file:" + path;
    c.eval_fn = [ts = std::move(ts), pts = std::move(pts)](double t) {
        auto it = std::upper_bound(ts.begin(), ts.end(), t);
        std::size_t i = std::min(ts.size() - 2, static_cast<std::size_t>(
                                                    std::max<std::ptrdiff_t>(
                                                        0, (it - ts.begin()) - 1)));
        const double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
        return affine_combine(pts[i], pts[i + 1], 1.0 - w, w);
    };
    return c;
}

int parse_depth(const std::string& s) {
    const int d = std::stoi(s);
    if (d < 1 || d > 40) throw std::invalid_argument("make_curve: depth out of range");
    return d;
}

}  // namespace

Curve make_curve(const std::string& spec, std::size_t dim) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

    Curve c;
    if (head == "segment")
        c = segment_curve(dim);
    else if (head == "sign")
        c = sign_curve();
    else if (head == "abs")
        c = abs_curve();
    else if (head == "circle")
        c = circle_curve(rest.empty() ? 1.0 : std::stod(rest));
    else if (head == "polyline")
        c = polyline_curve();
    else if (head == "cantor")
        c = cantor_curve(rest.empty() ? 12 : parse_depth(rest));
    else if (head == "cantor-graph")
        c = cantor_graph_curve(rest.empty() ? 12 : parse_depth(rest));
    else if (head == "hline")
        c = hline_curve();
    else if (head == "hlift-circle")
        c = hlift_circle_curve();
    else if (head == "vseg")
        c = vseg_curve();
    else if (head == "file")
        c = csv_curve(rest);
    else
        throw std::invalid_argument("make_curve: unknown curve '" + spec + "'");

    if (c.eval(c.a).size() != dim)
        throw std::invalid_argument("make_curve: curve '" + spec + "' has dimension " +
                                    std::to_string(c.eval(c.a).size()) + ", structure expects " +
                                    std::to_string(dim));
    return c;
}

}  // namespace dilat
