#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace dilat {

/// A point of the model space. All shipped structures live on R^1..R^3,
/// but nothing here assumes a fixed dimension.
using Point = std::vector<double>;

inline bool all_finite(const Point& p) {
    for (double c : p)
        if (!std::isfinite(c)) return false;
    return true;
}

inline bool all_finite(double v) { return std::isfinite(v); }

inline void require_finite(const Point& p, const char* what) {
    if (!all_finite(p))
        throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
}

inline void require_dim(const Point& p, std::size_t dim, const char* what) {
    if (p.size() != dim)
        throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                    std::to_string(dim) + ", got " + std::to_string(p.size()));
}

inline Point add(const Point& a, const Point& b) {
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Point sub(const Point& a, const Point& b) {
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Point scaled(const Point& a, double s) {
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

/// ca*a + cb*b, componentwise.
inline Point affine_combine(const Point& a, const Point& b, double ca, double cb) {
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = ca * a[i] + cb * b[i];
    return r;
}

inline double affine_combine(double a, double b, double ca, double cb) {
    return ca * a + cb * b;
}

inline double norm2(const Point& a) {
    double s = 0.0;
    for (double c : a) s += c * c;
    return std::sqrt(s);
}

inline double pnorm(const Point& a, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double c : a) m = std::max(m, std::abs(c));
        return m;
    }
    if (p == 2.0) return norm2(a);
    double s = 0.0;
    for (double c : a) s += std::pow(std::abs(c), p);
    return std::pow(s, 1.0 / p);
}

inline double dist2(const Point& a, const Point& b) { return norm2(sub(a, b)); }

inline bool points_equal(const Point& a, const Point& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

/// Deterministic RNG with a portable uniform-double mapping. mt19937_64 output
/// is pinned by the standard, and the (x >> 11) * 2^-53 mapping avoids the
/// implementation-defined behaviour of uniform_real_distribution, so seeded
/// runs are reproducible byte for byte.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        // xorshift* keeps this header-only and bit-stable everywhere.
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1DULL;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform point in the axis box [center - r, center + r]^dim.
    Point point_in_box(const Point& center, double r) {
        Point p(center.size());
        for (std::size_t i = 0; i < center.size(); ++i)
            p[i] = center[i] + uniform(-r, r);
        return p;
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

  private:
    std::uint64_t state_;
};

inline std::string format_point(const Point& p) {
    std::string s = "(";
    char buf[32];
    for (std::size_t i = 0; i < p.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", p[i]);
        s += buf;
        if (i + 1 < p.size()) s += ", ";
    }
    s += ")";
    return s;
}

}  // namespace dilat
