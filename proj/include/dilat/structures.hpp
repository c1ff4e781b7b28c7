#pragma once

#include <string>

#include "dilat/structure.hpp"

namespace dilat {

/// R^dim with a p-norm distance and the linear dilatations
/// delta^x_eps y = x + eps (y - x).
class EuclideanStructure : public DilatationStructure {
  public:
    explicit EuclideanStructure(std::size_t dim, double p = 2.0);
    double p() const { return p_; }

  protected:
    double metric(const Point& x, const Point& y) const override;
    Point map(const Point& x, double eps, const Point& y) const override;

  private:
    double p_;
};

/// R^2 with Euclidean distance and the spiral dilatations
/// delta^x_eps y = x + eps^z (y - x), z = 1 + i*theta: each step scales by
/// eps and rotates by theta * ln(eps). The rotation factor has modulus 1, so
/// |delta^x_eps y - x| = eps |y - x| exactly.
class RotatingStructure : public DilatationStructure {
  public:
    explicit RotatingStructure(double theta);
    double theta() const { return theta_; }

  protected:
    double metric(const Point& x, const Point& y) const override;
    Point map(const Point& x, double eps, const Point& y) const override;

  private:
    double theta_;
};

/// The Heisenberg group on R^3: twisted product, graded dilations
/// Delta_eps(a,b,c) = (eps a, eps b, eps^2 c), Cygan-Koranyi gauge
/// N(a,b,c) = ((a^2+b^2)^2 + 16 c^2)^(1/4), left-invariant gauge distance
/// d(x,y) = N(x^-1 y), and base-point dilatations
/// delta^x_eps u = x . Delta_eps(x^-1 u).
class HeisenbergStructure : public DilatationStructure {
  public:
    HeisenbergStructure();

    static Point group_op(const Point& g, const Point& h);
    static Point group_inv(const Point& g);
    static Point graded_dilation(double eps, const Point& g);
    static double gauge(const Point& g);

  protected:
    double metric(const Point& x, const Point& y) const override;
    Point map(const Point& x, double eps, const Point& y) const override;
};

/// R^3 carrying the Euclidean norm read in Heisenberg group coordinates,
/// d(x,y) = |x^-1 y|_2, with the isotropic dilatations of Euclidean space.
/// This is the lower structure of the shipped lookdown pair: on horizontal
/// increments it agrees with the gauge at first order, which is what makes
/// the 1-Lipschitz condition and the length comparison of the transfer
/// theorem hold. The twisted norm is a genuine metric only locally; the
/// default sampling radii keep probes inside that region.
class HeisenbergFrameStructure : public DilatationStructure {
  public:
    HeisenbergFrameStructure();

  protected:
    double metric(const Point& x, const Point& y) const override;
    Point map(const Point& x, double eps, const Point& y) const override;
};

/// Deliberately broken fixture: delta^x_eps y = x + eps^2 (y - x) satisfies
/// A0-A2 and A4 but its rescaled distance collapses, so the A3 limit is
/// degenerate. Negative-test material.
class BrokenSquareStructure : public DilatationStructure {
  public:
    explicit BrokenSquareStructure(std::size_t dim);

  protected:
    double metric(const Point& x, const Point& y) const override;
    Point map(const Point& x, double eps, const Point& y) const override;
};

/// Resolve a structure by name: "euclidean:<dim>" (optional ":p<p>" norm),
/// "rotating:<theta>", "heisenberg", "heisenberg-frame", "broken:<dim>".
/// Unknown or malformed names throw std::invalid_argument.
StructurePtr make_structure(const std::string& spec);

}  // namespace dilat
