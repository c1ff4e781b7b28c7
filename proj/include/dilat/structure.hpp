#pragma once

#include <memory>
#include <string>

#include "dilat/geometry.hpp"
#include "dilat/scale.hpp"

namespace dilat {

/// A dilatation structure: a metric on a model space together with a
/// base-point family of dilatations delta^x_eps, evaluated in closed form.
/// Instances are immutable after construction and safe to share across
/// threads. Domains are the whole model space, so the axiom-A0 inclusion
/// chain is trivial; the constants A and B survive as sampling-radius
/// metadata.
class DilatationStructure {
  public:
    virtual ~DilatationStructure() = default;

    const std::string& name() const { return name_; }
    std::size_t dim() const { return dim_; }
    double domain_radius_A() const { return radius_A_; }
    double domain_radius_B() const { return radius_B_; }

    double distance(const Point& x, const Point& y) const {
        validate(x, "distance x");
        validate(y, "distance y");
        return metric(x, y);
    }

    /// delta^x_eps y. The identities delta^x_1 = id and delta^x_eps x = x are
    /// guaranteed exactly: they are axioms, not approximations.
    Point dilate(const Point& x, Scale eps, const Point& y) const {
        validate(x, "dilate base");
        validate(y, "dilate target");
        if (eps.is_one()) return y;
        if (points_equal(x, y)) return x;
        return map(x, eps.value(), y);
    }

    Point dilate(const Point& x, double eps, const Point& y) const {
        return dilate(x, Scale(eps), y);
    }

  protected:
    DilatationStructure(std::string name, std::size_t dim, double radius_A = 2.0,
                        double radius_B = 1.5)
        : name_(std::move(name)), dim_(dim), radius_A_(radius_A), radius_B_(radius_B) {}

    virtual double metric(const Point& x, const Point& y) const = 0;
    virtual Point map(const Point& x, double eps, const Point& y) const = 0;

  private:
    void validate(const Point& p, const char* what) const {
        require_dim(p, dim_, what);
        require_finite(p, what);
    }

    std::string name_;
    std::size_t dim_;
    double radius_A_;
    double radius_B_;
};

using StructurePtr = std::shared_ptr<const DilatationStructure>;

}  // namespace dilat
