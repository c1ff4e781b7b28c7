#pragma once

#include <cmath>
#include <stdexcept>

namespace dilat {

/// An element of the scale group (0, +inf) under multiplication. The value 0
/// is not representable; limits at 0 are taken through EpsSchedule only.
class Scale {
  public:
    explicit Scale(double v) : value_(v) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("Scale: value must be a finite positive real");
    }

    double value() const { return value_; }

    Scale inverse() const { return Scale(1.0 / value_); }

    friend Scale operator*(Scale a, Scale b) { return Scale(a.value_ * b.value_); }

    bool is_one() const { return value_ == 1.0; }

  private:
    double value_;
};

}  // namespace dilat
