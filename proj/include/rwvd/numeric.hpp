#pragma once

#include <cmath>
#include <span>

namespace rwvd {

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // root-mean-square residual
    std::size_t points = 0;
};

// Ordinary least squares y ~ intercept + slope * x. Requires at least two distinct x.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace rwvd
