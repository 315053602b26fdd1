#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace patchdyn {

// Dense 2D array of doubles, row index = first coordinate (xi), column = second (eta).
class Field2D {
public:
    Field2D() = default;
    Field2D(int n1, int n2, double fill = 0.0)
        : n1_(n1), n2_(n2), v_(static_cast<std::size_t>(n1) * n2, fill) {}

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    std::size_t size() const { return v_.size(); }

    double& operator()(int i, int j) {
        assert(i >= 0 && i < n1_ && j >= 0 && j < n2_);
        return v_[static_cast<std::size_t>(i) * n2_ + j];
    }
    double operator()(int i, int j) const {
        assert(i >= 0 && i < n1_ && j >= 0 && j < n2_);
        return v_[static_cast<std::size_t>(i) * n2_ + j];
    }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::vector<double>& raw() { return v_; }
    const std::vector<double>& raw() const { return v_; }

    bool same_shape(const Field2D& o) const { return n1_ == o.n1_ && n2_ == o.n2_; }

private:
    int n1_ = 0, n2_ = 0;
    std::vector<double> v_;
};

} // namespace patchdyn
