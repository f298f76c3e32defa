#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hrgnn {

// Dense row-major tensor of 64-bit floats. The model only ever needs
// vectors and matrices, so rank is restricted to 1 or 2.
class Tensor {
public:
    Tensor() = default;
    Tensor(std::vector<int> shape, std::vector<double> data);

    static Tensor zeros(std::vector<int> shape);
    static Tensor full(std::vector<int> shape, double value);
    static Tensor scalar(double value);                    // shape {1}
    static Tensor row(std::vector<double> values);         // shape {1, n}
    static Tensor vec(std::vector<double> values);         // shape {n}
    static Tensor identity(int n);

    const std::vector<int>& shape() const { return shape_; }
    int rank() const { return static_cast<int>(shape_.size()); }
    std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }

    // 2-D accessors; assert rank in debug builds.
    int rows() const;
    int cols() const;
    double& at(int r, int c);
    double at(int r, int c) const;

    double& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
    double operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
    bool is_scalar() const { return size() == 1; }
    bool all_finite() const;

    void fill(double value);
    std::string shape_str() const;

private:
    std::vector<int> shape_;
    std::vector<double> data_;
};

// C = A * B, A: m x k, B: k x n.
Tensor matmul_nn(const Tensor& a, const Tensor& b);
// C = A * B^T, A: m x k, B: n x k.
Tensor matmul_nt(const Tensor& a, const Tensor& b);
// C = A^T * B, A: k x m, B: k x n.
Tensor matmul_tn(const Tensor& a, const Tensor& b);

// Mean over rows of a 2-D tensor, compensated summation. Result is 1 x cols.
Tensor mean_rows(const Tensor& m);

std::string shape_str(const std::vector<int>& shape);

}  // namespace hrgnn
