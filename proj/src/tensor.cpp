#include "hrgnn/tensor.hpp"

#include <cassert>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hrgnn/errors.hpp"

namespace hrgnn {

namespace {

std::int64_t shape_product(const std::vector<int>& shape) {
    std::int64_t n = 1;
    for (int d : shape) {
        if (d <= 0) throw ShapeError("tensor dimension must be positive, got " + shape_str(shape));
        n *= d;
    }
    return n;
}

}  // namespace

Tensor::Tensor(std::vector<int> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_.empty() || shape_.size() > 2)
        throw ShapeError("tensor rank must be 1 or 2, got " + shape_str(shape_));
    if (shape_product(shape_) != static_cast<std::int64_t>(data_.size()))
        throw ShapeError("data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_str(shape_));
}

Tensor Tensor::zeros(std::vector<int> shape) {
    std::int64_t n = shape_product(shape);
    return Tensor(std::move(shape), std::vector<double>(static_cast<std::size_t>(n), 0.0));
}

Tensor Tensor::full(std::vector<int> shape, double value) {
    std::int64_t n = shape_product(shape);
    return Tensor(std::move(shape), std::vector<double>(static_cast<std::size_t>(n), value));
}

Tensor Tensor::scalar(double value) { return Tensor({1}, {value}); }

Tensor Tensor::row(std::vector<double> values) {
    int n = static_cast<int>(values.size());
    return Tensor({1, n}, std::move(values));
}

Tensor Tensor::vec(std::vector<double> values) {
    int n = static_cast<int>(values.size());
    return Tensor({n}, std::move(values));
}

Tensor Tensor::identity(int n) {
    Tensor t = zeros({n, n});
    for (int i = 0; i < n; ++i) t.at(i, i) = 1.0;
    return t;
}

int Tensor::rows() const {
    assert(rank() == 2);
    return shape_[0];
}

int Tensor::cols() const {
    assert(rank() == 2);
    return shape_[1];
}

double& Tensor::at(int r, int c) {
    assert(rank() == 2 && r >= 0 && r < shape_[0] && c >= 0 && c < shape_[1]);
    return data_[static_cast<std::size_t>(r) * shape_[1] + c];
}

double Tensor::at(int r, int c) const {
    assert(rank() == 2 && r >= 0 && r < shape_[0] && c >= 0 && c < shape_[1]);
    return data_[static_cast<std::size_t>(r) * shape_[1] + c];
}

bool Tensor::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

void Tensor::fill(double value) {
    std::fill(data_.begin(), data_.end(), value);
}

std::string Tensor::shape_str() const { return hrgnn::shape_str(shape_); }

std::string shape_str(const std::vector<int>& shape) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << ", ";
        os << shape[i];
    }
    os << ")";
    return os.str();
}

Tensor matmul_nn(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.rows())
        throw ShapeError("matmul shape mismatch: " + a.shape_str() + " x " + b.shape_str());
    const int m = a.rows(), k = a.cols(), n = b.cols();
    Tensor c = Tensor::zeros({m, n});
    const double* __restrict__ pa = a.data();
    const double* __restrict__ pb = b.data();
    double* __restrict__ pc = c.data();
    for (int i = 0; i < m; ++i) {
        const double* arow = pa + static_cast<std::size_t>(i) * k;
        double* crow = pc + static_cast<std::size_t>(i) * n;
        for (int l = 0; l < k; ++l) {
            const double av = arow[l];
            const double* brow = pb + static_cast<std::size_t>(l) * n;
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.cols())
        throw ShapeError("matmul_nt shape mismatch: " + a.shape_str() + " x " + b.shape_str() + "^T");
    const int m = a.rows(), k = a.cols(), n = b.rows();
    Tensor c = Tensor::zeros({m, n});
    const double* __restrict__ pa = a.data();
    const double* __restrict__ pb = b.data();
    double* __restrict__ pc = c.data();
    for (int i = 0; i < m; ++i) {
        const double* arow = pa + static_cast<std::size_t>(i) * k;
        double* crow = pc + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
            const double* brow = pb + static_cast<std::size_t>(j) * k;
            double acc = 0.0;
            for (int l = 0; l < k; ++l) acc += arow[l] * brow[l];
            crow[j] = acc;
        }
    }
    return c;
}

Tensor matmul_tn(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.rows() != b.rows())
        throw ShapeError("matmul_tn shape mismatch: " + a.shape_str() + "^T x " + b.shape_str());
    const int m = a.cols(), k = a.rows(), n = b.cols();
    Tensor c = Tensor::zeros({m, n});
    const double* __restrict__ pa = a.data();
    const double* __restrict__ pb = b.data();
    double* __restrict__ pc = c.data();
    for (int l = 0; l < k; ++l) {
        const double* arow = pa + static_cast<std::size_t>(l) * m;
        const double* brow = pb + static_cast<std::size_t>(l) * n;
        for (int i = 0; i < m; ++i) {
            const double av = arow[i];
            double* crow = pc + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

Tensor mean_rows(const Tensor& m) {
    if (m.rank() != 2) throw ShapeError("mean_rows expects a matrix, got " + m.shape_str());
    const int r = m.rows(), c = m.cols();
    Tensor out = Tensor::zeros({1, c});
    for (int j = 0; j < c; ++j) {
        double sum = 0.0, comp = 0.0;  // Kahan, keeps the mean order-independent to ~1e-15
        for (int i = 0; i < r; ++i) {
            double y = m.at(i, j) - comp;
            double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        out.at(0, j) = sum / r;
    }
    return out;
}

}  // namespace hrgnn
