#include "videoqa/tensor.hpp"

#include <cmath>
#include <sstream>

#include "videoqa/errors.hpp"
#include "videoqa/rng.hpp"

namespace videoqa {

namespace {

int64_t shape_numel(const std::vector<int>& shape) {
    if (shape.empty()) throw DimensionError("tensor shape must be non-empty");
    int64_t n = 1;
    for (int d : shape) {
        if (d <= 0) throw DimensionError("tensor extents must be positive");
        n *= d;
    }
    return n;
}

}  // namespace

Tensor::Tensor(std::vector<int> s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {
    if (shape_numel(shape) != static_cast<int64_t>(data.size())) {
        throw DimensionError("tensor data length does not match shape " + shape_str());
    }
}

Tensor Tensor::zeros(std::vector<int> shape) {
    int64_t n = shape_numel(shape);
    Tensor t;
    t.shape = std::move(shape);
    t.data.assign(static_cast<size_t>(n), 0.0);
    return t;
}

Tensor Tensor::full(std::vector<int> shape, double value) {
    Tensor t = zeros(std::move(shape));
    for (double& x : t.data) x = value;
    return t;
}

Tensor Tensor::scalar(double value) { return Tensor({1}, {value}); }

Tensor Tensor::vec(std::vector<double> values) {
    if (values.empty()) throw DimensionError("empty vector tensor");
    int n = static_cast<int>(values.size());
    return Tensor({n}, std::move(values));
}

Tensor Tensor::uniform(std::vector<int> shape, double lo, double hi, Rng& rng) {
    Tensor t = zeros(std::move(shape));
    for (double& x : t.data) x = rng.uniform(lo, hi);
    return t;
}

bool Tensor::all_finite() const {
    for (double x : data) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

bool Tensor::all_zero() const {
    for (double x : data) {
        if (x != 0.0) return false;
    }
    return true;
}

double Tensor::sum() const {
    double s = 0.0;
    for (double x : data) s += x;
    return s;
}

double Tensor::norm() const {
    double s = 0.0;
    for (double x : data) s += x * x;
    return std::sqrt(s);
}

std::string Tensor::shape_str() const {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < shape.size(); ++i) {
        if (i) os << 'x';
        os << shape[i];
    }
    os << ']';
    return os.str();
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (!a.same_shape(b)) {
        throw DimensionError(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " + b.shape_str());
    }
}

}  // namespace videoqa
