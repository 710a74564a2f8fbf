#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace videoqa {

class Rng;

// Dense row-major tensor of 64-bit floats. Shapes are lists of positive
// extents; scalars use shape {1}.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> data;

    Tensor() = default;
    Tensor(std::vector<int> s, std::vector<double> d);

    static Tensor zeros(std::vector<int> shape);
    static Tensor full(std::vector<int> shape, double value);
    static Tensor scalar(double value);
    static Tensor vec(std::vector<double> values);
    // Entries drawn i.i.d. uniform in [lo, hi).
    static Tensor uniform(std::vector<int> shape, double lo, double hi, Rng& rng);

    int ndim() const { return static_cast<int>(shape.size()); }
    int dim(int i) const { return shape[static_cast<size_t>(i)]; }
    int64_t numel() const { return static_cast<int64_t>(data.size()); }
    bool is_scalar() const { return data.size() == 1; }

    double& at(int i) { return data[static_cast<size_t>(i)]; }
    double at(int i) const { return data[static_cast<size_t>(i)]; }
    double& at(int i, int j) { return data[static_cast<size_t>(i) * dim(1) + j]; }
    double at(int i, int j) const { return data[static_cast<size_t>(i) * dim(1) + j]; }

    bool same_shape(const Tensor& other) const { return shape == other.shape; }
    bool all_finite() const;
    bool all_zero() const;
    double sum() const;
    // Euclidean norm of the flattened data.
    double norm() const;

    std::string shape_str() const;
};

// Throws DimensionError naming both shapes when they differ.
void check_same_shape(const Tensor& a, const Tensor& b, const char* op);

}  // namespace videoqa
