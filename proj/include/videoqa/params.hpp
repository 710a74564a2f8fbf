#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "videoqa/graph.hpp"
#include "videoqa/tensor.hpp"

namespace videoqa {

// Named tensors in stable insertion order. Used for model parameters,
// accumulated gradients, and optimizer state.
class ParamStore {
public:
    Tensor& add(const std::string& name, Tensor t);
    Tensor& get(const std::string& name);
    const Tensor& get(const std::string& name) const;
    bool has(const std::string& name) const { return index_.count(name) > 0; }
    const std::vector<std::string>& names() const { return order_; }
    size_t count() const { return order_.size(); }
    int64_t total_size() const;
    // Same names, same shapes, all entries zero.
    ParamStore zeros_like() const;
    bool all_finite() const;

private:
    std::vector<std::string> order_;
    std::unordered_map<std::string, Tensor> tensors_;
};

// Binds parameters into a graph once per forward pass and remembers the
// node each name maps to, so gradients can be read back out by name.
class GraphBinder {
public:
    GraphBinder(Graph& g, const ParamStore& store) : graph_(&g), store_(&store) {}

    // Returns the graph node for a named parameter, creating it on first use.
    Var operator()(const std::string& name);

    // Adds each bound parameter's gradient into `out` (same names/shapes).
    void accumulate_grads(ParamStore& out) const;

private:
    Graph* graph_;
    const ParamStore* store_;
    std::vector<std::pair<std::string, Var>> bound_;
    std::unordered_map<std::string, size_t> bound_index_;
};

// Max relative error between the analytic gradient and central finite
// differences of `f` over every parameter coordinate:
//   |analytic - numeric| / max(1e-8, |analytic| + |numeric|).
// `f` must evaluate the same scalar the analytic gradients were taken from.
double finite_diff_check(const std::function<double(const ParamStore&)>& f,
                         const ParamStore& params, const ParamStore& analytic_grads, double eps);

}  // namespace videoqa
