#include "videoqa/params.hpp"

#include <algorithm>
#include <cmath>

#include "videoqa/errors.hpp"

namespace videoqa {

Tensor& ParamStore::add(const std::string& name, Tensor t) {
    if (index_.count(name)) throw ContractError("ParamStore: duplicate name '" + name + "'");
    order_.push_back(name);
    auto [it, ok] = tensors_.emplace(name, std::move(t));
    (void)ok;
    return it->second;
}

Tensor& ParamStore::get(const std::string& name) {
    auto it = tensors_.find(name);
    if (it == tensors_.end()) throw ContractError("ParamStore: unknown name '" + name + "'");
    return it->second;
}

const Tensor& ParamStore::get(const std::string& name) const {
    auto it = tensors_.find(name);
    if (it == tensors_.end()) throw ContractError("ParamStore: unknown name '" + name + "'");
    return it->second;
}

int64_t ParamStore::total_size() const {
    int64_t n = 0;
    for (const auto& name : order_) n += get(name).numel();
    return n;
}

ParamStore ParamStore::zeros_like() const {
    ParamStore out;
    for (const auto& name : order_) out.add(name, Tensor::zeros(get(name).shape));
    return out;
}

bool ParamStore::all_finite() const {
    for (const auto& name : order_) {
        if (!get(name).all_finite()) return false;
    }
    return true;
}

Var GraphBinder::operator()(const std::string& name) {
    auto it = bound_index_.find(name);
    if (it != bound_index_.end()) return bound_[it->second].second;
    Var v = graph_->param(store_->get(name));
    bound_index_.emplace(name, bound_.size());
    bound_.emplace_back(name, v);
    return v;
}

void GraphBinder::accumulate_grads(ParamStore& out) const {
    for (const auto& [name, var] : bound_) {
        const Tensor& g = graph_->grad(var);
        Tensor& dst = out.get(name);
        check_same_shape(dst, g, "accumulate_grads");
        for (size_t i = 0; i < dst.data.size(); ++i) dst.data[i] += g.data[i];
    }
}

double finite_diff_check(const std::function<double(const ParamStore&)>& f,
                         const ParamStore& params, const ParamStore& analytic_grads, double eps) {
    if (eps <= 0) throw ContractError("finite_diff_check: eps must be positive");
    ParamStore work;
    for (const auto& name : params.names()) work.add(name, params.get(name));
    double worst = 0.0;
    for (const auto& name : params.names()) {
        Tensor& t = work.get(name);
        const Tensor& ga = analytic_grads.get(name);
        for (size_t i = 0; i < t.data.size(); ++i) {
            double saved = t.data[i];
            t.data[i] = saved + eps;
            double up = f(work);
            t.data[i] = saved - eps;
            double down = f(work);
            t.data[i] = saved;
            double numeric = (up - down) / (2.0 * eps);
            double analytic = ga.data[i];
            double denom = std::max(1e-8, std::abs(analytic) + std::abs(numeric));
            worst = std::max(worst, std::abs(analytic - numeric) / denom);
        }
    }
    return worst;
}

}  // namespace videoqa
