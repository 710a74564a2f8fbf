#include "videoqa/graph.hpp"

#include <algorithm>
#include <cmath>

#include "videoqa/errors.hpp"

namespace videoqa {

size_t Graph::check(Var v) const {
    if (!v.valid() || static_cast<size_t>(v.id) >= nodes_.size()) {
        throw ContractError("invalid graph node handle");
    }
    return static_cast<size_t>(v.id);
}

Var Graph::push(Node n) {
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Graph::input(Tensor value) {
    Node n;
    n.op = Op::Input;
    n.value = std::move(value);
    return push(std::move(n));
}

Var Graph::param(const Tensor& value) {
    Node n;
    n.op = Op::Param;
    n.needs_grad = true;
    n.value = value;
    return push(std::move(n));
}

namespace {

bool is_matrix(const Tensor& t) { return t.ndim() == 2; }
bool is_vector(const Tensor& t) { return t.ndim() == 1; }

}  // namespace

Var Graph::matmul(Var a, Var b) {
    const Tensor& A = value(a);
    const Tensor& B = value(b);
    if (!is_matrix(A) || !is_matrix(B) || A.dim(1) != B.dim(0)) {
        throw DimensionError("matmul: incompatible shapes " + A.shape_str() + " x " + B.shape_str());
    }
    int m = A.dim(0), k = A.dim(1), n = B.dim(1);
    Node node;
    node.op = Op::MatMul;
    node.inputs = {a.id, b.id};
    node.needs_grad = nodes_[check(a)].needs_grad || nodes_[check(b)].needs_grad;
    node.value = Tensor::zeros({m, n});
    for (int i = 0; i < m; ++i) {
        const double* arow = &A.data[static_cast<size_t>(i) * k];
        double* crow = &node.value.data[static_cast<size_t>(i) * n];
        for (int kk = 0; kk < k; ++kk) {
            double av = arow[kk];
            if (av == 0.0) continue;
            const double* brow = &B.data[static_cast<size_t>(kk) * n];
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
    return push(std::move(node));
}

Var Graph::matvec(Var w, Var x) {
    const Tensor& W = value(w);
    const Tensor& X = value(x);
    if (!is_matrix(W) || !is_vector(X) || W.dim(1) != X.dim(0)) {
        throw DimensionError("matvec: incompatible shapes " + W.shape_str() + " x " + X.shape_str());
    }
    int m = W.dim(0), n = W.dim(1);
    Node node;
    node.op = Op::MatVec;
    node.inputs = {w.id, x.id};
    node.needs_grad = nodes_[check(w)].needs_grad || nodes_[check(x)].needs_grad;
    node.value = Tensor::zeros({m});
    for (int i = 0; i < m; ++i) {
        const double* wrow = &W.data[static_cast<size_t>(i) * n];
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += wrow[j] * X.data[static_cast<size_t>(j)];
        node.value.data[static_cast<size_t>(i)] = s;
    }
    return push(std::move(node));
}

Var Graph::vecmat(Var x, Var m) {
    const Tensor& X = value(x);
    const Tensor& M = value(m);
    if (!is_vector(X) || !is_matrix(M) || X.dim(0) != M.dim(0)) {
        throw DimensionError("vecmat: incompatible shapes " + X.shape_str() + " x " + M.shape_str());
    }
    int rows = M.dim(0), cols = M.dim(1);
    Node node;
    node.op = Op::VecMat;
    node.inputs = {x.id, m.id};
    node.needs_grad = nodes_[check(x)].needs_grad || nodes_[check(m)].needs_grad;
    node.value = Tensor::zeros({cols});
    for (int i = 0; i < rows; ++i) {
        double xv = X.data[static_cast<size_t>(i)];
        if (xv == 0.0) continue;
        const double* mrow = &M.data[static_cast<size_t>(i) * cols];
        for (int j = 0; j < cols; ++j) node.value.data[static_cast<size_t>(j)] += xv * mrow[j];
    }
    return push(std::move(node));
}

Var Graph::add(Var a, Var b) {
    const Tensor& A = value(a);
    const Tensor& B = value(b);
    check_same_shape(A, B, "add");
    Node node;
    node.op = Op::Add;
    node.inputs = {a.id, b.id};
    node.needs_grad = nodes_[check(a)].needs_grad || nodes_[check(b)].needs_grad;
    node.value = A;
    for (size_t i = 0; i < node.value.data.size(); ++i) node.value.data[i] += B.data[i];
    return push(std::move(node));
}

Var Graph::mul(Var a, Var b) {
    const Tensor& A = value(a);
    const Tensor& B = value(b);
    check_same_shape(A, B, "mul");
    Node node;
    node.op = Op::Mul;
    node.inputs = {a.id, b.id};
    node.needs_grad = nodes_[check(a)].needs_grad || nodes_[check(b)].needs_grad;
    node.value = A;
    for (size_t i = 0; i < node.value.data.size(); ++i) node.value.data[i] *= B.data[i];
    return push(std::move(node));
}

Var Graph::scale(Var a, double c) {
    Node node;
    node.op = Op::Scale;
    node.inputs = {a.id};
    node.needs_grad = nodes_[check(a)].needs_grad;
    node.daux = c;
    node.value = value(a);
    for (double& x : node.value.data) x *= c;
    return push(std::move(node));
}

Var Graph::sigmoid(Var a) {
    Node node;
    node.op = Op::Sigmoid;
    node.inputs = {a.id};
    node.needs_grad = nodes_[check(a)].needs_grad;
    node.value = value(a);
    for (double& x : node.value.data) x = 1.0 / (1.0 + std::exp(-x));
    return push(std::move(node));
}

Var Graph::tanh(Var a) {
    Node node;
    node.op = Op::Tanh;
    node.inputs = {a.id};
    node.needs_grad = nodes_[check(a)].needs_grad;
    node.value = value(a);
    for (double& x : node.value.data) x = std::tanh(x);
    return push(std::move(node));
}

Var Graph::softmax(Var x) {
    const Tensor& X = value(x);
    if (!is_vector(X)) throw DimensionError("softmax: expected 1-D input, got " + X.shape_str());
    Node node;
    node.op = Op::Softmax;
    node.inputs = {x.id};
    node.needs_grad = nodes_[check(x)].needs_grad;
    node.value = X;
    double mx = *std::max_element(X.data.begin(), X.data.end());
    double z = 0.0;
    for (double& v : node.value.data) {
        v = std::exp(v - mx);
        z += v;
    }
    for (double& v : node.value.data) v /= z;
    return push(std::move(node));
}

Var Graph::cross_entropy(Var logits, int target) {
    const Tensor& X = value(logits);
    if (!is_vector(X)) throw DimensionError("cross_entropy: expected 1-D logits, got " + X.shape_str());
    if (target < 0 || target >= X.dim(0)) {
        throw ContractError("cross_entropy: target " + std::to_string(target) + " out of range for " +
                            std::to_string(X.dim(0)) + " classes");
    }
    Node node;
    node.op = Op::CrossEntropy;
    node.inputs = {logits.id};
    node.needs_grad = nodes_[check(logits)].needs_grad;
    node.iaux = target;
    double mx = *std::max_element(X.data.begin(), X.data.end());
    double z = 0.0;
    for (double v : X.data) z += std::exp(v - mx);
    double loss = std::log(z) + mx - X.data[static_cast<size_t>(target)];
    node.value = Tensor::scalar(loss);
    return push(std::move(node));
}

Var Graph::concat(Var a, Var b) {
    const Tensor& A = value(a);
    const Tensor& B = value(b);
    if (!is_vector(A) || !is_vector(B)) {
        throw DimensionError("concat: expected 1-D inputs, got " + A.shape_str() + " and " + B.shape_str());
    }
    Node node;
    node.op = Op::Concat;
    node.inputs = {a.id, b.id};
    node.needs_grad = nodes_[check(a)].needs_grad || nodes_[check(b)].needs_grad;
    node.value = Tensor::zeros({A.dim(0) + B.dim(0)});
    std::copy(A.data.begin(), A.data.end(), node.value.data.begin());
    std::copy(B.data.begin(), B.data.end(), node.value.data.begin() + A.dim(0));
    return push(std::move(node));
}

Var Graph::stack_rows(const std::vector<Var>& rows) {
    if (rows.empty()) throw DimensionError("stack_rows: empty input");
    int d = value(rows[0]).dim(0);
    Node node;
    node.op = Op::StackRows;
    node.value = Tensor::zeros({static_cast<int>(rows.size()), d});
    for (size_t i = 0; i < rows.size(); ++i) {
        const Tensor& r = value(rows[i]);
        if (!is_vector(r) || r.dim(0) != d) {
            throw DimensionError("stack_rows: row " + std::to_string(i) + " has shape " + r.shape_str());
        }
        node.inputs.push_back(rows[i].id);
        node.needs_grad = node.needs_grad || nodes_[check(rows[i])].needs_grad;
        std::copy(r.data.begin(), r.data.end(), node.value.data.begin() + static_cast<int64_t>(i) * d);
    }
    return push(std::move(node));
}

Var Graph::row(Var m, int r) {
    const Tensor& M = value(m);
    if (!is_matrix(M)) throw DimensionError("row: expected matrix, got " + M.shape_str());
    if (r < 0 || r >= M.dim(0)) {
        throw ContractError("row: index " + std::to_string(r) + " out of range for " + M.shape_str());
    }
    Node node;
    node.op = Op::Row;
    node.inputs = {m.id};
    node.needs_grad = nodes_[check(m)].needs_grad;
    node.iaux = r;
    int cols = M.dim(1);
    node.value = Tensor::zeros({cols});
    std::copy(M.data.begin() + static_cast<int64_t>(r) * cols,
              M.data.begin() + static_cast<int64_t>(r + 1) * cols, node.value.data.begin());
    return push(std::move(node));
}

Var Graph::sum(Var a) {
    Node node;
    node.op = Op::Sum;
    node.inputs = {a.id};
    node.needs_grad = nodes_[check(a)].needs_grad;
    node.value = Tensor::scalar(value(a).sum());
    return push(std::move(node));
}

Tensor& Graph::grad_buf(int id) {
    Node& n = nodes_[static_cast<size_t>(id)];
    if (n.grad.data.empty()) n.grad = Tensor::zeros(n.value.shape);
    return n.grad;
}

const Tensor& Graph::grad(Var v) const {
    const Node& n = nodes_[check(v)];
    if (n.grad.data.empty()) {
        if (empty_grad_.shape != n.value.shape) {
            // Unreached node: gradient is identically zero.
            const_cast<Graph*>(this)->empty_grad_ = Tensor::zeros(n.value.shape);
        }
        return empty_grad_;
    }
    return n.grad;
}

void Graph::backward(Var loss, double seed) {
    size_t lid = check(loss);
    if (!nodes_[lid].value.is_scalar()) {
        throw ContractError("backward: loss node must be scalar, got shape " + nodes_[lid].value.shape_str());
    }
    grad_buf(static_cast<int>(lid)).data[0] += seed;

    for (size_t idx = lid + 1; idx-- > 0;) {
        Node& node = nodes_[idx];
        if (!node.needs_grad || node.grad.data.empty()) continue;
        const Tensor& gy = node.grad;
        switch (node.op) {
            case Op::Input:
            case Op::Param:
                break;
            case Op::MatMul: {
                const Tensor& A = nodes_[static_cast<size_t>(node.inputs[0])].value;
                const Tensor& B = nodes_[static_cast<size_t>(node.inputs[1])].value;
                int m = A.dim(0), k = A.dim(1), n = B.dim(1);
                if (nodes_[static_cast<size_t>(node.inputs[0])].needs_grad) {
                    Tensor& ga = grad_buf(node.inputs[0]);
                    for (int i = 0; i < m; ++i)
                        for (int kk = 0; kk < k; ++kk) {
                            double s = 0.0;
                            const double* gyrow = &gy.data[static_cast<size_t>(i) * n];
                            const double* brow = &B.data[static_cast<size_t>(kk) * n];
                            for (int j = 0; j < n; ++j) s += gyrow[j] * brow[j];
                            ga.data[static_cast<size_t>(i) * k + kk] += s;
                        }
                }
                if (nodes_[static_cast<size_t>(node.inputs[1])].needs_grad) {
                    Tensor& gb = grad_buf(node.inputs[1]);
                    for (int kk = 0; kk < k; ++kk)
                        for (int i = 0; i < m; ++i) {
                            double av = A.data[static_cast<size_t>(i) * k + kk];
                            if (av == 0.0) continue;
                            const double* gyrow = &gy.data[static_cast<size_t>(i) * n];
                            double* gbrow = &gb.data[static_cast<size_t>(kk) * n];
                            for (int j = 0; j < n; ++j) gbrow[j] += av * gyrow[j];
                        }
                }
                break;
            }
            case Op::MatVec: {
                const Tensor& W = nodes_[static_cast<size_t>(node.inputs[0])].value;
                const Tensor& X = nodes_[static_cast<size_t>(node.inputs[1])].value;
                int m = W.dim(0), n = W.dim(1);
                if (nodes_[static_cast<size_t>(node.inputs[0])].needs_grad) {
                    Tensor& gw = grad_buf(node.inputs[0]);
                    for (int i = 0; i < m; ++i) {
                        double gv = gy.data[static_cast<size_t>(i)];
                        if (gv == 0.0) continue;
                        double* gwrow = &gw.data[static_cast<size_t>(i) * n];
                        for (int j = 0; j < n; ++j) gwrow[j] += gv * X.data[static_cast<size_t>(j)];
                    }
                }
                if (nodes_[static_cast<size_t>(node.inputs[1])].needs_grad) {
                    Tensor& gx = grad_buf(node.inputs[1]);
                    for (int i = 0; i < m; ++i) {
                        double gv = gy.data[static_cast<size_t>(i)];
                        if (gv == 0.0) continue;
                        const double* wrow = &W.data[static_cast<size_t>(i) * n];
                        for (int j = 0; j < n; ++j) gx.data[static_cast<size_t>(j)] += gv * wrow[j];
                    }
                }
                break;
            }
            case Op::VecMat: {
                const Tensor& X = nodes_[static_cast<size_t>(node.inputs[0])].value;
                const Tensor& M = nodes_[static_cast<size_t>(node.inputs[1])].value;
                int rows = M.dim(0), cols = M.dim(1);
                if (nodes_[static_cast<size_t>(node.inputs[0])].needs_grad) {
                    Tensor& gx = grad_buf(node.inputs[0]);
                    for (int i = 0; i < rows; ++i) {
                        const double* mrow = &M.data[static_cast<size_t>(i) * cols];
                        double s = 0.0;
                        for (int j = 0; j < cols; ++j) s += mrow[j] * gy.data[static_cast<size_t>(j)];
                        gx.data[static_cast<size_t>(i)] += s;
                    }
                }
                if (nodes_[static_cast<size_t>(node.inputs[1])].needs_grad) {
                    Tensor& gm = grad_buf(node.inputs[1]);
                    for (int i = 0; i < rows; ++i) {
                        double xv = X.data[static_cast<size_t>(i)];
                        if (xv == 0.0) continue;
                        double* gmrow = &gm.data[static_cast<size_t>(i) * cols];
                        for (int j = 0; j < cols; ++j) gmrow[j] += xv * gy.data[static_cast<size_t>(j)];
                    }
                }
                break;
            }
            case Op::Add: {
                for (int slot = 0; slot < 2; ++slot) {
                    if (!nodes_[static_cast<size_t>(node.inputs[slot])].needs_grad) continue;
                    Tensor& g = grad_buf(node.inputs[slot]);
                    for (size_t i = 0; i < g.data.size(); ++i) g.data[i] += gy.data[i];
                }
                break;
            }
            case Op::Mul: {
                const Tensor& A = nodes_[static_cast<size_t>(node.inputs[0])].value;
                const Tensor& B = nodes_[static_cast<size_t>(node.inputs[1])].value;
                if (nodes_[static_cast<size_t>(node.inputs[0])].needs_grad) {
                    Tensor& ga = grad_buf(node.inputs[0]);
                    for (size_t i = 0; i < ga.data.size(); ++i) ga.data[i] += gy.data[i] * B.data[i];
                }
                if (nodes_[static_cast<size_t>(node.inputs[1])].needs_grad) {
                    Tensor& gb = grad_buf(node.inputs[1]);
                    for (size_t i = 0; i < gb.data.size(); ++i) gb.data[i] += gy.data[i] * A.data[i];
                }
                break;
            }
            case Op::Scale: {
                if (nodes_[static_cast<size_t>(node.inputs[0])].needs_grad) {
                    Tensor& g = grad_buf(node.inputs[0]);
                    for (size_t i = 0; i < g.data.size(); ++i) g.data[i] += node.daux * gy.data[i];
                }
                break;
            }
            case Op::Sigmoid: {
                if (nodes_[static_cast<size_t>(node.inputs[0])].needs_grad) {
                    Tensor& g = grad_buf(node.inputs[0]);
                    for (size_t i = 0; i < g.data.size(); ++i) {
                        double y = node.value.data[i];
                        g.data[i] += gy.data[i] * y * (1.0 - y);
                    }
                }
                break;
            }
            case Op::Tanh: {
                if (nodes_[static_cast<size_t>(node.inputs[0])].needs_grad) {
                    Tensor& g = grad_buf(node.inputs[0]);
                    for (size_t i = 0; i < g.data.size(); ++i) {
                        double y = node.value.data[i];
                        g.data[i] += gy.data[i] * (1.0 - y * y);
                    }
                }
                break;
            }
            case Op::Softmax: {
                if (nodes_[static_cast<size_t>(node.inputs[0])].needs_grad) {
                    Tensor& g = grad_buf(node.inputs[0]);
                    double dot = 0.0;
                    for (size_t i = 0; i < g.data.size(); ++i) dot += gy.data[i] * node.value.data[i];
                    for (size_t i = 0; i < g.data.size(); ++i) {
                        g.data[i] += node.value.data[i] * (gy.data[i] - dot);
                    }
                }
                break;
            }
            case Op::CrossEntropy: {
                if (nodes_[static_cast<size_t>(node.inputs[0])].needs_grad) {
                    const Tensor& X = nodes_[static_cast<size_t>(node.inputs[0])].value;
                    Tensor& g = grad_buf(node.inputs[0]);
                    double mx = *std::max_element(X.data.begin(), X.data.end());
                    double z = 0.0;
                    for (double v : X.data) z += std::exp(v - mx);
                    double gl = gy.data[0];
                    for (size_t i = 0; i < g.data.size(); ++i) {
                        double p = std::exp(X.data[i] - mx) / z;
                        g.data[i] += gl * (p - (static_cast<int>(i) == node.iaux ? 1.0 : 0.0));
                    }
                }
                break;
            }
            case Op::Concat: {
                const Tensor& A = nodes_[static_cast<size_t>(node.inputs[0])].value;
                int na = A.dim(0);
                if (nodes_[static_cast<size_t>(node.inputs[0])].needs_grad) {
                    Tensor& ga = grad_buf(node.inputs[0]);
                    for (int i = 0; i < na; ++i) ga.data[static_cast<size_t>(i)] += gy.data[static_cast<size_t>(i)];
                }
                if (nodes_[static_cast<size_t>(node.inputs[1])].needs_grad) {
                    Tensor& gb = grad_buf(node.inputs[1]);
                    for (size_t i = 0; i < gb.data.size(); ++i) gb.data[i] += gy.data[static_cast<size_t>(na) + i];
                }
                break;
            }
            case Op::StackRows: {
                int d = node.value.dim(1);
                for (size_t r = 0; r < node.inputs.size(); ++r) {
                    if (!nodes_[static_cast<size_t>(node.inputs[r])].needs_grad) continue;
                    Tensor& g = grad_buf(node.inputs[r]);
                    const double* gyrow = &gy.data[r * static_cast<size_t>(d)];
                    for (int j = 0; j < d; ++j) g.data[static_cast<size_t>(j)] += gyrow[j];
                }
                break;
            }
            case Op::Row: {
                if (nodes_[static_cast<size_t>(node.inputs[0])].needs_grad) {
                    Tensor& g = grad_buf(node.inputs[0]);
                    int cols = g.dim(1);
                    double* grow = &g.data[static_cast<size_t>(node.iaux) * cols];
                    for (int j = 0; j < cols; ++j) grow[j] += gy.data[static_cast<size_t>(j)];
                }
                break;
            }
            case Op::Sum: {
                if (nodes_[static_cast<size_t>(node.inputs[0])].needs_grad) {
                    Tensor& g = grad_buf(node.inputs[0]);
                    for (double& v : g.data) v += gy.data[0];
                }
                break;
            }
        }
    }
}

}  // namespace videoqa
