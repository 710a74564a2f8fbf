#pragma once

#include <cstdint>
#include <vector>

#include "videoqa/tensor.hpp"

namespace videoqa {

// Handle to a node in a Graph.
struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
};

// Reverse-mode automatic differentiation over a dynamically built tape.
// Nodes are appended in evaluation order, so the tape is topologically
// sorted by construction; backward() walks it once in reverse.
class Graph {
public:
    // Non-differentiable leaf (data inputs).
    Var input(Tensor value);
    // Differentiable leaf (parameters). The value is copied onto the tape.
    Var param(const Tensor& value);

    Var matmul(Var a, Var b);           // [m,k] x [k,n] -> [m,n]
    Var matvec(Var w, Var x);           // [m,n] x [n]   -> [m]
    Var vecmat(Var x, Var m);           // [n] x [n,d]   -> [d]  (x^T M)
    Var add(Var a, Var b);              // elementwise, same shape
    Var mul(Var a, Var b);              // elementwise, same shape
    Var scale(Var a, double c);
    Var sigmoid(Var a);
    Var tanh(Var a);
    Var softmax(Var x);                 // 1-D, max-subtraction stabilized
    Var cross_entropy(Var logits, int target);  // -log softmax(logits)[target]
    Var concat(Var a, Var b);           // 1-D concatenation
    Var stack_rows(const std::vector<Var>& rows);  // k vectors [d] -> [k,d]
    Var row(Var m, int r);              // differentiable row select (embedding lookup)
    Var sum(Var a);                     // sum of all entries -> scalar

    // Reverse accumulation from a scalar loss node. seed is the gradient of
    // the final objective w.r.t. this node (1/batch_size when averaging).
    void backward(Var loss, double seed = 1.0);

    const Tensor& value(Var v) const { return nodes_[check(v)].value; }
    // Valid after backward(); zero tensor for nodes the loss does not reach.
    const Tensor& grad(Var v) const;

    size_t size() const { return nodes_.size(); }

private:
    enum class Op : uint8_t {
        Input, Param, MatMul, MatVec, VecMat, Add, Mul, Scale,
        Sigmoid, Tanh, Softmax, CrossEntropy, Concat, StackRows, Row, Sum
    };

    struct Node {
        Op op;
        bool needs_grad = false;
        Tensor value;
        Tensor grad;
        std::vector<int> inputs;
        int iaux = 0;     // class target (CrossEntropy) or row index (Row)
        double daux = 0;  // scale factor
    };

    size_t check(Var v) const;
    Var push(Node n);
    Tensor& grad_buf(int id);

    std::vector<Node> nodes_;
    Tensor empty_grad_;
};

}  // namespace videoqa
