#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hrgnn/tensor.hpp"

namespace hrgnn {

class Node;
using NodePtr = std::shared_ptr<Node>;

// One value in the recorded computation. Leaves (parameters, constants)
// have no inputs; interior nodes carry the backward rule of the primitive
// that produced them.
class Node {
public:
    Tensor value;
    bool requires_grad = false;
    std::string name;  // set for parameters, used in diagnostics

    std::vector<NodePtr> inputs;
    std::function<void(Node&)> backward_op;  // accumulates into inputs' grads

    static NodePtr parameter(Tensor value, std::string name);
    static NodePtr constant(Tensor value);

    // Gradient tensor, allocated on first touch.
    Tensor& grad();
    bool has_grad() const { return grad_.size() > 0; }
    void zero_grad();
    void accumulate_grad(const Tensor& g);

private:
    Tensor grad_;
};

// Ordered record of every primitive executed under an active scope.
// Construction order is a topological order, so backward() is a single
// reverse sweep. clear() breaks input links iteratively to avoid deep
// recursive shared_ptr destruction on long recurrences.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;
    ~Tape();

    NodePtr record(Tensor value, std::vector<NodePtr> inputs,
                   std::function<void(Node&)> backward_op);

    // Propagates d(loss)/d(node) for everything on the tape; the loss must
    // be a scalar recorded here. seed scales the initial gradient (used for
    // 1/batch averaging).
    void backward(const NodePtr& loss, double seed = 1.0);

    void clear();
    std::size_t size() const { return nodes_.size(); }

private:
    std::vector<NodePtr> nodes_;
};

// RAII activation of a tape for the current thread. Primitive ops refuse
// to run without one.
class TapeScope {
public:
    explicit TapeScope(Tape& tape);
    ~TapeScope();
    TapeScope(const TapeScope&) = delete;
    TapeScope& operator=(const TapeScope&) = delete;

    static Tape& current();
    static bool active();

private:
    Tape* previous_;
};

}  // namespace hrgnn
