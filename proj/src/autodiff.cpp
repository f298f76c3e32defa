#include "hrgnn/autodiff.hpp"

#include "hrgnn/errors.hpp"

namespace hrgnn {

namespace {
thread_local Tape* g_current_tape = nullptr;
}

NodePtr Node::parameter(Tensor value, std::string name) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    n->requires_grad = true;
    n->name = std::move(name);
    return n;
}

NodePtr Node::constant(Tensor value) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    return n;
}

Tensor& Node::grad() {
    if (grad_.size() == 0) grad_ = Tensor::zeros(value.shape());
    return grad_;
}

void Node::zero_grad() {
    if (grad_.size() > 0) grad_.fill(0.0);
}

void Node::accumulate_grad(const Tensor& g) {
    Tensor& dst = grad();
    if (!dst.same_shape(g))
        throw ShapeError("gradient shape " + g.shape_str() + " does not match value " +
                         dst.shape_str() + (name.empty() ? "" : " for " + name));
    double* d = dst.data();
    const double* s = g.data();
    for (std::int64_t i = 0; i < g.size(); ++i) d[i] += s[i];
}

Tape::~Tape() { clear(); }

NodePtr Tape::record(Tensor value, std::vector<NodePtr> inputs,
                     std::function<void(Node&)> backward_op) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    n->inputs = std::move(inputs);
    n->backward_op = std::move(backward_op);
    for (const auto& in : n->inputs) {
        if (in->requires_grad) {
            n->requires_grad = true;
            break;
        }
    }
    nodes_.push_back(n);
    return n;
}

void Tape::backward(const NodePtr& loss, double seed) {
    if (!loss) throw NumericError("backward: null loss node");
    if (!loss->value.is_scalar())
        throw NumericError("backward: loss must be scalar, got shape " + loss->value.shape_str());
    loss->grad()[0] += seed;
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
        Node& n = **it;
        if (n.backward_op && n.requires_grad && n.has_grad()) n.backward_op(n);
    }
}

void Tape::clear() {
    // Break links front-to-back so no destructor chain recurses.
    for (auto& n : nodes_) {
        n->inputs.clear();
        n->backward_op = nullptr;
    }
    nodes_.clear();
}

TapeScope::TapeScope(Tape& tape) : previous_(g_current_tape) { g_current_tape = &tape; }

TapeScope::~TapeScope() { g_current_tape = previous_; }

Tape& TapeScope::current() {
    if (!g_current_tape)
        throw NumericError("primitive op executed outside a TapeScope");
    return *g_current_tape;
}

bool TapeScope::active() { return g_current_tape != nullptr; }

}  // namespace hrgnn
