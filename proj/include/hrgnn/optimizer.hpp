#pragma once

#include <cstdint>
#include <vector>

#include "hrgnn/autodiff.hpp"

namespace hrgnn {

// Adam with bias correction over a fixed parameter list. Moment tensors
// are kept per parameter in list order.
class AdamState {
public:
    AdamState(std::vector<NodePtr> params, double learning_rate, double beta1 = 0.9,
              double beta2 = 0.999, double epsilon = 1e-8);

    // One update from the gradients currently accumulated on the parameters.
    // Rejects NaN gradients, naming the parameter.
    void step();

    void set_learning_rate(double lr) { learning_rate_ = lr; }
    double learning_rate() const { return learning_rate_; }
    std::int64_t step_count() const { return step_count_; }

    const std::vector<NodePtr>& params() const { return params_; }
    void zero_grad();

private:
    std::vector<NodePtr> params_;
    std::vector<Tensor> m_;
    std::vector<Tensor> v_;
    double learning_rate_;
    double beta1_;
    double beta2_;
    double epsilon_;
    std::int64_t step_count_ = 0;
};

// lr(epoch) = base * decay^epoch, applied once per epoch.
double lr_decay(double base_lr, double decay, int epoch);

}  // namespace hrgnn
