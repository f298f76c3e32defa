#include "hrgnn/optimizer.hpp"

#include <cmath>

#include "hrgnn/errors.hpp"

namespace hrgnn {

AdamState::AdamState(std::vector<NodePtr> params, double learning_rate, double beta1, double beta2,
                     double epsilon)
    : params_(std::move(params)),
      learning_rate_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      epsilon_(epsilon) {
    m_.reserve(params_.size());
    v_.reserve(params_.size());
    for (const auto& p : params_) {
        m_.push_back(Tensor::zeros(p->value.shape()));
        v_.push_back(Tensor::zeros(p->value.shape()));
    }
}

void AdamState::step() {
    ++step_count_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_count_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_count_));
    for (std::size_t k = 0; k < params_.size(); ++k) {
        Node& p = *params_[k];
        const Tensor& g = p.grad();
        Tensor& m = m_[k];
        Tensor& v = v_[k];
        for (std::int64_t i = 0; i < g.size(); ++i) {
            const double gi = g[i];
            if (std::isnan(gi))
                throw NumericError("NaN gradient in parameter '" + p.name + "' at entry " +
                                   std::to_string(i));
            m[i] = beta1_ * m[i] + (1.0 - beta1_) * gi;
            v[i] = beta2_ * v[i] + (1.0 - beta2_) * gi * gi;
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            p.value[i] -= learning_rate_ * mhat / (std::sqrt(vhat) + epsilon_);
        }
    }
}

void AdamState::zero_grad() {
    for (auto& p : params_) p->zero_grad();
}

double lr_decay(double base_lr, double decay, int epoch) {
    if (epoch < 0) throw NumericError("lr_decay epoch must be non-negative");
    return base_lr * std::pow(decay, static_cast<double>(epoch));
}

}  // namespace hrgnn
