#include "hrgnn/gradcheck.hpp"

#include <cmath>

#include "hrgnn/errors.hpp"

namespace hrgnn {

namespace {

double eval_loss(const std::function<NodePtr()>& build_loss) {
    Tape tape;
    TapeScope scope(tape);
    NodePtr loss = build_loss();
    if (!loss->value.is_scalar())
        throw NumericError("gradcheck: loss must be scalar, got " + loss->value.shape_str());
    return loss->value[0];
}

}  // namespace

GradCheckResult gradcheck(const std::function<NodePtr()>& build_loss,
                          const std::vector<NodePtr>& params, double eps) {
    if (eps <= 0.0) throw NumericError("gradcheck eps must be positive");

    const double l0 = eval_loss(build_loss);
    const double l1 = eval_loss(build_loss);
    if (l0 != l1)
        throw NumericError("gradcheck: loss is not deterministic (" + std::to_string(l0) + " vs " +
                           std::to_string(l1) + "); disable dropout and fix seeds");

    // Analytic pass.
    std::vector<Tensor> analytic;
    {
        for (const auto& p : params) p->zero_grad();
        Tape tape;
        TapeScope scope(tape);
        NodePtr loss = build_loss();
        tape.backward(loss);
        analytic.reserve(params.size());
        for (const auto& p : params) analytic.push_back(p->grad());
    }

    GradCheckResult result;
    for (std::size_t k = 0; k < params.size(); ++k) {
        Node& p = *params[k];
        for (std::int64_t i = 0; i < p.value.size(); ++i) {
            const double original = p.value[i];
            p.value[i] = original + eps;
            const double up = eval_loss(build_loss);
            p.value[i] = original - eps;
            const double down = eval_loss(build_loss);
            p.value[i] = original;

            const double numeric = (up - down) / (2.0 * eps);
            const double a = analytic[k][i];
            const double rel =
                std::abs(a - numeric) / std::max({1.0, std::abs(a), std::abs(numeric)});
            ++result.entries_checked;
            if (rel > result.max_rel_error) {
                result.max_rel_error = rel;
                result.worst_param = p.name;
                result.worst_entry = i;
            }
        }
    }
    return result;
}

}  // namespace hrgnn
