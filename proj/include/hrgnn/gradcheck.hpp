#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hrgnn/autodiff.hpp"

namespace hrgnn {

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::int64_t entries_checked = 0;
    std::string worst_param;
    std::int64_t worst_entry = -1;
};

// Central-difference check of the recorded backward pass.
//
// build_loss must construct the loss from scratch under the active tape,
// closing over the given parameters; it is evaluated twice up front and
// rejected if the two losses differ (non-deterministic closure). The
// relative error is |analytic - numeric| / max(1, |analytic|, |numeric|),
// maximised over every entry of every parameter. An empty parameter list
// yields 0.
GradCheckResult gradcheck(const std::function<NodePtr()>& build_loss,
                          const std::vector<NodePtr>& params, double eps = 1e-5);

}  // namespace hrgnn
