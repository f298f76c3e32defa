#pragma once

#include <vector>

#include "hrgnn/autodiff.hpp"
#include "hrgnn/rng.hpp"

namespace hrgnn {

// Differentiable primitives. All of them execute eagerly and record
// themselves on the active tape. Vectors follow the row convention:
// a single feature vector is a 1 x d matrix.

NodePtr matmul(const NodePtr& a, const NodePtr& b);
NodePtr transpose(const NodePtr& x);

NodePtr add(const NodePtr& a, const NodePtr& b);     // same shape
NodePtr mul(const NodePtr& a, const NodePtr& b);     // elementwise, same shape
NodePtr sub(const NodePtr& a, const NodePtr& b);

// x * W + b where b (1 x n) broadcasts over the rows of x * W.
NodePtr affine(const NodePtr& x, const NodePtr& w, const NodePtr& b);

NodePtr mul_scalar(const NodePtr& x, double a);
NodePtr add_scalar(const NodePtr& x, double b);

// Concatenate 2-D tensors along axis 0 (rows) or 1 (cols).
NodePtr concat(const std::vector<NodePtr>& parts, int axis);
// Stack 1 x d row vectors into an n x d matrix.
NodePtr stack_rows(const std::vector<NodePtr>& rows);
NodePtr slice_row(const NodePtr& x, int row);

// axis 0: mean over rows -> 1 x c; axis 1: mean over cols -> r x 1.
NodePtr mean(const NodePtr& x, int axis);
NodePtr mean_all(const NodePtr& x);  // scalar

NodePtr sigmoid(const NodePtr& x);
NodePtr tanh(const NodePtr& x);
NodePtr leaky_relu(const NodePtr& x, double negative_slope);
NodePtr relu(const NodePtr& x);

// axis 1: softmax per row; axis 0: per column.
NodePtr softmax(const NodePtr& x, int axis = 1);

// Inverted dropout; identity when train is false.
NodePtr dropout(const NodePtr& x, double rate, bool train, Rng& rng);

// Cross-entropy of a C-way logit row against an integer label.
// The picked probability is clamped at 1e-12 before the log; clamp events
// are counted so the trainer can flag them.
NodePtr cross_entropy(const NodePtr& logits, int label);
std::int64_t cross_entropy_clamp_events();
void reset_cross_entropy_clamp_events();

// Row gather from an embedding matrix; gradients scatter back by row.
NodePtr embedding_lookup(const NodePtr& table, const std::vector<int>& ids);

// Softmax applied outside the tape (plain math, for predictions).
Tensor softmax_values(const Tensor& logits);

}  // namespace hrgnn
