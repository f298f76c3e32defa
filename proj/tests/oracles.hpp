#pragma once

// Reference implementations used only by tests. Each one recomputes a
// result through a deliberately plain route, independent of the library
// code path it is checking.

#include <functional>
#include <string>
#include <vector>

#include "hrgnn/tensor.hpp"

namespace oracle {

// Central finite difference of a scalar-valued closure w.r.t. one tensor.
hrgnn::Tensor numeric_gradient(const std::function<double()>& forward, hrgnn::Tensor& param,
                               double h = 1e-5);

// max over entries of |a - n| / max(1, |a|, |n|)
double max_rel_error(const hrgnn::Tensor& analytic, const hrgnn::Tensor& numeric);

// Step-by-step scalar GRU recurrence (Cho convention), no batching.
// Weight layout matches hrgnn::GruParams: input and hidden paths with
// separate biases per gate.
struct GruWeights {
    hrgnn::Tensor wz, wr, wh;    // input_dim x hidden
    hrgnn::Tensor uz, ur, uh;    // hidden x hidden
    hrgnn::Tensor biz, bir, bih; // 1 x hidden
    hrgnn::Tensor bhz, bhr, bhh; // 1 x hidden
};
std::vector<std::vector<double>> gru_recurrence(const std::vector<std::vector<double>>& inputs,
                                                const GruWeights& w);

// Dense per-row softmax over masked logits.
std::vector<double> dense_softmax(const std::vector<double>& logits);

// Number of sentences a plain regex splitter finds in the text.
int regex_sentence_count(const std::string& text);

// Confusion counts gathered with an explicit loop.
struct Confusion {
    int tp = 0, fp = 0, fn = 0, tn = 0;
};
Confusion count_confusion(const std::vector<int>& preds, const std::vector<int>& gold);

// CCC evaluated through centered two-pass sums (the library uses raw
// moment accumulators).
double ccc_two_pass(const std::vector<double>& x, const std::vector<double>& y);

double pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace oracle
