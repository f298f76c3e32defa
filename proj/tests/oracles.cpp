#include "oracles.hpp"

#include <cmath>
#include <regex>
#include <stdexcept>

namespace oracle {

hrgnn::Tensor numeric_gradient(const std::function<double()>& forward, hrgnn::Tensor& param,
                               double h) {
    hrgnn::Tensor grad = hrgnn::Tensor::zeros(param.shape());
    for (std::int64_t i = 0; i < param.size(); ++i) {
        const double original = param[i];
        param[i] = original + h;
        const double up = forward();
        param[i] = original - h;
        const double down = forward();
        param[i] = original;
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

double max_rel_error(const hrgnn::Tensor& analytic, const hrgnn::Tensor& numeric) {
    double worst = 0.0;
    for (std::int64_t i = 0; i < analytic.size(); ++i) {
        const double a = analytic[i], n = numeric[i];
        const double rel = std::abs(a - n) / std::max({1.0, std::abs(a), std::abs(n)});
        worst = std::max(worst, rel);
    }
    return worst;
}

std::vector<std::vector<double>> gru_recurrence(const std::vector<std::vector<double>>& inputs,
                                                const GruWeights& w) {
    const int hidden = w.uz.rows();
    const int in_dim = w.wz.rows();
    std::vector<double> h(hidden, 0.0);
    std::vector<std::vector<double>> states;
    auto sigm = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    for (const auto& x : inputs) {
        if (static_cast<int>(x.size()) != in_dim) throw std::invalid_argument("oracle input dim");
        std::vector<double> z(hidden), r(hidden), cand(hidden), hn(hidden);
        for (int j = 0; j < hidden; ++j) {
            double az = w.biz.at(0, j) + w.bhz.at(0, j);
            double ar = w.bir.at(0, j) + w.bhr.at(0, j);
            for (int i = 0; i < in_dim; ++i) {
                az += x[i] * w.wz.at(i, j);
                ar += x[i] * w.wr.at(i, j);
            }
            for (int i = 0; i < hidden; ++i) {
                az += h[i] * w.uz.at(i, j);
                ar += h[i] * w.ur.at(i, j);
            }
            z[j] = sigm(az);
            r[j] = sigm(ar);
        }
        for (int j = 0; j < hidden; ++j) {
            double hidden_path = w.bhh.at(0, j);
            for (int i = 0; i < hidden; ++i) hidden_path += h[i] * w.uh.at(i, j);
            double a = w.bih.at(0, j) + r[j] * hidden_path;
            for (int i = 0; i < in_dim; ++i) a += x[i] * w.wh.at(i, j);
            cand[j] = std::tanh(a);
        }
        for (int j = 0; j < hidden; ++j) hn[j] = (1.0 - z[j]) * h[j] + z[j] * cand[j];
        h = hn;
        states.push_back(h);
    }
    return states;
}

std::vector<double> dense_softmax(const std::vector<double>& logits) {
    double m = logits[0];
    for (double v : logits) m = std::max(m, v);
    double sum = 0.0;
    std::vector<double> out(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - m);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

int regex_sentence_count(const std::string& text) {
    // terminators: . ! ? ; and their CJK forms; anything non-empty between
    // them counts as a sentence
    static const std::regex terminator("[.!?;]|\xE3\x80\x82|\xEF\xBC\x81|\xEF\xBC\x9F|\xEF\xBC\x9B");
    std::sregex_token_iterator it(text.begin(), text.end(), terminator, -1), end;
    int count = 0;
    for (; it != end; ++it) {
        const std::string piece = *it;
        if (piece.find_first_not_of(" \t\r\n") != std::string::npos) ++count;
    }
    return count;
}

Confusion count_confusion(const std::vector<int>& preds, const std::vector<int>& gold) {
    Confusion c;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (gold[i] == 1 && preds[i] == 1) ++c.tp;
        if (gold[i] == 0 && preds[i] == 1) ++c.fp;
        if (gold[i] == 1 && preds[i] == 0) ++c.fn;
        if (gold[i] == 0 && preds[i] == 0) ++c.tn;
    }
    return c;
}

double ccc_two_pass(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double vx = 0.0, vy = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        vx += (x[i] - mx) * (x[i] - mx);
        vy += (y[i] - my) * (y[i] - my);
        cov += (x[i] - mx) * (y[i] - my);
    }
    vx /= static_cast<double>(n);
    vy /= static_cast<double>(n);
    cov /= static_cast<double>(n);
    const double denom = vx + vy + (mx - my) * (mx - my);
    if (denom == 0.0) return 1.0;  // both constant and equal
    return 2.0 * cov / denom;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double vx = 0.0, vy = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        vx += (x[i] - mx) * (x[i] - mx);
        vy += (y[i] - my) * (y[i] - my);
        cov += (x[i] - mx) * (y[i] - my);
    }
    if (vx == 0.0 || vy == 0.0) return 0.0;
    return cov / std::sqrt(vx * vy);
}

}  // namespace oracle
