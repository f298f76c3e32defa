#include "hrgnn/ops.hpp"

#include <cmath>

#include "hrgnn/errors.hpp"

namespace hrgnn {

namespace {

std::int64_t g_ce_clamp_events = 0;

void check_same_shape(const NodePtr& a, const NodePtr& b, const char* op) {
    if (!a->value.same_shape(b->value))
        throw ShapeError(std::string(op) + " shape mismatch: " + a->value.shape_str() + " vs " +
                         b->value.shape_str());
}

// Elementwise unary op with derivative expressed in terms of (x, y).
template <typename Fwd, typename Bwd>
NodePtr unary_elementwise(const NodePtr& x, Fwd fwd, Bwd bwd) {
    Tensor out = x->value;
    double* p = out.data();
    for (std::int64_t i = 0; i < out.size(); ++i) p[i] = fwd(p[i]);
    return TapeScope::current().record(std::move(out), {x}, [bwd](Node& n) {
        const NodePtr& in = n.inputs[0];
        if (!in->requires_grad) return;
        Tensor& gin = in->grad();
        const Tensor& gout = n.grad();
        for (std::int64_t i = 0; i < gout.size(); ++i)
            gin[i] += gout[i] * bwd(in->value[i], n.value[i]);
    });
}

}  // namespace

NodePtr matmul(const NodePtr& a, const NodePtr& b) {
    Tensor out = matmul_nn(a->value, b->value);
    return TapeScope::current().record(std::move(out), {a, b}, [](Node& n) {
        const NodePtr& a = n.inputs[0];
        const NodePtr& b = n.inputs[1];
        const Tensor& g = n.grad();
        if (a->requires_grad) a->accumulate_grad(matmul_nt(g, b->value));
        if (b->requires_grad) b->accumulate_grad(matmul_tn(a->value, g));
    });
}

NodePtr transpose(const NodePtr& x) {
    const Tensor& v = x->value;
    if (v.rank() != 2) throw ShapeError("transpose expects a matrix, got " + v.shape_str());
    Tensor out = Tensor::zeros({v.cols(), v.rows()});
    for (int i = 0; i < v.rows(); ++i)
        for (int j = 0; j < v.cols(); ++j) out.at(j, i) = v.at(i, j);
    return TapeScope::current().record(std::move(out), {x}, [](Node& n) {
        const NodePtr& in = n.inputs[0];
        if (!in->requires_grad) return;
        const Tensor& g = n.grad();
        Tensor& gin = in->grad();
        for (int i = 0; i < g.rows(); ++i)
            for (int j = 0; j < g.cols(); ++j) gin.at(j, i) += g.at(i, j);
    });
}

NodePtr add(const NodePtr& a, const NodePtr& b) {
    check_same_shape(a, b, "add");
    Tensor out = a->value;
    const double* pb = b->value.data();
    double* po = out.data();
    for (std::int64_t i = 0; i < out.size(); ++i) po[i] += pb[i];
    return TapeScope::current().record(std::move(out), {a, b}, [](Node& n) {
        const Tensor& g = n.grad();
        if (n.inputs[0]->requires_grad) n.inputs[0]->accumulate_grad(g);
        if (n.inputs[1]->requires_grad) n.inputs[1]->accumulate_grad(g);
    });
}

NodePtr mul(const NodePtr& a, const NodePtr& b) {
    check_same_shape(a, b, "mul");
    Tensor out = a->value;
    const double* pb = b->value.data();
    double* po = out.data();
    for (std::int64_t i = 0; i < out.size(); ++i) po[i] *= pb[i];
    return TapeScope::current().record(std::move(out), {a, b}, [](Node& n) {
        const NodePtr& a = n.inputs[0];
        const NodePtr& b = n.inputs[1];
        const Tensor& g = n.grad();
        if (a->requires_grad) {
            Tensor& ga = a->grad();
            for (std::int64_t i = 0; i < g.size(); ++i) ga[i] += g[i] * b->value[i];
        }
        if (b->requires_grad) {
            Tensor& gb = b->grad();
            for (std::int64_t i = 0; i < g.size(); ++i) gb[i] += g[i] * a->value[i];
        }
    });
}

NodePtr sub(const NodePtr& a, const NodePtr& b) { return add(a, mul_scalar(b, -1.0)); }

NodePtr affine(const NodePtr& x, const NodePtr& w, const NodePtr& b) {
    Tensor out = matmul_nn(x->value, w->value);
    if (b->value.rank() != 2 || b->value.rows() != 1 || b->value.cols() != out.cols())
        throw ShapeError("affine bias shape " + b->value.shape_str() + " does not broadcast over " +
                         out.shape_str());
    const double* pb = b->value.data();
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j) out.at(i, j) += pb[j];
    return TapeScope::current().record(std::move(out), {x, w, b}, [](Node& n) {
        const NodePtr& x = n.inputs[0];
        const NodePtr& w = n.inputs[1];
        const NodePtr& b = n.inputs[2];
        const Tensor& g = n.grad();
        if (x->requires_grad) x->accumulate_grad(matmul_nt(g, w->value));
        if (w->requires_grad) w->accumulate_grad(matmul_tn(x->value, g));
        if (b->requires_grad) {
            Tensor& gb = b->grad();
            for (int i = 0; i < g.rows(); ++i)
                for (int j = 0; j < g.cols(); ++j) gb[j] += g.at(i, j);
        }
    });
}

NodePtr mul_scalar(const NodePtr& x, double a) {
    return unary_elementwise(
        x, [a](double v) { return v * a; }, [a](double, double) { return a; });
}

NodePtr add_scalar(const NodePtr& x, double b) {
    return unary_elementwise(
        x, [b](double v) { return v + b; }, [](double, double) { return 1.0; });
}

NodePtr concat(const std::vector<NodePtr>& parts, int axis) {
    if (parts.empty()) throw ShapeError("concat of zero tensors");
    if (axis != 0 && axis != 1) throw ShapeError("concat axis must be 0 or 1");
    for (const auto& p : parts)
        if (p->value.rank() != 2)
            throw ShapeError("concat expects matrices, got " + p->value.shape_str());
    int rows = parts[0]->value.rows(), cols = parts[0]->value.cols();
    if (axis == 0) {
        rows = 0;
        for (const auto& p : parts) {
            if (p->value.cols() != cols)
                throw ShapeError("concat axis 0 column mismatch: " + p->value.shape_str() +
                                 " vs cols=" + std::to_string(cols));
            rows += p->value.rows();
        }
    } else {
        cols = 0;
        for (const auto& p : parts) {
            if (p->value.rows() != rows)
                throw ShapeError("concat axis 1 row mismatch: " + p->value.shape_str() +
                                 " vs rows=" + std::to_string(rows));
            cols += p->value.cols();
        }
    }
    Tensor out = Tensor::zeros({rows, cols});
    if (axis == 0) {
        int r0 = 0;
        for (const auto& p : parts) {
            const Tensor& v = p->value;
            for (int i = 0; i < v.rows(); ++i)
                for (int j = 0; j < v.cols(); ++j) out.at(r0 + i, j) = v.at(i, j);
            r0 += v.rows();
        }
    } else {
        int c0 = 0;
        for (const auto& p : parts) {
            const Tensor& v = p->value;
            for (int i = 0; i < v.rows(); ++i)
                for (int j = 0; j < v.cols(); ++j) out.at(i, c0 + j) = v.at(i, j);
            c0 += v.cols();
        }
    }
    return TapeScope::current().record(std::move(out), parts, [axis](Node& n) {
        const Tensor& g = n.grad();
        int off = 0;
        for (const auto& in : n.inputs) {
            const int r = in->value.rows(), c = in->value.cols();
            if (in->requires_grad) {
                Tensor& gin = in->grad();
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < c; ++j)
                        gin.at(i, j) += (axis == 0) ? g.at(off + i, j) : g.at(i, off + j);
            }
            off += (axis == 0) ? r : c;
        }
    });
}

NodePtr stack_rows(const std::vector<NodePtr>& rows) {
    for (const auto& r : rows)
        if (r->value.rank() != 2 || r->value.rows() != 1)
            throw ShapeError("stack_rows expects 1 x d rows, got " + r->value.shape_str());
    return concat(rows, 0);
}

NodePtr slice_row(const NodePtr& x, int row) {
    const Tensor& v = x->value;
    if (v.rank() != 2 || row < 0 || row >= v.rows())
        throw ShapeError("slice_row " + std::to_string(row) + " out of range for " + v.shape_str());
    Tensor out = Tensor::zeros({1, v.cols()});
    for (int j = 0; j < v.cols(); ++j) out.at(0, j) = v.at(row, j);
    return TapeScope::current().record(std::move(out), {x}, [row](Node& n) {
        const NodePtr& in = n.inputs[0];
        if (!in->requires_grad) return;
        Tensor& gin = in->grad();
        const Tensor& g = n.grad();
        for (int j = 0; j < g.cols(); ++j) gin.at(row, j) += g.at(0, j);
    });
}

NodePtr mean(const NodePtr& x, int axis) {
    const Tensor& v = x->value;
    if (v.rank() != 2) throw ShapeError("mean expects a matrix, got " + v.shape_str());
    if (axis == 0) {
        Tensor out = mean_rows(v);
        const int r = v.rows();
        return TapeScope::current().record(std::move(out), {x}, [r](Node& n) {
            const NodePtr& in = n.inputs[0];
            if (!in->requires_grad) return;
            Tensor& gin = in->grad();
            const Tensor& g = n.grad();
            for (int i = 0; i < gin.rows(); ++i)
                for (int j = 0; j < gin.cols(); ++j) gin.at(i, j) += g.at(0, j) / r;
        });
    }
    if (axis == 1) {
        Tensor out = Tensor::zeros({v.rows(), 1});
        for (int i = 0; i < v.rows(); ++i) {
            double s = 0.0;
            for (int j = 0; j < v.cols(); ++j) s += v.at(i, j);
            out.at(i, 0) = s / v.cols();
        }
        const int c = v.cols();
        return TapeScope::current().record(std::move(out), {x}, [c](Node& n) {
            const NodePtr& in = n.inputs[0];
            if (!in->requires_grad) return;
            Tensor& gin = in->grad();
            const Tensor& g = n.grad();
            for (int i = 0; i < gin.rows(); ++i)
                for (int j = 0; j < gin.cols(); ++j) gin.at(i, j) += g.at(i, 0) / c;
        });
    }
    throw ShapeError("mean axis must be 0 or 1");
}

NodePtr mean_all(const NodePtr& x) {
    const Tensor& v = x->value;
    double s = 0.0;
    for (std::int64_t i = 0; i < v.size(); ++i) s += v[i];
    Tensor out = Tensor::scalar(s / static_cast<double>(v.size()));
    return TapeScope::current().record(std::move(out), {x}, [](Node& n) {
        const NodePtr& in = n.inputs[0];
        if (!in->requires_grad) return;
        Tensor& gin = in->grad();
        const double g = n.grad()[0] / static_cast<double>(gin.size());
        for (std::int64_t i = 0; i < gin.size(); ++i) gin[i] += g;
    });
}

NodePtr sigmoid(const NodePtr& x) {
    return unary_elementwise(
        x, [](double v) { return 1.0 / (1.0 + std::exp(-v)); },
        [](double, double y) { return y * (1.0 - y); });
}

NodePtr tanh(const NodePtr& x) {
    return unary_elementwise(
        x, [](double v) { return std::tanh(v); }, [](double, double y) { return 1.0 - y * y; });
}

NodePtr leaky_relu(const NodePtr& x, double negative_slope) {
    return unary_elementwise(
        x, [negative_slope](double v) { return v >= 0.0 ? v : negative_slope * v; },
        [negative_slope](double v, double) { return v >= 0.0 ? 1.0 : negative_slope; });
}

NodePtr relu(const NodePtr& x) { return leaky_relu(x, 0.0); }

namespace {

void softmax_row(const double* in, double* out, int n, int stride) {
    double m = in[0];
    for (int i = 1; i < n; ++i) m = std::max(m, in[i * stride]);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double e = std::exp(in[i * stride] - m);
        out[i * stride] = e;
        sum += e;
    }
    for (int i = 0; i < n; ++i) out[i * stride] /= sum;
}

}  // namespace

NodePtr softmax(const NodePtr& x, int axis) {
    const Tensor& v = x->value;
    Tensor out = Tensor::zeros(v.shape());
    if (v.rank() == 1) {
        softmax_row(v.data(), out.data(), static_cast<int>(v.size()), 1);
        axis = 1;  // backward treats the vector as a single row
    } else if (axis == 1) {
        for (int i = 0; i < v.rows(); ++i)
            softmax_row(v.data() + static_cast<std::size_t>(i) * v.cols(),
                        out.data() + static_cast<std::size_t>(i) * v.cols(), v.cols(), 1);
    } else if (axis == 0) {
        for (int j = 0; j < v.cols(); ++j)
            softmax_row(v.data() + j, out.data() + j, v.rows(), v.cols());
    } else {
        throw ShapeError("softmax axis must be 0 or 1");
    }
    return TapeScope::current().record(std::move(out), {x}, [axis](Node& n) {
        const NodePtr& in = n.inputs[0];
        if (!in->requires_grad) return;
        const Tensor& y = n.value;
        const Tensor& g = n.grad();
        Tensor& gin = in->grad();
        auto run = [&](int count, int len, auto index) {
            for (int r = 0; r < count; ++r) {
                double dot = 0.0;
                for (int i = 0; i < len; ++i) dot += g[index(r, i)] * y[index(r, i)];
                for (int i = 0; i < len; ++i) {
                    std::int64_t k = index(r, i);
                    gin[k] += y[k] * (g[k] - dot);
                }
            }
        };
        if (y.rank() == 1) {
            run(1, static_cast<int>(y.size()),
                [](int, int i) { return static_cast<std::int64_t>(i); });
        } else if (axis == 1) {
            const int c = y.cols();
            run(y.rows(), c, [c](int r, int i) { return static_cast<std::int64_t>(r) * c + i; });
        } else {
            const int c = y.cols();
            run(c, y.rows(), [c](int r, int i) { return static_cast<std::int64_t>(i) * c + r; });
        }
    });
}

NodePtr dropout(const NodePtr& x, double rate, bool train, Rng& rng) {
    if (rate < 0.0 || rate >= 1.0)
        throw NumericError("dropout rate must be in [0, 1), got " + std::to_string(rate));
    if (!train || rate == 0.0) return x;  // exact identity at eval time
    const double keep = 1.0 - rate;
    std::vector<double> mask(static_cast<std::size_t>(x->value.size()));
    Tensor out = x->value;
    double* po = out.data();
    for (std::int64_t i = 0; i < out.size(); ++i) {
        mask[static_cast<std::size_t>(i)] = rng.bernoulli(keep) ? 1.0 / keep : 0.0;
        po[i] *= mask[static_cast<std::size_t>(i)];
    }
    return TapeScope::current().record(std::move(out), {x}, [mask = std::move(mask)](Node& n) {
        const NodePtr& in = n.inputs[0];
        if (!in->requires_grad) return;
        Tensor& gin = in->grad();
        const Tensor& g = n.grad();
        for (std::int64_t i = 0; i < g.size(); ++i) gin[i] += g[i] * mask[static_cast<std::size_t>(i)];
    });
}

NodePtr cross_entropy(const NodePtr& logits, int label) {
    const Tensor& z = logits->value;
    const bool row = z.rank() == 2 && z.rows() == 1;
    if (!row && z.rank() != 1)
        throw ShapeError("cross_entropy expects a logit row, got " + z.shape_str());
    const int n = static_cast<int>(z.size());
    if (label < 0 || label >= n)
        throw NumericError("cross_entropy label " + std::to_string(label) + " out of range for " +
                           std::to_string(n) + " classes");
    double m = z[0];
    for (int i = 1; i < n; ++i) m = std::max(m, z[i]);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += std::exp(z[i] - m);
    const double lse = m + std::log(sum);
    double p = std::exp(z[label] - lse);
    if (p < 1e-12) {
        p = 1e-12;
        ++g_ce_clamp_events;
    }
    Tensor out = Tensor::scalar(-std::log(p));
    return TapeScope::current().record(std::move(out), {logits}, [label, lse](Node& n) {
        const NodePtr& in = n.inputs[0];
        if (!in->requires_grad) return;
        Tensor& gin = in->grad();
        const double g = n.grad()[0];
        for (std::int64_t i = 0; i < gin.size(); ++i) {
            double p_i = std::exp(in->value[i] - lse);
            gin[i] += g * (p_i - (i == label ? 1.0 : 0.0));
        }
    });
}

std::int64_t cross_entropy_clamp_events() { return g_ce_clamp_events; }
void reset_cross_entropy_clamp_events() { g_ce_clamp_events = 0; }

NodePtr embedding_lookup(const NodePtr& table, const std::vector<int>& ids) {
    const Tensor& t = table->value;
    if (t.rank() != 2) throw ShapeError("embedding table must be a matrix, got " + t.shape_str());
    if (ids.empty()) throw DataError("embedding_lookup on an empty id list");
    const int dim = t.cols();
    Tensor out = Tensor::zeros({static_cast<int>(ids.size()), dim});
    for (std::size_t r = 0; r < ids.size(); ++r) {
        const int id = ids[r];
        if (id < 0 || id >= t.rows())
            throw DataError("token id " + std::to_string(id) + " out of range for vocab of " +
                            std::to_string(t.rows()));
        for (int j = 0; j < dim; ++j) out.at(static_cast<int>(r), j) = t.at(id, j);
    }
    return TapeScope::current().record(std::move(out), {table}, [ids](Node& n) {
        const NodePtr& in = n.inputs[0];
        if (!in->requires_grad) return;
        Tensor& gin = in->grad();
        const Tensor& g = n.grad();
        const int dim = g.cols();
        for (std::size_t r = 0; r < ids.size(); ++r)
            for (int j = 0; j < dim; ++j) gin.at(ids[r], j) += g.at(static_cast<int>(r), j);
    });
}

Tensor softmax_values(const Tensor& logits) {
    Tensor out = Tensor::zeros(logits.shape());
    if (logits.rank() == 1) {
        softmax_row(logits.data(), out.data(), static_cast<int>(logits.size()), 1);
    } else {
        for (int i = 0; i < logits.rows(); ++i)
            softmax_row(logits.data() + static_cast<std::size_t>(i) * logits.cols(),
                        out.data() + static_cast<std::size_t>(i) * logits.cols(), logits.cols(), 1);
    }
    return out;
}

}  // namespace hrgnn
