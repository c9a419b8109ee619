#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgr/rng.hpp"

namespace cgr::ad {

struct ShapeMismatch : std::runtime_error {
    explicit ShapeMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct DoubleBackward : std::runtime_error {
    DoubleBackward() : std::runtime_error("backward called twice without tape reset") {}
};
struct EmptyMask : std::runtime_error {
    EmptyMask() : std::runtime_error("cross_entropy: no unmasked positions") {}
};

using Shape = std::vector<int>;

inline size_t numel(const Shape& s) {
    size_t n = 1;
    for (int d : s) n *= static_cast<size_t>(d);
    return n;
}

template <typename T>
struct TensorData {
    Shape shape;
    std::vector<T> value;
    std::vector<T> grad;  // allocated lazily, same length as value
    bool requires_grad = false;

    void ensure_grad() {
        if (grad.size() != value.size()) grad.assign(value.size(), T(0));
    }
};

// Value-semantic handle to shared storage. Copies alias the same buffer.
template <typename T>
class Tensor {
public:
    Tensor() = default;
    Tensor(Shape shape, bool requires_grad = false)
        : d_(std::make_shared<TensorData<T>>()) {
        d_->shape = std::move(shape);
        d_->value.assign(numel(d_->shape), T(0));
        d_->requires_grad = requires_grad;
    }
    Tensor(Shape shape, std::initializer_list<T> value, bool requires_grad = false)
        : Tensor(std::move(shape), std::vector<T>(value), requires_grad) {}
    Tensor(Shape shape, std::vector<T> value, bool requires_grad = false)
        : d_(std::make_shared<TensorData<T>>()) {
        if (numel(shape) != value.size())
            throw ShapeMismatch("tensor init: shape/data size mismatch");
        d_->shape = std::move(shape);
        d_->value = std::move(value);
        d_->requires_grad = requires_grad;
    }

    bool defined() const { return static_cast<bool>(d_); }
    const Shape& shape() const { return d_->shape; }
    int dim(int i) const { return d_->shape[static_cast<size_t>(i)]; }
    int rank() const { return static_cast<int>(d_->shape.size()); }
    size_t size() const { return d_->value.size(); }
    bool requires_grad() const { return d_ && d_->requires_grad; }
    void set_requires_grad(bool b) { d_->requires_grad = b; }

    std::vector<T>& value() { return d_->value; }
    const std::vector<T>& value() const { return d_->value; }
    std::vector<T>& grad() {
        d_->ensure_grad();
        return d_->grad;
    }
    const std::vector<T>& grad() const {
        d_->ensure_grad();
        return d_->grad;
    }
    void zero_grad() {
        if (!d_->grad.empty()) std::fill(d_->grad.begin(), d_->grad.end(), T(0));
    }

    T& at(size_t i) { return d_->value[i]; }
    T at(size_t i) const { return d_->value[i]; }
    // row-major [rows, cols]
    T& at2(int r, int c) { return d_->value[static_cast<size_t>(r) * dim(1) + c]; }
    T at2(int r, int c) const { return d_->value[static_cast<size_t>(r) * dim(1) + c]; }

    std::shared_ptr<TensorData<T>> data_ptr() const { return d_; }

    bool same_storage(const Tensor& other) const { return d_ == other.d_; }

private:
    std::shared_ptr<TensorData<T>> d_;
};

// Reverse-mode tape. Nodes are recorded in execution order; backward replays
// them once in reverse. A tape and its tensors belong to a single thread.
template <typename T>
class Tape {
public:
    void record(std::function<void()> backward_fn) {
        nodes_.push_back(std::move(backward_fn));
    }

    void backward(Tensor<T>& loss) {
        if (done_) throw DoubleBackward();
        if (loss.size() != 1)
            throw ShapeMismatch("backward expects a scalar loss");
        loss.grad()[0] = T(1);
        for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) (*it)();
        done_ = true;
    }

    void reset() {
        nodes_.clear();
        done_ = false;
    }

    size_t node_count() const { return nodes_.size(); }

private:
    std::vector<std::function<void()>> nodes_;
    bool done_ = false;
};

namespace detail {

template <typename T>
inline bool track(Tape<T>* tp, std::initializer_list<const Tensor<T>*> inputs) {
    if (!tp) return false;
    for (const Tensor<T>* t : inputs)
        if (t->requires_grad()) return true;
    return false;
}

inline void check(bool cond, const std::string& msg) {
    if (!cond) throw ShapeMismatch(msg);
}

}  // namespace detail

template <typename T>
Tensor<T> matmul(Tape<T>* tp, const Tensor<T>& a, const Tensor<T>& b) {
    detail::check(a.rank() == 2 && b.rank() == 2 && a.dim(1) == b.dim(0),
                  "matmul: inner dimensions disagree");
    const int m = a.dim(0), k = a.dim(1), n = b.dim(0) == k ? b.dim(1) : 0;
    Tensor<T> out(Shape{m, n});
    for (int i = 0; i < m; ++i)
        for (int p = 0; p < k; ++p) {
            T av = a.at2(i, p);
            if (av == T(0)) continue;
            for (int j = 0; j < n; ++j) out.at2(i, j) += av * b.at2(p, j);
        }
    if (detail::track(tp, {&a, &b})) {
        out.set_requires_grad(true);
        Tensor<T> ac = a, bc = b, oc = out;
        tp->record([ac, bc, oc]() mutable {
            const int m = ac.dim(0), k = ac.dim(1), n = bc.dim(1);
            const auto& go = oc.grad();
            if (ac.requires_grad()) {
                auto& ga = ac.grad();
                for (int i = 0; i < m; ++i)
                    for (int p = 0; p < k; ++p) {
                        T s = 0;
                        for (int j = 0; j < n; ++j)
                            s += go[static_cast<size_t>(i) * n + j] * bc.at2(p, j);
                        ga[static_cast<size_t>(i) * k + p] += s;
                    }
            }
            if (bc.requires_grad()) {
                auto& gb = bc.grad();
                for (int p = 0; p < k; ++p)
                    for (int i = 0; i < m; ++i) {
                        T av = ac.at2(i, p);
                        if (av == T(0)) continue;
                        for (int j = 0; j < n; ++j)
                            gb[static_cast<size_t>(p) * n + j] +=
                                av * go[static_cast<size_t>(i) * n + j];
                    }
            }
        });
    }
    return out;
}

template <typename T>
Tensor<T> add(Tape<T>* tp, const Tensor<T>& a, const Tensor<T>& b) {
    detail::check(a.shape() == b.shape(), "add: shape mismatch");
    Tensor<T> out(a.shape());
    for (size_t i = 0; i < a.size(); ++i) out.at(i) = a.at(i) + b.at(i);
    if (detail::track(tp, {&a, &b})) {
        out.set_requires_grad(true);
        Tensor<T> ac = a, bc = b, oc = out;
        tp->record([ac, bc, oc]() mutable {
            const auto& go = oc.grad();
            if (ac.requires_grad()) {
                auto& g = ac.grad();
                for (size_t i = 0; i < g.size(); ++i) g[i] += go[i];
            }
            if (bc.requires_grad()) {
                auto& g = bc.grad();
                for (size_t i = 0; i < g.size(); ++i) g[i] += go[i];
            }
        });
    }
    return out;
}

// x: [T, C], bias: [C] added to every row
template <typename T>
Tensor<T> add_row(Tape<T>* tp, const Tensor<T>& x, const Tensor<T>& bias) {
    detail::check(x.rank() == 2 && bias.rank() == 1 && x.dim(1) == bias.dim(0),
                  "add_row: bias width mismatch");
    const int rows = x.dim(0), cols = x.dim(1);
    Tensor<T> out(x.shape());
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) out.at2(r, c) = x.at2(r, c) + bias.at(c);
    if (detail::track(tp, {&x, &bias})) {
        out.set_requires_grad(true);
        Tensor<T> xc = x, bc = bias, oc = out;
        tp->record([xc, bc, oc]() mutable {
            const int rows = xc.dim(0), cols = xc.dim(1);
            const auto& go = oc.grad();
            if (xc.requires_grad()) {
                auto& g = xc.grad();
                for (size_t i = 0; i < g.size(); ++i) g[i] += go[i];
            }
            if (bc.requires_grad()) {
                auto& g = bc.grad();
                for (int r = 0; r < rows; ++r)
                    for (int c = 0; c < cols; ++c)
                        g[c] += go[static_cast<size_t>(r) * cols + c];
            }
        });
    }
    return out;
}

template <typename T>
Tensor<T> hadamard(Tape<T>* tp, const Tensor<T>& a, const Tensor<T>& b) {
    detail::check(a.shape() == b.shape(), "hadamard: shape mismatch");
    Tensor<T> out(a.shape());
    for (size_t i = 0; i < a.size(); ++i) out.at(i) = a.at(i) * b.at(i);
    if (detail::track(tp, {&a, &b})) {
        out.set_requires_grad(true);
        Tensor<T> ac = a, bc = b, oc = out;
        tp->record([ac, bc, oc]() mutable {
            const auto& go = oc.grad();
            if (ac.requires_grad()) {
                auto& g = ac.grad();
                for (size_t i = 0; i < g.size(); ++i) g[i] += go[i] * bc.at(i);
            }
            if (bc.requires_grad()) {
                auto& g = bc.grad();
                for (size_t i = 0; i < g.size(); ++i) g[i] += go[i] * ac.at(i);
            }
        });
    }
    return out;
}

namespace detail {

template <typename T, typename F, typename DF>
Tensor<T> unary(Tape<T>* tp, const Tensor<T>& x, F f, DF df_from_y) {
    Tensor<T> out(x.shape());
    for (size_t i = 0; i < x.size(); ++i) out.at(i) = f(x.at(i));
    if (track(tp, {&x})) {
        out.set_requires_grad(true);
        Tensor<T> xc = x, oc = out;
        tp->record([xc, oc, df_from_y]() mutable {
            const auto& go = oc.grad();
            auto& g = xc.grad();
            for (size_t i = 0; i < g.size(); ++i)
                g[i] += go[i] * df_from_y(oc.at(i), xc.at(i));
        });
    }
    return out;
}

}  // namespace detail

template <typename T>
Tensor<T> sigmoid(Tape<T>* tp, const Tensor<T>& x) {
    return detail::unary(
        tp, x,
        [](T v) { return v >= T(0) ? T(1) / (T(1) + std::exp(-v))
                                   : std::exp(v) / (T(1) + std::exp(v)); },
        [](T y, T) { return y * (T(1) - y); });
}

template <typename T>
Tensor<T> tanh_(Tape<T>* tp, const Tensor<T>& x) {
    return detail::unary(
        tp, x, [](T v) { return std::tanh(v); },
        [](T y, T) { return T(1) - y * y; });
}

template <typename T>
Tensor<T> relu(Tape<T>* tp, const Tensor<T>& x) {
    return detail::unary(
        tp, x, [](T v) { return v > T(0) ? v : T(0); },
        [](T, T xv) { return xv > T(0) ? T(1) : T(0); });
}

// Inverted dropout: kept activations are scaled by 1/(1-p). Identity when
// train is false.
template <typename T>
Tensor<T> dropout(Tape<T>* tp, const Tensor<T>& x, double p, bool train, Rng& rng) {
    if (!train || p <= 0.0) return x;
    detail::check(p < 1.0, "dropout: p must be < 1");
    const T scale = T(1.0 / (1.0 - p));
    std::vector<T> mask(x.size());
    for (size_t i = 0; i < mask.size(); ++i)
        mask[i] = rng.uniform() < p ? T(0) : scale;
    Tensor<T> out(x.shape());
    for (size_t i = 0; i < x.size(); ++i) out.at(i) = x.at(i) * mask[i];
    if (detail::track(tp, {&x})) {
        out.set_requires_grad(true);
        Tensor<T> xc = x, oc = out;
        tp->record([xc, oc, mask = std::move(mask)]() mutable {
            const auto& go = oc.grad();
            auto& g = xc.grad();
            for (size_t i = 0; i < g.size(); ++i) g[i] += go[i] * mask[i];
        });
    }
    return out;
}

// [T, C1] ++ [T, C2] -> [T, C1+C2]
template <typename T>
Tensor<T> concat_channels(Tape<T>* tp, const Tensor<T>& a, const Tensor<T>& b) {
    detail::check(a.rank() == 2 && b.rank() == 2 && a.dim(0) == b.dim(0),
                  "concat_channels: row counts disagree");
    const int rows = a.dim(0), ca = a.dim(1), cb = b.dim(1);
    Tensor<T> out(Shape{rows, ca + cb});
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < ca; ++c) out.at2(r, c) = a.at2(r, c);
        for (int c = 0; c < cb; ++c) out.at2(r, ca + c) = b.at2(r, c);
    }
    if (detail::track(tp, {&a, &b})) {
        out.set_requires_grad(true);
        Tensor<T> ac = a, bc = b, oc = out;
        tp->record([ac, bc, oc]() mutable {
            const int rows = ac.dim(0), ca = ac.dim(1), cb = bc.dim(1);
            const auto& go = oc.grad();
            if (ac.requires_grad()) {
                auto& g = ac.grad();
                for (int r = 0; r < rows; ++r)
                    for (int c = 0; c < ca; ++c)
                        g[static_cast<size_t>(r) * ca + c] +=
                            go[static_cast<size_t>(r) * (ca + cb) + c];
            }
            if (bc.requires_grad()) {
                auto& g = bc.grad();
                for (int r = 0; r < rows; ++r)
                    for (int c = 0; c < cb; ++c)
                        g[static_cast<size_t>(r) * cb + c] +=
                            go[static_cast<size_t>(r) * (ca + cb) + ca + c];
            }
        });
    }
    return out;
}

// Select row t of [T, C] as a [1, C] tensor.
template <typename T>
Tensor<T> select_row(Tape<T>* tp, const Tensor<T>& x, int t) {
    detail::check(x.rank() == 2 && t >= 0 && t < x.dim(0), "select_row: index out of range");
    const int cols = x.dim(1);
    Tensor<T> out(Shape{1, cols});
    for (int c = 0; c < cols; ++c) out.at2(0, c) = x.at2(t, c);
    if (detail::track(tp, {&x})) {
        out.set_requires_grad(true);
        Tensor<T> xc = x, oc = out;
        tp->record([xc, oc, t]() mutable {
            const int cols = xc.dim(1);
            const auto& go = oc.grad();
            auto& g = xc.grad();
            for (int c = 0; c < cols; ++c) g[static_cast<size_t>(t) * cols + c] += go[c];
        });
    }
    return out;
}

// Columns [c0, c1) of a [1, C] tensor.
template <typename T>
Tensor<T> slice_cols(Tape<T>* tp, const Tensor<T>& x, int c0, int c1) {
    detail::check(x.rank() == 2 && x.dim(0) == 1 && 0 <= c0 && c0 < c1 && c1 <= x.dim(1),
                  "slice_cols: bad range");
    Tensor<T> out(Shape{1, c1 - c0});
    for (int c = c0; c < c1; ++c) out.at2(0, c - c0) = x.at2(0, c);
    if (detail::track(tp, {&x})) {
        out.set_requires_grad(true);
        Tensor<T> xc = x, oc = out;
        tp->record([xc, oc, c0, c1]() mutable {
            const auto& go = oc.grad();
            auto& g = xc.grad();
            for (int c = c0; c < c1; ++c) g[c] += go[c - c0];
        });
    }
    return out;
}

// Stack R tensors of shape [1, C] into [R, C].
template <typename T>
Tensor<T> stack_rows(Tape<T>* tp, const std::vector<Tensor<T>>& rows) {
    detail::check(!rows.empty(), "stack_rows: empty input");
    const int cols = rows[0].dim(1);
    Tensor<T> out(Shape{static_cast<int>(rows.size()), cols});
    bool any_grad = false;
    for (size_t r = 0; r < rows.size(); ++r) {
        detail::check(rows[r].rank() == 2 && rows[r].dim(0) == 1 && rows[r].dim(1) == cols,
                      "stack_rows: inconsistent row shape");
        for (int c = 0; c < cols; ++c) out.at2(static_cast<int>(r), c) = rows[r].at2(0, c);
        any_grad = any_grad || rows[r].requires_grad();
    }
    if (tp && any_grad) {
        out.set_requires_grad(true);
        std::vector<Tensor<T>> rc = rows;
        Tensor<T> oc = out;
        tp->record([rc, oc]() mutable {
            const int cols = oc.dim(1);
            const auto& go = oc.grad();
            for (size_t r = 0; r < rc.size(); ++r) {
                if (!rc[r].requires_grad()) continue;
                auto& g = rc[r].grad();
                for (int c = 0; c < cols; ++c) g[c] += go[r * cols + c];
            }
        });
    }
    return out;
}

// Reverse along the time axis of [T, C].
template <typename T>
Tensor<T> reverse_time(Tape<T>* tp, const Tensor<T>& x) {
    detail::check(x.rank() == 2, "reverse_time: rank-2 input expected");
    const int rows = x.dim(0), cols = x.dim(1);
    Tensor<T> out(x.shape());
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) out.at2(r, c) = x.at2(rows - 1 - r, c);
    if (detail::track(tp, {&x})) {
        out.set_requires_grad(true);
        Tensor<T> xc = x, oc = out;
        tp->record([xc, oc]() mutable {
            const int rows = xc.dim(0), cols = xc.dim(1);
            const auto& go = oc.grad();
            auto& g = xc.grad();
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c)
                    g[static_cast<size_t>(rows - 1 - r) * cols + c] +=
                        go[static_cast<size_t>(r) * cols + c];
        });
    }
    return out;
}

// Causal dilated 1-D convolution with left zero padding.
// x: [T, Cin], w: [K, Cin, Cout], bias: [Cout] -> [T, Cout]
// y[t] = sum_k w[k] . x[t - k*dilation] + bias, x[t'<0] = 0.
template <typename T>
Tensor<T> causal_dilated_conv1d(Tape<T>* tp, const Tensor<T>& x, const Tensor<T>& w,
                                const Tensor<T>& bias, int dilation) {
    detail::check(x.rank() == 2 && w.rank() == 3 && bias.rank() == 1, "conv1d: bad ranks");
    detail::check(w.dim(1) == x.dim(1) && w.dim(2) == bias.dim(0), "conv1d: channel mismatch");
    detail::check(w.dim(0) >= 1 && dilation >= 1, "conv1d: kernel and dilation must be >= 1");
    const int len = x.dim(0), cin = x.dim(1), kk = w.dim(0), cout = w.dim(2);
    auto widx = [cin, cout](int k, int i, int o) {
        return (static_cast<size_t>(k) * cin + i) * cout + o;
    };
    Tensor<T> out(Shape{len, cout});
    for (int t = 0; t < len; ++t) {
        for (int o = 0; o < cout; ++o) out.at2(t, o) = bias.at(o);
        for (int k = 0; k < kk; ++k) {
            const int src = t - k * dilation;
            if (src < 0) continue;
            for (int i = 0; i < cin; ++i) {
                T xv = x.at2(src, i);
                if (xv == T(0)) continue;
                for (int o = 0; o < cout; ++o) out.at2(t, o) += xv * w.value()[widx(k, i, o)];
            }
        }
    }
    if (detail::track(tp, {&x, &w, &bias})) {
        out.set_requires_grad(true);
        Tensor<T> xc = x, wc = w, bc = bias, oc = out;
        tp->record([xc, wc, bc, oc, dilation, widx]() mutable {
            const int len = xc.dim(0), cin = xc.dim(1), kk = wc.dim(0), cout = wc.dim(2);
            const auto& go = oc.grad();
            for (int t = 0; t < len; ++t) {
                const T* grow = &go[static_cast<size_t>(t) * cout];
                if (bc.requires_grad()) {
                    auto& gb = bc.grad();
                    for (int o = 0; o < cout; ++o) gb[o] += grow[o];
                }
                for (int k = 0; k < kk; ++k) {
                    const int src = t - k * dilation;
                    if (src < 0) continue;
                    for (int i = 0; i < cin; ++i) {
                        if (wc.requires_grad()) {
                            T xv = xc.at2(src, i);
                            if (xv != T(0)) {
                                auto& gw = wc.grad();
                                for (int o = 0; o < cout; ++o)
                                    gw[widx(k, i, o)] += xv * grow[o];
                            }
                        }
                        if (xc.requires_grad()) {
                            T s = 0;
                            for (int o = 0; o < cout; ++o)
                                s += wc.value()[widx(k, i, o)] * grow[o];
                            xc.grad()[static_cast<size_t>(src) * cin + i] += s;
                        }
                    }
                }
            }
        });
    }
    return out;
}

// Softmax over a vector (rank-1 or [1, V]).
template <typename T>
Tensor<T> softmax(Tape<T>* tp, const Tensor<T>& z) {
    detail::check(z.rank() == 1 || (z.rank() == 2 && z.dim(0) == 1), "softmax: vector expected");
    const size_t n = z.size();
    Tensor<T> out(z.shape());
    T mx = z.at(0);
    for (size_t i = 1; i < n; ++i) mx = std::max(mx, z.at(i));
    T sum = 0;
    for (size_t i = 0; i < n; ++i) {
        out.at(i) = std::exp(z.at(i) - mx);
        sum += out.at(i);
    }
    for (size_t i = 0; i < n; ++i) out.at(i) /= sum;
    if (detail::track(tp, {&z})) {
        out.set_requires_grad(true);
        Tensor<T> zc = z, oc = out;
        tp->record([zc, oc]() mutable {
            const auto& go = oc.grad();
            auto& g = zc.grad();
            T dot = 0;
            for (size_t i = 0; i < oc.size(); ++i) dot += go[i] * oc.at(i);
            for (size_t i = 0; i < oc.size(); ++i) g[i] += oc.at(i) * (go[i] - dot);
        });
    }
    return out;
}

// Mean of -log softmax(logits[t])[target[t]] over unmasked positions.
/// logits: [T, V]; mask[t] = true means the position counts.
template <typename T>
Tensor<T> cross_entropy(Tape<T>* tp, const Tensor<T>& logits, const std::vector<int>& targets,
                        const std::vector<bool>& mask) {
    detail::check(logits.rank() == 2, "cross_entropy: [T,V] logits expected");
    const int len = logits.dim(0), v = logits.dim(1);
    detail::check(targets.size() == static_cast<size_t>(len) && mask.size() == targets.size(),
                  "cross_entropy: targets/mask length mismatch");
    int active = 0;
    for (bool b : mask) active += b ? 1 : 0;
    if (active == 0) throw EmptyMask();

    // cache probabilities for the backward pass
    std::vector<T> probs(static_cast<size_t>(len) * v);
    T loss = 0;
    for (int t = 0; t < len; ++t) {
        T mx = logits.at2(t, 0);
        for (int j = 1; j < v; ++j) mx = std::max(mx, logits.at2(t, j));
        T sum = 0;
        for (int j = 0; j < v; ++j) {
            T e = std::exp(logits.at2(t, j) - mx);
            probs[static_cast<size_t>(t) * v + j] = e;
            sum += e;
        }
        for (int j = 0; j < v; ++j) probs[static_cast<size_t>(t) * v + j] /= sum;
        if (mask[t]) {
            detail::check(targets[t] >= 0 && targets[t] < v, "cross_entropy: target out of range");
            loss -= std::log(std::max(probs[static_cast<size_t>(t) * v + targets[t]],
                                      std::numeric_limits<T>::min()));
        }
    }
    Tensor<T> out(Shape{1});
    out.at(0) = loss / T(active);
    if (detail::track(tp, {&logits})) {
        out.set_requires_grad(true);
        Tensor<T> lc = logits, oc = out;
        tp->record([lc, oc, probs = std::move(probs), targets, mask, active]() mutable {
            const int len = lc.dim(0), v = lc.dim(1);
            const T scale = oc.grad()[0] / T(active);
            auto& g = lc.grad();
            for (int t = 0; t < len; ++t) {
                if (!mask[t]) continue;
                for (int j = 0; j < v; ++j) {
                    T p = probs[static_cast<size_t>(t) * v + j];
                    g[static_cast<size_t>(t) * v + j] +=
                        scale * (p - (j == targets[t] ? T(1) : T(0)));
                }
            }
        });
    }
    return out;
}

template <typename T>
Tensor<T> scale(Tape<T>* tp, const Tensor<T>& x, T factor) {
    return detail::unary(
        tp, x, [factor](T v) { return v * factor; },
        [factor](T, T) { return factor; });
}

}  // namespace cgr::ad
