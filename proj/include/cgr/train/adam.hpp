#pragma once

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "cgr/nn/model.hpp"
#include "cgr/tensor.hpp"

namespace cgr::train {

template <typename T>
struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long step = 0;
    std::vector<std::vector<T>> m;  // first moments, one entry per parameter
    std::vector<std::vector<T>> v;  // second moments

    explicit AdamState(const nn::ModelParams<T>& params, double learning_rate = 1e-3)
        : lr(learning_rate) {
        for (size_t i = 0; i < params.count(); ++i) {
            m.emplace_back(params.at(i).size(), T(0));
            v.emplace_back(params.at(i).size(), T(0));
        }
    }
};

// Scale gradients of the trainable set so their global norm is at most
// max_norm. grad_scale is applied first (batch averaging).
template <typename T>
void clip_gradients(nn::ModelParams<T>& params, const std::set<std::string>& trainable,
                    double grad_scale, double max_norm) {
    double sq = 0;
    for (size_t i = 0; i < params.count(); ++i) {
        if (!trainable.count(params.names()[i])) continue;
        for (T g : params.at(i).grad()) {
            double gv = static_cast<double>(g) * grad_scale;
            sq += gv * gv;
        }
    }
    double norm = std::sqrt(sq);
    double factor = grad_scale;
    if (max_norm > 0 && norm > max_norm) factor *= max_norm / norm;
    if (factor == 1.0) return;
    for (size_t i = 0; i < params.count(); ++i) {
        if (!trainable.count(params.names()[i])) continue;
        for (T& g : params.at(i).grad()) g = static_cast<T>(g * factor);
    }
}

// Bias-corrected Adam update over the trainable subset. Frozen parameters
// are untouched, including their moment buffers.
template <typename T>
void adam_step(nn::ModelParams<T>& params, AdamState<T>& state,
               const std::set<std::string>& trainable) {
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, state.step);
    const double bc2 = 1.0 - std::pow(state.beta2, state.step);
    for (size_t i = 0; i < params.count(); ++i) {
        if (!trainable.count(params.names()[i])) continue;
        auto& w = params.at(i).value();
        const auto& g = params.at(i).grad();
        if (g.size() != w.size()) throw ad::ShapeMismatch("adam_step: gradient missing");
        auto& mi = state.m[i];
        auto& vi = state.v[i];
        for (size_t k = 0; k < w.size(); ++k) {
            double gv = g[k];
            double mv = state.beta1 * mi[k] + (1.0 - state.beta1) * gv;
            double vv = state.beta2 * vi[k] + (1.0 - state.beta2) * gv * gv;
            mi[k] = static_cast<T>(mv);
            vi[k] = static_cast<T>(vv);
            double mhat = mv / bc1;
            double vhat = vv / bc2;
            w[k] = static_cast<T>(w[k] - state.lr * mhat / (std::sqrt(vhat) + state.eps));
        }
    }
}

template <typename T>
std::set<std::string> all_param_names(const nn::ModelParams<T>& params) {
    return {params.names().begin(), params.names().end()};
}

}  // namespace cgr::train
