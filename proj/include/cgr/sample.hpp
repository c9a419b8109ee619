#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgr/nn/model.hpp"
#include "cgr/rng.hpp"
#include "cgr/vocab.hpp"

namespace cgr::sample {

struct NonFiniteLogits : std::runtime_error {
    NonFiniteLogits() : std::runtime_error("non-finite logits passed to sampler") {}
};

struct SamplerConfig {
    double temperature = 0.7;
    int max_len = 156;  // emitted payload characters, framing tokens excluded
    int count = 30000;
    uint64_t seed = 0;
    int start_id = Vocabulary::kSos;
    int end_id = Vocabulary::kEos;
    int pad_id = Vocabulary::kPad;
};

// P(i) = exp(y_i / T) / sum_j exp(y_j / T)
template <typename T>
std::vector<double> tempered_probs(const std::vector<T>& logits, double temperature) {
    if (temperature <= 0) throw std::invalid_argument("temperature must be > 0");
    double mx = -1e300;
    for (T v : logits) {
        if (!std::isfinite(static_cast<double>(v))) throw NonFiniteLogits();
        mx = std::max(mx, static_cast<double>(v));
    }
    std::vector<double> p(logits.size());
    double sum = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        p[i] = std::exp((static_cast<double>(logits[i]) - mx) / temperature);
        sum += p[i];
    }
    for (auto& v : p) v /= sum;
    return p;
}

template <typename T>
int sample_next(const std::vector<T>& logits, double temperature, Rng& rng) {
    std::vector<double> p = tempered_probs(logits, temperature);
    double u = rng.uniform();
    double acc = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(p.size()) - 1;
}

// Autoregressive batch generation. Each string gets its own RNG stream, so
// batches can be produced by independent samplers and concatenated in stream
// order without changing the result.
template <typename T>
std::vector<std::string> generate(nn::Model<T>& model, const Vocabulary& vocab,
                                  const SamplerConfig& cfg) {
    std::vector<std::string> out;
    out.reserve(static_cast<size_t>(cfg.count));
    Rng dummy(0);
    for (int i = 0; i < cfg.count; ++i) {
        Rng rng(cfg.seed, static_cast<uint64_t>(i) + 1);
        std::vector<int> tokens{cfg.start_id};
        std::string payload;
        while (true) {
            ad::Tensor<T> x = nn::one_hot<T>(tokens, model.config.vocab_size);
            ad::Tensor<T> logits = model.forward(nullptr, x, false, dummy);
            const int last = logits.dim(0) - 1;
            std::vector<T> row(static_cast<size_t>(model.config.vocab_size));
            for (int j = 0; j < model.config.vocab_size; ++j) row[static_cast<size_t>(j)] = logits.at2(last, j);
            int id = sample_next(row, cfg.temperature, rng);
            if (id == cfg.end_id) break;
            tokens.push_back(id);
            if (id > Vocabulary::kEos) {
                const std::string& tok = vocab.token(id);
                if (payload.size() + tok.size() > static_cast<size_t>(cfg.max_len)) break;
                payload += tok;
            }
            if (payload.size() >= static_cast<size_t>(cfg.max_len)) break;
        }
        out.push_back(payload);
    }
    return out;
}

}  // namespace cgr::sample
