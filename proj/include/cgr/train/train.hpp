#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgr/nn/model.hpp"
#include "cgr/rng.hpp"
#include "cgr/tensor.hpp"
#include "cgr/train/adam.hpp"
#include "cgr/vocab.hpp"

namespace cgr::train {

struct EmptyCorpus : std::runtime_error {
    EmptyCorpus() : std::runtime_error("corpus is empty") {}
};
struct DivergenceError : std::runtime_error {
    explicit DivergenceError(int epoch)
        : std::runtime_error("non-finite loss at epoch " + std::to_string(epoch)) {}
};
struct ProtocolError : std::runtime_error {
    explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

struct TrainConfig {
    double lr = 1e-3;
    int epochs = 50;
    int batch_size = 64;
    double split = 0.8;
    uint64_t seed = 0;
    bool shuffle = true;
    double clip_norm = 5.0;
};

// Deterministic shuffled split; first round(N * fraction) shuffled entries
// train, the rest test.
template <typename Item>
std::pair<std::vector<Item>, std::vector<Item>> split_dataset(const std::vector<Item>& corpus,
                                                              double fraction, uint64_t seed) {
    if (corpus.empty()) throw EmptyCorpus();
    std::vector<size_t> order(corpus.size());
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng(seed, /*stream=*/0x511);
    for (size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.below(i)]);
    size_t n_train = static_cast<size_t>(std::lround(fraction * corpus.size()));
    std::pair<std::vector<Item>, std::vector<Item>> out;
    for (size_t i = 0; i < order.size(); ++i)
        (i < n_train ? out.first : out.second).push_back(corpus[order[i]]);
    return out;
}

struct EpochStats {
    double train_loss = 0;
    double test_loss = 0;
};

namespace detail {

// Teacher forcing: input <sos> + seq, target seq + <eos>.
inline void frame(const std::vector<int>& seq, std::vector<int>* input,
                  std::vector<int>* target) {
    input->clear();
    target->clear();
    input->push_back(Vocabulary::kSos);
    input->insert(input->end(), seq.begin(), seq.end());
    *target = seq;
    target->push_back(Vocabulary::kEos);
}

template <typename T>
double sequence_loss(nn::Model<T>& model, const std::vector<int>& seq, ad::Tape<T>* tp,
                     bool train, Rng& rng) {
    std::vector<int> input, target;
    frame(seq, &input, &target);
    ad::Tensor<T> x = nn::one_hot<T>(input, model.config.vocab_size);
    ad::Tensor<T> logits = model.forward(tp, x, train, rng);
    std::vector<bool> mask(target.size(), true);
    for (size_t t = 0; t < target.size(); ++t)
        if (target[t] == Vocabulary::kPad) mask[t] = false;
    ad::Tensor<T> loss = ad::cross_entropy(tp, logits, target, mask);
    double lv = static_cast<double>(loss.at(0));
    if (tp) tp->backward(loss);
    return lv;
}

}  // namespace detail

template <typename T>
double evaluate_loss(nn::Model<T>& model, const std::vector<std::vector<int>>& data) {
    if (data.empty()) return 0.0;
    Rng dummy(0);
    double total = 0;
    for (const auto& seq : data)
        total += detail::sequence_loss(model, seq, static_cast<ad::Tape<T>*>(nullptr), false,
                                       dummy);
    return total / static_cast<double>(data.size());
}

// Next-token accuracy under teacher forcing, padding excluded.
template <typename T>
double next_token_accuracy(nn::Model<T>& model, const std::vector<std::vector<int>>& data) {
    Rng dummy(0);
    size_t hit = 0, total = 0;
    for (const auto& seq : data) {
        std::vector<int> input, target;
        detail::frame(seq, &input, &target);
        ad::Tensor<T> x = nn::one_hot<T>(input, model.config.vocab_size);
        ad::Tensor<T> logits = model.forward(nullptr, x, false, dummy);
        for (size_t t = 0; t < target.size(); ++t) {
            if (target[t] == Vocabulary::kPad) continue;
            int best = 0;
            for (int j = 1; j < model.config.vocab_size; ++j)
                if (logits.at2(static_cast<int>(t), j) > logits.at2(static_cast<int>(t), best))
                    best = j;
            hit += best == target[t] ? 1 : 0;
            ++total;
        }
    }
    return total ? static_cast<double>(hit) / static_cast<double>(total) : 0.0;
}

// Optimize over `trainable` for `epochs`. Gradients are averaged over the
// batch, clipped by global norm, then stepped. Returns per-epoch stats.
template <typename T>
std::vector<EpochStats> run_training(nn::Model<T>& model,
                                     const std::vector<std::vector<int>>& train_data,
                                     const std::vector<std::vector<int>>& test_data,
                                     const TrainConfig& cfg, int epochs,
                                     const std::set<std::string>& trainable, AdamState<T>& adam,
                                     Rng& rng, long* update_count = nullptr) {
    if (train_data.empty()) throw EmptyCorpus();
    std::vector<EpochStats> history;
    std::vector<size_t> order(train_data.size());
    std::iota(order.begin(), order.end(), size_t{0});
    for (int epoch = 0; epoch < epochs; ++epoch) {
        if (cfg.shuffle)
            for (size_t i = order.size(); i > 1; --i)
                std::swap(order[i - 1], order[rng.below(i)]);
        double epoch_loss = 0;
        size_t done = 0;
        while (done < order.size()) {
            size_t batch = std::min<size_t>(cfg.batch_size, order.size() - done);
            model.params.zero_grad();
            for (size_t b = 0; b < batch; ++b) {
                ad::Tape<T> tape;
                epoch_loss +=
                    detail::sequence_loss(model, train_data[order[done + b]], &tape, true, rng);
            }
            done += batch;
            if (!trainable.empty()) {
                clip_gradients(model.params, trainable, 1.0 / static_cast<double>(batch),
                               cfg.clip_norm);
                adam_step(model.params, adam, trainable);
            }
            if (update_count) ++(*update_count);
        }
        EpochStats s;
        s.train_loss = epoch_loss / static_cast<double>(order.size());
        s.test_loss = evaluate_loss(model, test_data);
        if (!std::isfinite(s.train_loss) || !std::isfinite(s.test_loss))
            throw DivergenceError(epoch);
        history.push_back(s);
    }
    return history;
}

template <typename T>
std::vector<EpochStats> train_epochs(nn::Model<T>& model,
                                     const std::vector<std::vector<int>>& train_data,
                                     const std::vector<std::vector<int>>& test_data,
                                     const TrainConfig& cfg, Rng& rng) {
    AdamState<T> adam(model.params, cfg.lr);
    auto trainable = all_param_names(model.params);
    return run_training(model, train_data, test_data, cfg, cfg.epochs, trainable, adam, rng);
}

// ---------------------------------------------------------------------------
// Fine tuning

enum class ProtocolVariant { AU, LL, P1 };

struct FineTuneProtocol {
    ProtocolVariant variant = ProtocolVariant::AU;
    int epochs = 10;
    double lr = 1e-3;
    // P1 schedule; lists are paired by index and executed starting from the
    // last group.
    std::vector<std::vector<int>> p1_groups = {{1, 2}, {4}, {5}};
    std::vector<int> p1_epochs = {2, 5, 10};
    std::vector<double> p1_lrs = {1e-6, 1e-5, 5e-4};
};

inline ProtocolVariant protocol_from_name(const std::string& s) {
    if (s == "AU") return ProtocolVariant::AU;
    if (s == "LL") return ProtocolVariant::LL;
    if (s == "P1") return ProtocolVariant::P1;
    throw ProtocolError("unknown protocol: " + s);
}

struct FineTunePhase {
    std::vector<int> slots;
    std::set<std::string> trainable;
    int epochs = 0;
    double lr = 0;
    long updates = 0;
    std::vector<EpochStats> history;
};

template <typename T>
std::set<std::string> slot_params(const nn::Model<T>& model, const std::vector<int>& slots) {
    std::set<std::string> out;
    auto layout = model.layer_slots();
    for (int s : slots) {
        bool found = false;
        for (const auto& [slot, names] : layout)
            if (slot == s) {
                out.insert(names.begin(), names.end());
                found = true;
            }
        if (!found) throw ProtocolError("model has no layer slot " + std::to_string(s));
    }
    return out;
}

// AU: all weights, LL: softmax head only, P1: per-group phases starting from
// the last group of the schedule. Batch size 1 throughout.
template <typename T>
std::vector<FineTunePhase> fine_tune(nn::Model<T>& model,
                                     const std::vector<std::vector<int>>& data,
                                     const FineTuneProtocol& protocol, Rng& rng) {
    if (data.empty()) throw EmptyCorpus();
    TrainConfig cfg;
    cfg.batch_size = 1;
    cfg.lr = protocol.lr;
    std::vector<FineTunePhase> phases;
    if (protocol.variant == ProtocolVariant::AU || protocol.variant == ProtocolVariant::LL) {
        FineTunePhase ph;
        ph.epochs = protocol.epochs;
        ph.lr = protocol.lr;
        if (protocol.variant == ProtocolVariant::AU) {
            ph.trainable = all_param_names(model.params);
        } else {
            auto names = model.head_param_names();
            ph.trainable = {names.begin(), names.end()};
        }
        phases.push_back(std::move(ph));
    } else {
        if (protocol.p1_groups.size() != protocol.p1_epochs.size() ||
            protocol.p1_groups.size() != protocol.p1_lrs.size())
            throw ProtocolError("P1 group/epoch/lr lists must have equal length");
        for (size_t i = protocol.p1_groups.size(); i > 0; --i) {
            FineTunePhase ph;
            ph.slots = protocol.p1_groups[i - 1];
            ph.epochs = protocol.p1_epochs[i - 1];
            ph.lr = protocol.p1_lrs[i - 1];
            ph.trainable = slot_params(model, ph.slots);
            phases.push_back(std::move(ph));
        }
    }
    for (auto& ph : phases) {
        cfg.lr = ph.lr;
        AdamState<T> adam(model.params, ph.lr);
        ph.history = run_training(model, data, {}, cfg, ph.epochs, ph.trainable, adam, rng,
                                  &ph.updates);
    }
    return phases;
}

}  // namespace cgr::train
