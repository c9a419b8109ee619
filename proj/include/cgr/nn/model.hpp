#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cgr/rng.hpp"
#include "cgr/tensor.hpp"

namespace cgr::nn {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Variant { Baseline1, Baseline2, TcnOnly, Hybrid, BiLstmWin };

inline std::string variant_name(Variant v) {
    switch (v) {
        case Variant::Baseline1: return "baseline1";
        case Variant::Baseline2: return "baseline2";
        case Variant::TcnOnly: return "tcn";
        case Variant::Hybrid: return "hybrid";
        case Variant::BiLstmWin: return "bilstm";
    }
    return "?";
}

inline Variant variant_from_name(const std::string& s) {
    for (Variant v : {Variant::Baseline1, Variant::Baseline2, Variant::TcnOnly, Variant::Hybrid,
                      Variant::BiLstmWin})
        if (variant_name(v) == s) return v;
    throw ConfigError("unknown model variant: " + s);
}

struct ModelConfig {
    Variant variant = Variant::Hybrid;
    int vocab_size = 0;
    int max_len = 156;
    int lstm_units = 512;
    int lstm_layers = 2;  // LSTM branch depth in the hybrid
    int filters = 256;
    int kernel = 2;
    std::vector<int> dilations = {1, 2, 4, 8, 16, 32};
    double dropout_p = 0.5;
    int bilstm_units = 128;
    int bilstm_layers = 2;
    int window = 80;
    int stride = 3;
    uint64_t seed = 0;

    nlohmann::json to_json() const {
        return {{"variant", variant_name(variant)}, {"vocab_size", vocab_size},
                {"max_len", max_len},               {"lstm_units", lstm_units},
                {"lstm_layers", lstm_layers},       {"filters", filters},
                {"kernel", kernel},                 {"dilations", dilations},
                {"dropout_p", dropout_p},           {"bilstm_units", bilstm_units},
                {"bilstm_layers", bilstm_layers},   {"window", window},
                {"stride", stride},                 {"seed", seed}};
    }
    static ModelConfig from_json(const nlohmann::json& j) {
        ModelConfig c;
        c.variant = variant_from_name(j.at("variant").get<std::string>());
        c.vocab_size = j.at("vocab_size");
        c.max_len = j.at("max_len");
        c.lstm_units = j.at("lstm_units");
        c.lstm_layers = j.at("lstm_layers");
        c.filters = j.at("filters");
        c.kernel = j.at("kernel");
        c.dilations = j.at("dilations").get<std::vector<int>>();
        c.dropout_p = j.at("dropout_p");
        c.bilstm_units = j.at("bilstm_units");
        c.bilstm_layers = j.at("bilstm_layers");
        c.window = j.at("window");
        c.stride = j.at("stride");
        c.seed = j.at("seed");
        return c;
    }
};

// receptive_field = 1 + (K-1) * sum(dilations)
inline int receptive_field(const std::vector<int>& dilations, int kernel) {
    int s = std::accumulate(dilations.begin(), dilations.end(), 0);
    return 1 + (kernel - 1) * s;
}

// Receptive-field growth of a dilated stack (kernel 2, dilations 2^0..2^(n-1))
// over a plain n-layer convolution stack: 2^n / (n+1).
inline double rf_advantage(int n_layers) {
    return std::pow(2.0, n_layers) / (n_layers + 1);
}

namespace detail {

template <typename T>
void fill_uniform(ad::Tensor<T>& t, double bound, Rng& rng) {
    for (auto& v : t.value()) v = static_cast<T>(rng.uniform(-bound, bound));
}

// Orthogonalize a square matrix by modified Gram-Schmidt on random normals.
template <typename T>
std::vector<T> orthogonal_square(int n, Rng& rng) {
    std::vector<double> a(static_cast<size_t>(n) * n);
    for (auto& v : a) v = rng.normal();
    for (int c = 0; c < n; ++c) {
        for (int p = 0; p < c; ++p) {
            double dot = 0;
            for (int r = 0; r < n; ++r)
                dot += a[static_cast<size_t>(r) * n + c] * a[static_cast<size_t>(r) * n + p];
            for (int r = 0; r < n; ++r)
                a[static_cast<size_t>(r) * n + c] -= dot * a[static_cast<size_t>(r) * n + p];
        }
        double norm = 0;
        for (int r = 0; r < n; ++r) {
            double v = a[static_cast<size_t>(r) * n + c];
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm < 1e-12) norm = 1.0;
        for (int r = 0; r < n; ++r) a[static_cast<size_t>(r) * n + c] /= norm;
    }
    std::vector<T> out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = static_cast<T>(a[i]);
    return out;
}

}  // namespace detail

// Named, ordered parameter set. Ordering is the build order and is stable
// across save/load.
template <typename T>
class ModelParams {
public:
    ad::Tensor<T>& add(const std::string& name, ad::Tensor<T> t) {
        if (index_.count(name)) throw ConfigError("duplicate parameter name: " + name);
        t.set_requires_grad(true);
        index_[name] = names_.size();
        names_.push_back(name);
        tensors_.push_back(std::move(t));
        return tensors_.back();
    }
    ad::Tensor<T>& get(const std::string& name) {
        auto it = index_.find(name);
        if (it == index_.end()) throw ConfigError("no such parameter: " + name);
        return tensors_[it->second];
    }
    const ad::Tensor<T>& get(const std::string& name) const {
        return const_cast<ModelParams*>(this)->get(name);
    }
    bool has(const std::string& name) const { return index_.count(name) > 0; }
    size_t count() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    ad::Tensor<T>& at(size_t i) { return tensors_[i]; }
    const ad::Tensor<T>& at(size_t i) const { return tensors_[i]; }

    size_t scalar_count() const {
        size_t n = 0;
        for (const auto& t : tensors_) n += t.size();
        return n;
    }
    void zero_grad() {
        for (auto& t : tensors_) t.zero_grad();
    }

private:
    std::vector<std::string> names_;
    std::vector<ad::Tensor<T>> tensors_;
    std::map<std::string, size_t> index_;
};

// Standard LSTM recurrence, gate order i,f,g,o. x: [T, Cin] -> [T, H].
template <typename T>
ad::Tensor<T> lstm_forward(ad::Tape<T>* tp, const ad::Tensor<T>& x, const ad::Tensor<T>& wx,
                           const ad::Tensor<T>& wh, const ad::Tensor<T>& b) {
    const int len = x.dim(0);
    const int hidden = wh.dim(0);
    ad::detail::check(wx.dim(0) == x.dim(1) && wx.dim(1) == 4 * hidden && wh.dim(1) == 4 * hidden &&
                          b.dim(0) == 4 * hidden,
                      "lstm_forward: parameter shapes inconsistent with input");
    ad::Tensor<T> xp = ad::add_row(tp, ad::matmul(tp, x, wx), b);  // [T, 4H]
    ad::Tensor<T> h(ad::Shape{1, hidden});
    ad::Tensor<T> c(ad::Shape{1, hidden});
    std::vector<ad::Tensor<T>> outputs;
    outputs.reserve(static_cast<size_t>(len));
    for (int t = 0; t < len; ++t) {
        ad::Tensor<T> gates = ad::add(tp, ad::select_row(tp, xp, t), ad::matmul(tp, h, wh));
        ad::Tensor<T> gi = ad::sigmoid(tp, ad::slice_cols(tp, gates, 0, hidden));
        ad::Tensor<T> gf = ad::sigmoid(tp, ad::slice_cols(tp, gates, hidden, 2 * hidden));
        ad::Tensor<T> gg = ad::tanh_(tp, ad::slice_cols(tp, gates, 2 * hidden, 3 * hidden));
        ad::Tensor<T> go = ad::sigmoid(tp, ad::slice_cols(tp, gates, 3 * hidden, 4 * hidden));
        c = ad::add(tp, ad::hadamard(tp, gf, c), ad::hadamard(tp, gi, gg));
        h = ad::hadamard(tp, go, ad::tanh_(tp, c));
        outputs.push_back(h);
    }
    return ad::stack_rows(tp, outputs);
}

// One TCN residual block: dilated causal convolutions (activation + dropout
// after each), residual through a 1x1 convolution when channel widths differ.
template <typename T>
ad::Tensor<T> tcn_forward(ad::Tape<T>* tp, const ad::Tensor<T>& x, ModelParams<T>& params,
                          const ModelConfig& cfg, bool train, Rng& rng) {
    ad::Tensor<T> cur = x;
    for (size_t j = 0; j < cfg.dilations.size(); ++j) {
        const std::string base = "tcn.conv" + std::to_string(j);
        cur = ad::causal_dilated_conv1d(tp, cur, params.get(base + ".w"), params.get(base + ".b"),
                                        cfg.dilations[j]);
        cur = ad::relu(tp, cur);
        cur = ad::dropout(tp, cur, cfg.dropout_p, train, rng);
    }
    ad::Tensor<T> res = x;
    if (params.has("tcn.match.w"))
        res = ad::causal_dilated_conv1d(tp, x, params.get("tcn.match.w"),
                                        params.get("tcn.match.b"), 1);
    return ad::relu(tp, ad::add(tp, cur, res));
}

template <typename T>
class Model {
public:
    ModelConfig config;
    ModelParams<T> params;

    // Autoregressive variants: x is a one-hot [T, V] sequence, returns
    // next-token logits [T, V].
    ad::Tensor<T> forward(ad::Tape<T>* tp, const ad::Tensor<T>& x, bool train, Rng& rng) {
        switch (config.variant) {
            case Variant::Baseline1:
            case Variant::Baseline2: {
                int n = config.variant == Variant::Baseline1 ? 2 : 3;
                ad::Tensor<T> h = x;
                for (int i = 1; i <= n; ++i) {
                    const std::string base = "lstm" + std::to_string(i);
                    h = lstm_forward(tp, h, params.get(base + ".wx"), params.get(base + ".wh"),
                                     params.get(base + ".b"));
                    h = ad::dropout(tp, h, config.dropout_p, train, rng);
                }
                return head(tp, h);
            }
            case Variant::TcnOnly:
                return head(tp, tcn_forward(tp, x, params, config, train, rng));
            case Variant::Hybrid: {
                ad::Tensor<T> h = x;
                for (int i = 1; i <= config.lstm_layers; ++i) {
                    const std::string base = "lstm" + std::to_string(i);
                    h = lstm_forward(tp, h, params.get(base + ".wx"), params.get(base + ".wh"),
                                     params.get(base + ".b"));
                    h = ad::dropout(tp, h, config.dropout_p, train, rng);
                }
                ad::Tensor<T> t = tcn_forward(tp, x, params, config, train, rng);
                return head(tp, ad::concat_channels(tp, h, t));
            }
            case Variant::BiLstmWin:
                throw ConfigError("bilstm variant uses window_forward");
        }
        throw ConfigError("unreachable");
    }

    // Windowed classifier: one-hot window [W, V] -> next-character logits
    // [1, V]. The character after the window is the training target.
    ad::Tensor<T> window_forward(ad::Tape<T>* tp, const ad::Tensor<T>& x, bool train, Rng& rng) {
        if (x.dim(0) != config.window)
            throw ad::ShapeMismatch("window length must be exactly " +
                                    std::to_string(config.window));
        const int hidden = config.bilstm_units;
        ad::Tensor<T> seq = x;
        for (int i = 1; i <= config.bilstm_layers; ++i) {
            const std::string fw = "bilstm" + std::to_string(i) + ".fw";
            const std::string bw = "bilstm" + std::to_string(i) + ".bw";
            ad::Tensor<T> f = lstm_forward(tp, seq, params.get(fw + ".wx"), params.get(fw + ".wh"),
                                           params.get(fw + ".b"));
            ad::Tensor<T> rx = ad::reverse_time(tp, seq);
            ad::Tensor<T> bseq = lstm_forward(tp, rx, params.get(bw + ".wx"),
                                              params.get(bw + ".wh"), params.get(bw + ".b"));
            seq = ad::concat_channels(tp, f, ad::reverse_time(tp, bseq));
            seq = ad::dropout(tp, seq, config.dropout_p, train, rng);
        }
        // forward direction: last position; backward direction: the row that
        // saw the whole window (position 0 after un-reversing)
        ad::Tensor<T> ffeat =
            ad::slice_cols(tp, ad::select_row(tp, seq, config.window - 1), 0, hidden);
        ad::Tensor<T> bfeat =
            ad::slice_cols(tp, ad::select_row(tp, seq, 0), hidden, 2 * hidden);
        return head(tp, ad::concat_channels(tp, ffeat, bfeat));
    }

    // Parameter-name groups per protocol slot. Slot 4 of the hybrid is the
    // parameterless concatenation stage.
    std::vector<std::pair<int, std::vector<std::string>>> layer_slots() const {
        std::vector<std::pair<int, std::vector<std::string>>> slots;
        auto lstm_names = [](int i) {
            std::string b = "lstm" + std::to_string(i);
            return std::vector<std::string>{b + ".wx", b + ".wh", b + ".b"};
        };
        auto tcn_names = [this]() {
            std::vector<std::string> v;
            for (size_t j = 0; j < config.dilations.size(); ++j) {
                v.push_back("tcn.conv" + std::to_string(j) + ".w");
                v.push_back("tcn.conv" + std::to_string(j) + ".b");
            }
            if (params.has("tcn.match.w")) {
                v.push_back("tcn.match.w");
                v.push_back("tcn.match.b");
            }
            return v;
        };
        switch (config.variant) {
            case Variant::Baseline1:
            case Variant::Baseline2: {
                int n = config.variant == Variant::Baseline1 ? 2 : 3;
                for (int i = 1; i <= n; ++i) slots.push_back({i, lstm_names(i)});
                slots.push_back({n + 1, {"head.w", "head.b"}});
                break;
            }
            case Variant::TcnOnly:
                slots.push_back({1, tcn_names()});
                slots.push_back({2, {"head.w", "head.b"}});
                break;
            case Variant::Hybrid:
                for (int i = 1; i <= config.lstm_layers; ++i) slots.push_back({i, lstm_names(i)});
                slots.push_back({config.lstm_layers + 1, tcn_names()});
                slots.push_back({config.lstm_layers + 2, {}});  // concat
                slots.push_back({config.lstm_layers + 3, {"head.w", "head.b"}});
                break;
            case Variant::BiLstmWin: {
                for (int i = 1; i <= config.bilstm_layers; ++i) {
                    std::vector<std::string> v;
                    for (const char* dir : {".fw", ".bw"}) {
                        std::string b = "bilstm" + std::to_string(i) + dir;
                        v.insert(v.end(), {b + ".wx", b + ".wh", b + ".b"});
                    }
                    slots.push_back({i, v});
                }
                slots.push_back({config.bilstm_layers + 1, {"head.w", "head.b"}});
                break;
            }
        }
        return slots;
    }

    std::vector<std::string> head_param_names() const { return {"head.w", "head.b"}; }

private:
    ad::Tensor<T> head(ad::Tape<T>* tp, const ad::Tensor<T>& h) {
        return ad::add_row(tp, ad::matmul(tp, h, params.get("head.w")), params.get("head.b"));
    }
};

namespace detail {

template <typename T>
void add_lstm(ModelParams<T>& p, const std::string& base, int cin, int hidden, Rng& rng) {
    ad::Tensor<T> wx(ad::Shape{cin, 4 * hidden});
    fill_uniform(wx, std::sqrt(1.0 / cin), rng);
    p.add(base + ".wx", std::move(wx));
    // block-orthogonal recurrent matrix, one square block per gate
    ad::Tensor<T> wh(ad::Shape{hidden, 4 * hidden});
    for (int gate = 0; gate < 4; ++gate) {
        auto q = orthogonal_square<T>(hidden, rng);
        for (int r = 0; r < hidden; ++r)
            for (int c = 0; c < hidden; ++c)
                wh.at2(r, gate * hidden + c) = q[static_cast<size_t>(r) * hidden + c];
    }
    p.add(base + ".wh", std::move(wh));
    ad::Tensor<T> b(ad::Shape{4 * hidden});
    for (int c = hidden; c < 2 * hidden; ++c) b.at(c) = T(1);  // forget-gate bias
    p.add(base + ".b", std::move(b));
}

template <typename T>
void add_conv(ModelParams<T>& p, const std::string& base, int k, int cin, int cout, Rng& rng) {
    ad::Tensor<T> w(ad::Shape{k, cin, cout});
    fill_uniform(w, std::sqrt(1.0 / (k * cin)), rng);
    p.add(base + ".w", std::move(w));
    p.add(base + ".b", ad::Tensor<T>(ad::Shape{cout}));
}

template <typename T>
void add_dense(ModelParams<T>& p, const std::string& base, int cin, int cout, Rng& rng) {
    ad::Tensor<T> w(ad::Shape{cin, cout});
    fill_uniform(w, std::sqrt(1.0 / cin), rng);
    p.add(base + ".w", std::move(w));
    p.add(base + ".b", ad::Tensor<T>(ad::Shape{cout}));
}

template <typename T>
void add_tcn(ModelParams<T>& p, const ModelConfig& cfg, int cin, Rng& rng) {
    int cur = cin;
    for (size_t j = 0; j < cfg.dilations.size(); ++j) {
        add_conv(p, "tcn.conv" + std::to_string(j), cfg.kernel, cur, cfg.filters, rng);
        cur = cfg.filters;
    }
    if (cin != cfg.filters) add_conv(p, "tcn.match", 1, cin, cfg.filters, rng);
}

}  // namespace detail

// Deterministic construction from (config, seed).
template <typename T>
Model<T> build_model(const ModelConfig& config) {
    if (config.vocab_size < 2) throw ConfigError("vocab_size must be >= 2");
    if (config.kernel < 1 || config.dilations.empty())
        throw ConfigError("kernel and dilations must be non-empty/positive");
    Model<T> m;
    m.config = config;
    Rng rng(config.seed, /*stream=*/0x1017);
    const int v = config.vocab_size;
    switch (config.variant) {
        case Variant::Baseline1:
        case Variant::Baseline2: {
            int n = config.variant == Variant::Baseline1 ? 2 : 3;
            int cin = v;
            for (int i = 1; i <= n; ++i) {
                detail::add_lstm(m.params, "lstm" + std::to_string(i), cin, config.lstm_units, rng);
                cin = config.lstm_units;
            }
            detail::add_dense(m.params, "head", config.lstm_units, v, rng);
            break;
        }
        case Variant::TcnOnly:
            detail::add_tcn(m.params, config, v, rng);
            detail::add_dense(m.params, "head", config.filters, v, rng);
            break;
        case Variant::Hybrid: {
            int cin = v;
            for (int i = 1; i <= config.lstm_layers; ++i) {
                detail::add_lstm(m.params, "lstm" + std::to_string(i), cin, config.lstm_units, rng);
                cin = config.lstm_units;
            }
            detail::add_tcn(m.params, config, v, rng);
            detail::add_dense(m.params, "head", config.lstm_units + config.filters, v, rng);
            break;
        }
        case Variant::BiLstmWin: {
            int cin = v;
            for (int i = 1; i <= config.bilstm_layers; ++i) {
                std::string b = "bilstm" + std::to_string(i);
                detail::add_lstm(m.params, b + ".fw", cin, config.bilstm_units, rng);
                detail::add_lstm(m.params, b + ".bw", cin, config.bilstm_units, rng);
                cin = 2 * config.bilstm_units;
            }
            detail::add_dense(m.params, "head", 2 * config.bilstm_units, v, rng);
            break;
        }
    }
    return m;
}

// One-hot encode a token sequence as [T, V].
template <typename T>
ad::Tensor<T> one_hot(const std::vector<int>& tokens, int vocab_size) {
    ad::Tensor<T> x(ad::Shape{static_cast<int>(tokens.size()), vocab_size});
    for (size_t t = 0; t < tokens.size(); ++t) x.at2(static_cast<int>(t), tokens[t]) = T(1);
    return x;
}

// Number of (window, target) samples a corpus of the given length yields.
inline int window_count(int corpus_len, int window, int stride) {
    if (corpus_len < window + 1) return 0;
    return (corpus_len - window - 1) / stride + 1;
}

}  // namespace cgr::nn
