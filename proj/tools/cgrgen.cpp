// Command-line driver: corpus ingestion, vocabulary building, training,
// fine-tuning, sampling, and evaluation as reproducible runs.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cgr/chem.hpp"
#include "cgr/corpus.hpp"
#include "cgr/eval.hpp"
#include "cgr/nn/model.hpp"
#include "cgr/sample.hpp"
#include "cgr/train/checkpoint.hpp"
#include "cgr/train/train.hpp"
#include "cgr/vocab.hpp"

namespace {

using Scalar = float;

// Every run writes its resolved settings next to its main output, so the run
// can be reproduced from the file alone.
void write_run_config(const std::string& output_path,
                      const std::map<std::string, std::string>& kv) {
    std::ofstream f(output_path + ".runconfig");
    for (const auto& [k, v] : kv) f << k << " = " << v << "\n";
}

std::vector<std::vector<int>> encode_corpus(const std::vector<std::string>& lines,
                                            const cgr::Vocabulary& vocab) {
    std::vector<std::vector<int>> out;
    out.reserve(lines.size());
    for (size_t i = 0; i < lines.size(); ++i) out.push_back(vocab.encode(lines[i], i + 1));
    return out;
}

int cmd_vocab(const std::string& data, const std::string& out, int max_len) {
    cgr::Corpus corpus = cgr::read_corpus(data, static_cast<size_t>(max_len));
    if (corpus.lines.empty()) throw cgr::IoError("corpus is empty: " + data);
    cgr::Vocabulary vocab = cgr::Vocabulary::build(corpus.lines);
    vocab.save(out);
    std::cout << "tokens: " << vocab.size() << ", lines: " << corpus.lines.size()
              << ", skipped (too long): " << corpus.skipped_too_long << "\n";
    write_run_config(out, {{"command", "vocab"},
                           {"data", data},
                           {"max_len", std::to_string(max_len)},
                           {"lines", std::to_string(corpus.lines.size())},
                           {"skipped_too_long", std::to_string(corpus.skipped_too_long)}});
    return 0;
}

int cmd_train(const std::string& data, const std::string& vocab_path, const std::string& ckpt,
              const std::string& variant, int epochs, int batch, double lr, double split,
              uint64_t seed, int max_len, int lstm_units, int filters,
              const std::vector<int>& dilations) {
    cgr::Corpus corpus = cgr::read_corpus(data, static_cast<size_t>(max_len));
    if (corpus.skipped_too_long)
        std::cerr << "skipped " << corpus.skipped_too_long << " lines over " << max_len
                  << " characters\n";
    cgr::Vocabulary vocab = cgr::Vocabulary::load(vocab_path);
    auto encoded = encode_corpus(corpus.lines, vocab);
    auto [train_set, test_set] = cgr::train::split_dataset(encoded, split, seed);

    cgr::nn::ModelConfig mc;
    mc.variant = cgr::nn::variant_from_name(variant);
    mc.vocab_size = vocab.size();
    mc.max_len = max_len;
    mc.lstm_units = lstm_units;
    mc.filters = filters;
    if (!dilations.empty()) mc.dilations = dilations;
    mc.seed = seed;
    cgr::nn::Model<Scalar> model = cgr::nn::build_model<Scalar>(mc);

    cgr::train::TrainConfig tc;
    tc.lr = lr;
    tc.epochs = epochs;
    tc.batch_size = batch;
    tc.split = split;
    tc.seed = seed;
    cgr::Rng rng(seed, 0x7EA1);
    auto history = cgr::train::train_epochs(model, train_set, test_set, tc, rng);
    for (size_t e = 0; e < history.size(); ++e)
        std::cout << "epoch " << (e + 1) << ": train " << history[e].train_loss << ", test "
                  << history[e].test_loss << "\n";
    cgr::train::save_checkpoint(model, vocab, ckpt);
    write_run_config(ckpt, {{"command", "train"},
                            {"data", data},
                            {"vocab", vocab_path},
                            {"variant", variant},
                            {"epochs", std::to_string(epochs)},
                            {"batch", std::to_string(batch)},
                            {"lr", std::to_string(lr)},
                            {"split", std::to_string(split)},
                            {"seed", std::to_string(seed)},
                            {"max_len", std::to_string(max_len)},
                            {"lstm_units", std::to_string(lstm_units)},
                            {"filters", std::to_string(filters)},
                            {"skipped_too_long", std::to_string(corpus.skipped_too_long)}});
    return 0;
}

int cmd_finetune(const std::string& ckpt, const std::string& data, const std::string& protocol,
                 const std::string& out, int epochs, uint64_t seed) {
    auto [model, vocab] = cgr::train::load_checkpoint<Scalar>(ckpt);
    cgr::Corpus corpus = cgr::read_corpus(data, static_cast<size_t>(model.config.max_len));
    auto encoded = encode_corpus(corpus.lines, vocab);

    cgr::train::FineTuneProtocol proto;
    proto.variant = cgr::train::protocol_from_name(protocol);
    proto.epochs = epochs;
    cgr::Rng rng(seed, 0xF17E);
    auto phases = cgr::train::fine_tune(model, encoded, proto, rng);
    for (const auto& ph : phases) {
        std::cout << "phase: epochs " << ph.epochs << ", lr " << ph.lr << ", updates "
                  << ph.updates << ", final loss "
                  << (ph.history.empty() ? 0.0 : ph.history.back().train_loss) << "\n";
    }
    cgr::train::save_checkpoint(model, vocab, out);
    write_run_config(out, {{"command", "finetune"},
                           {"ckpt", ckpt},
                           {"data", data},
                           {"protocol", protocol},
                           {"epochs", std::to_string(epochs)},
                           {"seed", std::to_string(seed)}});
    return 0;
}

int cmd_sample(const std::string& ckpt, const std::string& out, int count, double temperature,
               int max_len, uint64_t seed) {
    auto [model, vocab] = cgr::train::load_checkpoint<Scalar>(ckpt);
    cgr::sample::SamplerConfig sc;
    sc.count = count;
    sc.temperature = temperature;
    sc.max_len = max_len;
    sc.seed = seed;
    auto strings = cgr::sample::generate(model, vocab, sc);
    if (out.empty()) {
        for (const auto& s : strings) std::cout << s << "\n";
    } else {
        cgr::write_lines(out, strings);
        write_run_config(out, {{"command", "sample"},
                               {"ckpt", ckpt},
                               {"n", std::to_string(count)},
                               {"T", std::to_string(temperature)},
                               {"max_len", std::to_string(max_len)},
                               {"seed", std::to_string(seed)}});
    }
    return 0;
}

int cmd_eval(const std::string& generated, const std::string& data, const std::string& report,
             int radius, int max_len) {
    cgr::Corpus gen = cgr::read_corpus(generated, static_cast<size_t>(max_len));
    std::vector<std::string> reference;
    if (!data.empty()) reference = cgr::read_corpus(data, static_cast<size_t>(max_len)).lines;
    auto rep = cgr::eval::evaluate_generation(gen.lines, reference, radius,
                                              static_cast<size_t>(max_len));
    std::string text = cgr::eval::format_report(rep);
    auto valid = cgr::eval::compute_validity(gen.lines, static_cast<size_t>(max_len)).valid;
    if (!valid.empty()) {
        auto internal = cgr::eval::in_context_tanimoto(
            valid, cgr::eval::TanimotoMode::InternalPairwise);
        text += "tanimoto.internal.mean = " + std::to_string(internal.mean) + "\n";
        if (!reference.empty()) {
            auto nearest = cgr::eval::in_context_tanimoto(
                valid, cgr::eval::TanimotoMode::NearestToDataset, &reference);
            text += "tanimoto.nearest.mean = " + std::to_string(nearest.mean) + "\n";
        }
    }
    if (report.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(report);
        if (!f) throw cgr::IoError("cannot write " + report);
        f << text;
        write_run_config(report, {{"command", "eval"},
                                  {"generated", generated},
                                  {"data", data},
                                  {"radius", std::to_string(radius)},
                                  {"max_len", std::to_string(max_len)}});
    }
    return 0;
}

int cmd_validate(const std::string& data, const std::string& report, int max_len) {
    cgr::Corpus corpus = cgr::read_corpus(data, static_cast<size_t>(max_len));
    size_t valid = 0, parse_fail = 0, valence_fail = 0, aromatic_fail = 0;
    std::string details;
    for (const auto& s : corpus.lines) {
        auto r = cgr::chem::validate_text(s, static_cast<size_t>(max_len));
        if (r.valid()) {
            ++valid;
            continue;
        }
        if (!r.parse_ok) ++parse_fail;
        if (r.parse_ok && (!r.valence_ok_before || !r.valence_ok_after)) ++valence_fail;
        if (r.parse_ok && !r.aromatic_ok) ++aromatic_fail;
        for (const auto& e : r.errors) details += s + ": " + e + "\n";
    }
    std::string text;
    text += "n_lines = " + std::to_string(corpus.lines.size()) + "\n";
    text += "n_valid = " + std::to_string(valid) + "\n";
    text += "n_parse_fail = " + std::to_string(parse_fail) + "\n";
    text += "n_valence_fail = " + std::to_string(valence_fail) + "\n";
    text += "n_aromatic_fail = " + std::to_string(aromatic_fail) + "\n";
    text += "skipped_too_long = " + std::to_string(corpus.skipped_too_long) + "\n";
    text += details;
    if (report.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(report);
        if (!f) throw cgr::IoError("cannot write " + report);
        f << text;
        write_run_config(report, {{"command", "validate"},
                                  {"data", data},
                                  {"max_len", std::to_string(max_len)}});
    }
    return 0;
}

int cmd_rc(const std::string& data, const std::string& report, int radius, int max_len) {
    cgr::Corpus corpus = cgr::read_corpus(data, static_cast<size_t>(max_len));
    auto valid = cgr::eval::compute_validity(corpus.lines, static_cast<size_t>(max_len)).valid;
    auto keys = cgr::eval::rc_key_set(valid, radius);
    std::string text;
    text += "n_lines = " + std::to_string(corpus.lines.size()) + "\n";
    text += "n_valid = " + std::to_string(valid.size()) + "\n";
    text += "radius = " + std::to_string(radius) + "\n";
    text += "n_rc_distinct = " + std::to_string(keys.size()) + "\n";
    if (report.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(report);
        if (!f) throw cgr::IoError("cannot write " + report);
        f << text;
        write_run_config(report, {{"command", "rc"},
                                  {"data", data},
                                  {"radius", std::to_string(radius)},
                                  {"max_len", std::to_string(max_len)}});
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CGRSmiles generative modelling toolkit"};
    app.require_subcommand(1);

    std::string data, vocab_path, ckpt, out, variant = "hybrid", protocol = "AU";
    std::string generated, report;
    int epochs = 50, batch = 64, max_len = 156, count = 30000, radius = 1, ft_epochs = 10;
    int lstm_units = 512, filters = 256;
    double lr = 1e-3, split = 0.8, temperature = 0.7;
    uint64_t seed = 0;
    std::vector<int> dilations;

    auto* sv = app.add_subcommand("vocab", "build a vocabulary from a corpus");
    sv->add_option("--data", data, "corpus file")->required();
    sv->add_option("--out", out, "vocabulary output path")->required();
    sv->add_option("--max-len", max_len, "maximum string length");

    auto* st = app.add_subcommand("train", "train a model from scratch");
    st->add_option("--data", data)->required();
    st->add_option("--vocab", vocab_path)->required();
    st->add_option("--ckpt", ckpt, "checkpoint output path")->required();
    st->add_option("--variant", variant, "baseline1|baseline2|tcn|hybrid|bilstm");
    st->add_option("--epochs", epochs);
    st->add_option("--batch", batch);
    st->add_option("--lr", lr);
    st->add_option("--split", split);
    st->add_option("--seed", seed);
    st->add_option("--max-len", max_len);
    st->add_option("--lstm-units", lstm_units);
    st->add_option("--filters", filters);
    st->add_option("--dilations", dilations, "dilation vector");

    auto* sf = app.add_subcommand("finetune", "fine-tune a checkpoint");
    sf->add_option("--ckpt", ckpt)->required();
    sf->add_option("--data", data)->required();
    sf->add_option("--protocol", protocol, "AU|LL|P1")->required();
    sf->add_option("--out", out)->required();
    sf->add_option("--epochs", ft_epochs);
    sf->add_option("--seed", seed);

    auto* ss = app.add_subcommand("sample", "generate strings from a checkpoint");
    ss->add_option("--ckpt", ckpt)->required();
    ss->add_option("-n", count, "number of strings");
    ss->add_option("-T", temperature, "sampling temperature");
    ss->add_option("--max-len", max_len);
    ss->add_option("--seed", seed);
    ss->add_option("--out", out, "output file (stdout if omitted)");

    auto* se = app.add_subcommand("eval", "evaluate a generated batch");
    se->add_option("--generated", generated)->required();
    se->add_option("--data", data, "reference corpus for novelty");
    se->add_option("--report", report, "report file (stdout if omitted)");
    se->add_option("--radius", radius);
    se->add_option("--max-len", max_len);

    auto* sl = app.add_subcommand("validate", "chemical validity report for a corpus");
    sl->add_option("--data", data)->required();
    sl->add_option("--report", report);
    sl->add_option("--max-len", max_len);

    auto* sr = app.add_subcommand("rc", "reaction-center statistics for a corpus");
    sr->add_option("--data", data)->required();
    sr->add_option("--report", report);
    sr->add_option("--radius", radius);
    sr->add_option("--max-len", max_len);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sv->parsed()) return cmd_vocab(data, out, max_len);
        if (st->parsed())
            return cmd_train(data, vocab_path, ckpt, variant, epochs, batch, lr, split, seed,
                             max_len, lstm_units, filters, dilations);
        if (sf->parsed()) return cmd_finetune(ckpt, data, protocol, out, ft_epochs, seed);
        if (ss->parsed()) return cmd_sample(ckpt, out, count, temperature, max_len, seed);
        if (se->parsed()) return cmd_eval(generated, data, report, radius, max_len);
        if (sl->parsed()) return cmd_validate(data, report, max_len);
        if (sr->parsed()) return cmd_rc(data, report, radius, max_len);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
