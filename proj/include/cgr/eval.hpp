#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgr/chem.hpp"
#include "cgr/rng.hpp"

namespace cgr::eval {

struct ModeError : std::runtime_error {
    explicit ModeError(const std::string& what) : std::runtime_error(what) {}
};

struct ValiditySummary {
    size_t n_input = 0;
    std::vector<std::string> valid;
    std::optional<double> valid_pct;  // absent for empty input
};

inline ValiditySummary compute_validity(const std::vector<std::string>& strings,
                                        size_t max_len = chem::kDefaultMaxLen) {
    ValiditySummary s;
    s.n_input = strings.size();
    for (const auto& str : strings)
        if (chem::validate_text(str, max_len).valid()) s.valid.push_back(str);
    if (s.n_input > 0)
        s.valid_pct = 100.0 * static_cast<double>(s.valid.size()) / static_cast<double>(s.n_input);
    return s;
}

// Canonical form = write(parse(s)); strings equal up to atom reordering
// count once. Denominator is the valid set.
inline double compute_uniqueness(const std::vector<std::string>& valid_strings) {
    if (valid_strings.empty()) return 0.0;
    std::set<std::string> canon;
    for (const auto& s : valid_strings)
        canon.insert(chem::write_cgrsmiles(chem::parse_cgrsmiles(s)));
    return 100.0 * static_cast<double>(canon.size()) / static_cast<double>(valid_strings.size());
}

inline std::set<uint64_t> rc_key_set(const std::vector<std::string>& strings, int radius) {
    std::set<uint64_t> keys;
    for (const auto& s : strings) {
        try {
            chem::CgrGraph g = chem::parse_cgrsmiles(s);
            keys.insert(chem::rc_hash(chem::reaction_center(g, radius)).key);
        } catch (const chem::EmptyCenter&) {
            // static CGR, no reaction center
        }
    }
    return keys;
}

// distinct = |{rc keys over generated}|, novel = |generated \ reference|
inline std::pair<size_t, size_t> rc_stats(const std::vector<std::string>& generated_valid,
                                          const std::set<uint64_t>& reference_keys,
                                          int radius = 1) {
    auto keys = rc_key_set(generated_valid, radius);
    size_t novel = 0;
    for (uint64_t k : keys) novel += reference_keys.count(k) ? 0 : 1;
    return {keys.size(), novel};
}

inline double oxidation_fraction(const std::vector<std::string>& valid_strings) {
    if (valid_strings.empty()) return 0.0;
    size_t n = 0;
    for (const auto& s : valid_strings) {
        chem::CgrGraph g = chem::parse_cgrsmiles(s);
        chem::MolGraph before = chem::project(g, chem::Side::Before);
        auto comps = chem::components(before);
        std::vector<chem::MolGraph> reactants;
        for (const auto& comp : comps) {
            chem::MolGraph sub;
            std::map<int, int> remap;
            for (int v : comp) {
                remap[v] = static_cast<int>(sub.atoms.size());
                sub.atoms.push_back(before.atoms[static_cast<size_t>(v)]);
            }
            for (const auto& b : before.bonds)
                if (remap.count(b.a) && remap.count(b.b))
                    sub.bonds.push_back({remap[b.a], remap[b.b], b.order});
            reactants.push_back(std::move(sub));
        }
        n += chem::contains_oo(reactants) ? 1 : 0;
    }
    return 100.0 * static_cast<double>(n) / static_cast<double>(valid_strings.size());
}

enum class TanimotoMode { InternalPairwise, NearestToDataset };

struct TanimotoReport {
    TanimotoMode mode = TanimotoMode::InternalPairwise;
    std::vector<double> scores;
    double mean = 0;
    std::vector<size_t> histogram;  // 20 bins of width 0.05 over [0,1]

    void finalize() {
        histogram.assign(20, 0);
        double total = 0;
        for (double s : scores) {
            total += s;
            size_t bin = std::min<size_t>(19, static_cast<size_t>(s / 0.05));
            ++histogram[bin];
        }
        mean = scores.empty() ? 0 : total / static_cast<double>(scores.size());
    }
};

// All reactant and product molecules of the valid strings, as fingerprints.
inline std::vector<chem::Fingerprint> context_fingerprints(
    const std::vector<std::string>& valid_strings) {
    std::vector<chem::Fingerprint> fps;
    for (const auto& s : valid_strings) {
        chem::CgrGraph g = chem::parse_cgrsmiles(s);
        for (chem::Side side : {chem::Side::Before, chem::Side::After}) {
            chem::MolGraph m = chem::project(g, side);
            for (const auto& comp : chem::components(m)) {
                chem::MolGraph sub;
                std::map<int, int> remap;
                for (int v : comp) {
                    remap[v] = static_cast<int>(sub.atoms.size());
                    sub.atoms.push_back(m.atoms[static_cast<size_t>(v)]);
                }
                for (const auto& b : m.bonds)
                    if (remap.count(b.a) && remap.count(b.b))
                        sub.bonds.push_back({remap[b.a], remap[b.b], b.order});
                if (!sub.atoms.empty()) fps.push_back(chem::fingerprint(sub));
            }
        }
    }
    return fps;
}

// internal_pairwise: Tanimoto over random molecule pairs within the
// generated set (seeded, capped); nearest_to_dataset: per generated molecule,
// the maximum similarity against the dataset molecules.
inline TanimotoReport in_context_tanimoto(
    const std::vector<std::string>& generated_valid, TanimotoMode mode,
    const std::vector<std::string>* dataset = nullptr, size_t sample_cap = 1000000,
    uint64_t seed = 0) {
    TanimotoReport r;
    r.mode = mode;
    auto fps = context_fingerprints(generated_valid);
    if (mode == TanimotoMode::InternalPairwise) {
        size_t n = fps.size();
        if (n >= 2) {
            size_t total_pairs = n * (n - 1) / 2;
            if (total_pairs <= sample_cap) {
                for (size_t i = 0; i < n; ++i)
                    for (size_t j = i + 1; j < n; ++j)
                        r.scores.push_back(chem::tanimoto(fps[i], fps[j]));
            } else {
                Rng rng(seed, 0x7A11);
                for (size_t k = 0; k < sample_cap; ++k) {
                    size_t i = rng.below(n);
                    size_t j = rng.below(n - 1);
                    if (j >= i) ++j;
                    r.scores.push_back(chem::tanimoto(fps[i], fps[j]));
                }
            }
        }
    } else {
        if (!dataset) throw ModeError("nearest_to_dataset mode requires a dataset");
        auto ref = context_fingerprints(*dataset);
        if (ref.empty()) throw ModeError("dataset contains no molecules");
        for (const auto& f : fps) {
            double best = 0;
            for (const auto& g : ref) best = std::max(best, chem::tanimoto(f, g));
            r.scores.push_back(best);
        }
    }
    r.finalize();
    return r;
}

struct GenerationReport {
    size_t n_generated = 0;
    size_t n_valid = 0;
    std::optional<double> valid_pct;
    std::optional<double> unique_pct;
    size_t n_rc_distinct = 0;
    size_t n_rc_novel = 0;
    double oxidation_pct = 0;
    double copy_error_pct = 0;  // reactant side identical to product side
    std::map<int, size_t> h_balance_hist;
};

inline GenerationReport evaluate_generation(const std::vector<std::string>& generated,
                                            const std::vector<std::string>& reference,
                                            int radius = 1,
                                            size_t max_len = chem::kDefaultMaxLen) {
    GenerationReport rep;
    rep.n_generated = generated.size();
    auto vs = compute_validity(generated, max_len);
    rep.n_valid = vs.valid.size();
    rep.valid_pct = vs.valid_pct;
    if (!vs.valid.empty()) rep.unique_pct = compute_uniqueness(vs.valid);
    auto ref_valid = compute_validity(reference, max_len);
    auto [distinct, novel] = rc_stats(vs.valid, rc_key_set(ref_valid.valid, radius), radius);
    rep.n_rc_distinct = distinct;
    rep.n_rc_novel = novel;
    rep.oxidation_pct = oxidation_fraction(vs.valid);
    size_t copies = 0;
    for (const auto& s : vs.valid) {
        chem::CgrGraph g = chem::parse_cgrsmiles(s);
        rep.h_balance_hist[chem::validate(g).h_balance]++;
        auto [reactants, products] = chem::to_reaction_smiles(g);
        copies += reactants == products ? 1 : 0;
    }
    rep.copy_error_pct = vs.valid.empty()
                             ? 0.0
                             : 100.0 * static_cast<double>(copies) /
                                   static_cast<double>(vs.valid.size());
    return rep;
}

// Flat key-value document, one entry per line.
inline std::string format_report(const GenerationReport& r) {
    auto num = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.4f", v);
        return std::string(buf);
    };
    std::string s;
    s += "n_generated = " + std::to_string(r.n_generated) + "\n";
    s += "n_valid = " + std::to_string(r.n_valid) + "\n";
    s += "valid_pct = " + (r.valid_pct ? num(*r.valid_pct) : "absent") + "\n";
    s += "unique_pct = " + (r.unique_pct ? num(*r.unique_pct) : "absent") + "\n";
    s += "unique_denominator = valid\n";
    s += "n_rc_distinct = " + std::to_string(r.n_rc_distinct) + "\n";
    s += "n_rc_novel = " + std::to_string(r.n_rc_novel) + "\n";
    s += "oxidation_pct = " + num(r.oxidation_pct) + "\n";
    s += "copy_error_pct = " + num(r.copy_error_pct) + "\n";
    for (const auto& [k, v] : r.h_balance_hist)
        s += "h_balance." + std::to_string(k) + " = " + std::to_string(v) + "\n";
    return s;
}

inline std::string format_tanimoto(const TanimotoReport& r) {
    auto num = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.4f", v);
        return std::string(buf);
    };
    std::string s;
    s += std::string("mode = ") +
         (r.mode == TanimotoMode::InternalPairwise ? "internal_pairwise" : "nearest_to_dataset") +
         "\n";
    s += "n_scores = " + std::to_string(r.scores.size()) + "\n";
    s += "mean = " + num(r.mean) + "\n";
    for (size_t b = 0; b < r.histogram.size(); ++b)
        s += "hist." + num(0.05 * static_cast<double>(b)) + " = " +
             std::to_string(r.histogram[b]) + "\n";
    return s;
}

}  // namespace cgr::eval
