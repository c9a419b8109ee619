#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "cgr/chem/graph.hpp"
#include "cgr/rng.hpp"

namespace cgr::chem {

namespace detail {

// One round of neighborhood refinement. ids in, refined ids out; class ids
// are assigned by sorting composite keys, so they are invariant under atom
// relabeling as long as the input ids are.
inline std::vector<int> refine_once(const std::vector<int>& ids,
                                    const std::vector<std::vector<std::pair<int, std::string>>>& nbr,
                                    int* n_classes) {
    const size_t n = ids.size();
    std::vector<std::string> keys(n);
    for (size_t i = 0; i < n; ++i) {
        std::vector<std::string> parts;
        parts.reserve(nbr[i].size());
        for (const auto& [j, edge_label] : nbr[i])
            parts.push_back(edge_label + "~" + std::to_string(ids[j]));
        std::sort(parts.begin(), parts.end());
        std::string k = std::to_string(ids[i]) + "|";
        for (const auto& p : parts) k += p + ";";
        keys[i] = std::move(k);
    }
    std::vector<std::string> uniq = keys;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<int> out(n);
    for (size_t i = 0; i < n; ++i)
        out[i] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), keys[i]) -
                                  uniq.begin());
    *n_classes = static_cast<int>(uniq.size());
    return out;
}

inline std::vector<int> assign_initial(const std::vector<std::string>& labels) {
    std::vector<std::string> uniq = labels;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<int> ids(labels.size());
    for (size_t i = 0; i < labels.size(); ++i)
        ids[i] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), labels[i]) -
                                  uniq.begin());
    return ids;
}

}  // namespace detail

struct CanonOptions {
    bool use_h = true;
    bool use_isotope = true;
    bool use_map = true;
    bool use_charge = true;
};

inline std::string atom_label(const Atom& a, const CanonOptions& opt) {
    std::string s = a.elem().symbol;
    s += a.aromatic ? ":a" : ":A";
    if (opt.use_charge)
        s += ":" + std::to_string(a.charge_before) + ">" + std::to_string(a.charge_after);
    if (opt.use_h) s += ":H" + (a.explicit_h ? std::to_string(*a.explicit_h) : std::string("?"));
    if (opt.use_isotope && a.isotope) s += ":i" + std::to_string(*a.isotope);
    if (opt.use_map && a.map_index) s += ":m" + std::to_string(*a.map_index);
    return s;
}

inline std::string bond_label(const Bond& b) {
    return std::string(1, bond_char(b.before)) + std::string(1, bond_char(b.after));
}

// Stable WL class ids (no tie-breaking); equal ids = indistinguishable by
// iterated neighborhood refinement.
inline std::vector<int> wl_classes(const CgrGraph& g, const CanonOptions& opt) {
    const size_t n = g.atoms.size();
    std::vector<std::string> labels(n);
    for (size_t i = 0; i < n; ++i) labels[i] = atom_label(g.atoms[i], opt);
    std::vector<std::vector<std::pair<int, std::string>>> nbr(n);
    for (const auto& b : g.bonds) {
        nbr[static_cast<size_t>(b.a)].push_back({b.b, bond_label(b)});
        nbr[static_cast<size_t>(b.b)].push_back({b.a, bond_label(b)});
    }
    std::vector<int> ids = detail::assign_initial(labels);
    int classes = 0;
    for (size_t round = 0; round < n + 1; ++round) {
        int next_classes = 0;
        auto next = detail::refine_once(ids, nbr, &next_classes);
        if (round > 0 && next_classes == classes) break;
        ids = std::move(next);
        classes = next_classes;
        if (classes == static_cast<int>(n)) break;
    }
    return ids;
}

// Discrete canonical ranks: WL refinement with individualization of tied
// cells. Ties that survive refinement are (in molecular practice) automorphic,
// so the choice inside a cell does not change the canonical string.
inline std::vector<int> canonical_ranks(const CgrGraph& g, const CanonOptions& opt = {}) {
    const size_t n = g.atoms.size();
    std::vector<std::string> labels(n);
    for (size_t i = 0; i < n; ++i) labels[i] = atom_label(g.atoms[i], opt);
    std::vector<std::vector<std::pair<int, std::string>>> nbr(n);
    for (const auto& b : g.bonds) {
        nbr[static_cast<size_t>(b.a)].push_back({b.b, bond_label(b)});
        nbr[static_cast<size_t>(b.b)].push_back({b.a, bond_label(b)});
    }
    std::vector<int> ids = detail::assign_initial(labels);
    int classes = 0;
    int mark = 0;
    while (true) {
        // refine to a fixed point
        while (true) {
            int next_classes = 0;
            auto next = detail::refine_once(ids, nbr, &next_classes);
            bool stable = next_classes == classes;
            ids = std::move(next);
            classes = next_classes;
            if (stable || classes == static_cast<int>(n)) break;
        }
        if (classes == static_cast<int>(n)) break;
        // individualize one member of the lowest tied class
        int target_class = -1;
        for (int c = 0; c < classes && target_class < 0; ++c) {
            int count = 0;
            for (size_t i = 0; i < n; ++i) count += ids[i] == c ? 1 : 0;
            if (count > 1) target_class = c;
        }
        for (size_t i = 0; i < n; ++i) {
            if (ids[i] == target_class) {
                ids[i] = classes + (mark++);
                break;
            }
        }
        classes = 0;  // force re-refinement
    }
    return ids;
}

}  // namespace cgr::chem
