#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgr/chem/canon.hpp"
#include "cgr/chem/graph.hpp"
#include "cgr/rng.hpp"

namespace cgr::chem {

struct EmptyCenter : std::runtime_error {
    EmptyCenter() : std::runtime_error("graph has no dynamic bond or dynamic charge") {}
};

// Subgraph induced by atoms incident to a dynamic bond or carrying a dynamic
// charge, expanded by `radius` hops; keeps every bond between included atoms.
inline CgrGraph reaction_center(const CgrGraph& g, int radius = 1) {
    std::set<int> core;
    for (const auto& b : g.bonds)
        if (b.dynamic()) {
            core.insert(b.a);
            core.insert(b.b);
        }
    for (size_t i = 0; i < g.atoms.size(); ++i)
        if (g.atoms[i].dynamic_charge()) core.insert(static_cast<int>(i));
    if (core.empty()) throw EmptyCenter();

    auto adj = adjacency(g);
    std::set<int> keep = core;
    std::vector<int> frontier(core.begin(), core.end());
    for (int hop = 0; hop < radius; ++hop) {
        std::vector<int> next;
        for (int v : frontier)
            for (int e : adj[static_cast<size_t>(v)]) {
                int u = g.bonds[static_cast<size_t>(e)].other(v);
                if (keep.insert(u).second) next.push_back(u);
            }
        frontier = std::move(next);
    }

    CgrGraph sub;
    std::map<int, int> remap;
    for (int v : keep) {
        remap[v] = static_cast<int>(sub.atoms.size());
        sub.atoms.push_back(g.atoms[static_cast<size_t>(v)]);
    }
    for (const auto& b : g.bonds)
        if (remap.count(b.a) && remap.count(b.b))
            sub.bonds.push_back({remap[b.a], remap[b.b], b.before, b.after});
    return sub;
}

struct ReactionCenterKey {
    std::string canonical_form;
    uint64_t key = 0;

    bool operator==(const ReactionCenterKey& o) const { return key == o.key; }
    bool operator<(const ReactionCenterKey& o) const { return key < o.key; }
};

// Permutation-invariant key: WL refinement over (element, aromatic, charge
// pair, incident order pairs), canonical string from the sorted class
// multisets, FNV-1a of that string. Atom maps and H counts are ignored so
// isomorphic centers from different reactions collide as intended.
inline ReactionCenterKey rc_hash(const CgrGraph& sub) {
    if (sub.atoms.empty()) throw EmptyCenter();
    CanonOptions opt;
    opt.use_h = false;
    opt.use_isotope = false;
    opt.use_map = false;
    auto classes = wl_classes(sub, opt);

    std::vector<std::string> atom_parts;
    for (size_t i = 0; i < sub.atoms.size(); ++i)
        atom_parts.push_back(atom_label(sub.atoms[i], opt) + "@" + std::to_string(classes[i]));
    std::sort(atom_parts.begin(), atom_parts.end());
    std::vector<std::string> bond_parts;
    for (const auto& b : sub.bonds) {
        int ca = classes[static_cast<size_t>(b.a)];
        int cb = classes[static_cast<size_t>(b.b)];
        std::string lbl = bond_label(b);
        if (cb < ca) std::swap(ca, cb);
        bond_parts.push_back(std::to_string(ca) + lbl + std::to_string(cb));
    }
    std::sort(bond_parts.begin(), bond_parts.end());

    ReactionCenterKey k;
    for (const auto& p : atom_parts) k.canonical_form += p + ";";
    k.canonical_form += "/";
    for (const auto& p : bond_parts) k.canonical_form += p + ";";
    k.key = fnv1a64(k.canonical_form);
    return k;
}

}  // namespace cgr::chem
