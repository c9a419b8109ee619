#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgr/chem/elements.hpp"

namespace cgr::chem {

enum class BondOrder { None, Single, Double, Triple, Aromatic };

inline double bond_valence(BondOrder o) {
    switch (o) {
        case BondOrder::None: return 0.0;
        case BondOrder::Single: return 1.0;
        case BondOrder::Double: return 2.0;
        case BondOrder::Triple: return 3.0;
        case BondOrder::Aromatic: return 1.5;
    }
    return 0.0;
}

inline char bond_char(BondOrder o) {
    switch (o) {
        case BondOrder::None: return '.';
        case BondOrder::Single: return '-';
        case BondOrder::Double: return '=';
        case BondOrder::Triple: return '#';
        case BondOrder::Aromatic: return ':';
    }
    return '?';
}

struct Atom {
    int element = -1;  // index into element_registry()
    bool aromatic = false;
    std::optional<int> explicit_h;  // set for bracket atoms
    int charge_before = 0;
    int charge_after = 0;
    std::optional<int> isotope;
    std::optional<int> map_index;

    const Element& elem() const { return element_registry()[static_cast<size_t>(element)]; }
    bool dynamic_charge() const { return charge_before != charge_after; }
};

struct Bond {
    int a = -1;
    int b = -1;
    BondOrder before = BondOrder::None;
    BondOrder after = BondOrder::None;

    bool dynamic() const { return before != after; }
    int other(int idx) const { return idx == a ? b : a; }
};

enum class Side { Before, After };

// Condensed graph of reaction: one atom set, bonds carry (before, after)
// order pairs.
struct CgrGraph {
    std::vector<Atom> atoms;
    std::vector<Bond> bonds;
    std::string source_text;

    bool has_dynamic() const {
        for (const auto& b : bonds)
            if (b.dynamic()) return true;
        for (const auto& a : atoms)
            if (a.dynamic_charge()) return true;
        return false;
    }
};

struct MolBond {
    int a = -1;
    int b = -1;
    BondOrder order = BondOrder::Single;

    int other(int idx) const { return idx == a ? b : a; }
};

// One side of a CGR: single charge per atom, no NONE bonds.
struct MolGraph {
    std::vector<Atom> atoms;  // charge_before == charge_after holds
    std::vector<MolBond> bonds;
};

// Drop NONE bonds of the selected side; atoms keep that side's charge.
inline MolGraph project(const CgrGraph& g, Side side) {
    MolGraph m;
    m.atoms = g.atoms;
    for (auto& a : m.atoms) {
        int q = side == Side::Before ? a.charge_before : a.charge_after;
        a.charge_before = a.charge_after = q;
    }
    for (const auto& b : g.bonds) {
        BondOrder o = side == Side::Before ? b.before : b.after;
        if (o != BondOrder::None) m.bonds.push_back({b.a, b.b, o});
    }
    return m;
}

inline std::vector<std::vector<int>> adjacency(const MolGraph& m) {
    std::vector<std::vector<int>> adj(m.atoms.size());
    for (size_t i = 0; i < m.bonds.size(); ++i) {
        adj[static_cast<size_t>(m.bonds[i].a)].push_back(static_cast<int>(i));
        adj[static_cast<size_t>(m.bonds[i].b)].push_back(static_cast<int>(i));
    }
    return adj;
}

inline std::vector<std::vector<int>> adjacency(const CgrGraph& g) {
    std::vector<std::vector<int>> adj(g.atoms.size());
    for (size_t i = 0; i < g.bonds.size(); ++i) {
        adj[static_cast<size_t>(g.bonds[i].a)].push_back(static_cast<int>(i));
        adj[static_cast<size_t>(g.bonds[i].b)].push_back(static_cast<int>(i));
    }
    return adj;
}

// Connected components of a molecular graph, as lists of atom indices.
inline std::vector<std::vector<int>> components(const MolGraph& m) {
    std::vector<int> comp(m.atoms.size(), -1);
    auto adj = adjacency(m);
    std::vector<std::vector<int>> out;
    for (size_t s = 0; s < m.atoms.size(); ++s) {
        if (comp[s] != -1) continue;
        int id = static_cast<int>(out.size());
        out.emplace_back();
        std::vector<int> stack{static_cast<int>(s)};
        comp[s] = id;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            out[static_cast<size_t>(id)].push_back(v);
            for (int bi : adj[static_cast<size_t>(v)]) {
                int u = m.bonds[static_cast<size_t>(bi)].other(v);
                if (comp[static_cast<size_t>(u)] == -1) {
                    comp[static_cast<size_t>(u)] = id;
                    stack.push_back(u);
                }
            }
        }
    }
    return out;
}

}  // namespace cgr::chem
