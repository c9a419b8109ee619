#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cgr/chem/canon.hpp"
#include "cgr/chem/graph.hpp"

namespace cgr::chem {

namespace detail {

inline std::string charge_token(int q) {
    if (q == 0) return "0";
    std::string s(1, q > 0 ? '+' : '-');
    if (std::abs(q) > 1) s += std::to_string(std::abs(q));
    return s;
}

inline std::string atom_token(const Atom& a, bool keep_mapping) {
    std::string sym = a.elem().symbol;
    if (a.aromatic) sym[0] = static_cast<char>(std::tolower(sym[0]));
    bool bracket = a.explicit_h.has_value() || a.charge_before != 0 || a.charge_after != 0 ||
                   a.isotope.has_value() || (keep_mapping && a.map_index.has_value()) ||
                   !a.elem().organic_subset;
    if (!bracket) return sym;
    std::string s = "[";
    if (a.isotope) s += std::to_string(*a.isotope);
    s += sym;
    int h = a.explicit_h.value_or(0);
    if (h == 1)
        s += "H";
    else if (h > 1)
        s += "H" + std::to_string(h);
    if (a.charge_before != 0 || a.charge_after != 0) {
        s += charge_token(a.charge_before);
        if (a.charge_after != a.charge_before) s += ">" + charge_token(a.charge_after);
    }
    if (keep_mapping && a.map_index) s += ":" + std::to_string(*a.map_index);
    s += "]";
    return s;
}

// Bond token between two atoms; empty string when the default bond applies.
inline std::string bond_token(const Bond& b, const Atom& x, const Atom& y) {
    if (b.dynamic())
        return std::string("[") + bond_char(b.before) + ">" + bond_char(b.after) + "]";
    bool both_aromatic = x.aromatic && y.aromatic;
    switch (b.before) {
        case BondOrder::Single: return both_aromatic ? "-" : "";
        case BondOrder::Aromatic: return both_aromatic ? "" : ":";
        case BondOrder::Double: return "=";
        case BondOrder::Triple: return "#";
        default: return "";
    }
}

struct RingClosure {
    int number;
    int bond;
    bool opener;  // bond token is emitted at the opening endpoint only
};

class Writer {
public:
    Writer(const CgrGraph& g, bool keep_mapping)
        : g_(g), keep_mapping_(keep_mapping), ranks_(canonical_ranks(g)) {
        adj_ = adjacency(g);
        for (size_t v = 0; v < adj_.size(); ++v) {
            auto& lst = adj_[v];
            std::sort(lst.begin(), lst.end(), [&](int e1, int e2) {
                int u1 = g_.bonds[static_cast<size_t>(e1)].other(static_cast<int>(v));
                int u2 = g_.bonds[static_cast<size_t>(e2)].other(static_cast<int>(v));
                return ranks_[static_cast<size_t>(u1)] < ranks_[static_cast<size_t>(u2)];
            });
        }
    }

    std::string run() {
        const size_t n = g_.atoms.size();
        visited_.assign(n, false);
        ring_at_.assign(n, {});
        edge_used_.assign(g_.bonds.size(), false);
        std::vector<std::string> parts;
        // deterministic component order: emit each, then sort the strings
        for (size_t s = 0; s < n; ++s) {
            if (comp_seen_.count(static_cast<int>(s))) continue;
            int start = component_start(static_cast<int>(s));
            classify(start);
            parts.push_back(emit(start, -1));
        }
        std::sort(parts.begin(), parts.end());
        std::string out;
        for (size_t i = 0; i < parts.size(); ++i) {
            if (i) out += ".";
            out += parts[i];
        }
        return out;
    }

private:
    size_t idx(int v) const { return static_cast<size_t>(v); }

    int component_start(int seed) {
        // collect the component, mark it seen, return min-rank atom
        std::vector<int> stack{seed}, members;
        comp_seen_.insert(seed);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            members.push_back(v);
            for (int e : adj_[idx(v)]) {
                int u = g_.bonds[idx(e)].other(v);
                if (!comp_seen_.count(u)) {
                    comp_seen_.insert(u);
                    stack.push_back(u);
                }
            }
        }
        int best = members[0];
        for (int v : members)
            if (ranks_[idx(v)] < ranks_[idx(best)]) best = v;
        return best;
    }

    // Pass 1: DFS in emit order, marking tree edges and numbering ring
    // closures. Ring digits appear at both endpoints with the bond token at
    // the endpoint visited first.
    void classify(int start) {
        struct Frame {
            int atom;
            int via_edge;
            size_t next = 0;
        };
        std::vector<Frame> stack{{start, -1}};
        visited_[idx(start)] = true;
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.next >= adj_[idx(f.atom)].size()) {
                stack.pop_back();
                continue;
            }
            int e = adj_[idx(f.atom)][f.next++];
            if (e == f.via_edge || edge_used_[idx(e)]) continue;
            int u = g_.bonds[idx(e)].other(f.atom);
            if (!visited_[idx(u)]) {
                edge_used_[idx(e)] = true;
                tree_children_[f.atom].push_back(e);
                visited_[idx(u)] = true;
                stack.push_back({u, e});
            } else {
                edge_used_[idx(e)] = true;
                int num = next_ring_++;
                ring_at_[idx(u)].push_back({num, e, true});
                ring_at_[idx(f.atom)].push_back({num, e, false});
            }
        }
    }

    std::string ring_digit(int num) const {
        if (num <= 9) return std::to_string(num);
        return "%" + std::to_string(num);
    }

    std::string emit(int v, int via_edge) {
        std::string s = atom_token(g_.atoms[idx(v)], keep_mapping_);
        for (const auto& rc : ring_at_[idx(v)]) {
            const Bond& b = g_.bonds[idx(rc.bond)];
            if (rc.opener)
                s += bond_token(b, g_.atoms[idx(b.a)], g_.atoms[idx(b.b)]);
            s += ring_digit(rc.number);
        }
        auto it = tree_children_.find(v);
        if (it != tree_children_.end()) {
            const auto& children = it->second;
            for (size_t i = 0; i < children.size(); ++i) {
                int e = children[i];
                const Bond& b = g_.bonds[idx(e)];
                int u = b.other(v);
                std::string sub =
                    bond_token(b, g_.atoms[idx(b.a)], g_.atoms[idx(b.b)]) + emit(u, e);
                if (i + 1 < children.size())
                    s += "(" + sub + ")";
                else
                    s += sub;
            }
        }
        return s;
    }

    const CgrGraph& g_;
    bool keep_mapping_;
    std::vector<int> ranks_;
    std::vector<std::vector<int>> adj_;
    std::vector<bool> visited_;
    std::vector<bool> edge_used_;
    std::vector<std::vector<RingClosure>> ring_at_;
    std::map<int, std::vector<int>> tree_children_;
    std::set<int> comp_seen_;
    int next_ring_ = 1;
};

}  // namespace detail

// Deterministic canonical serialization; the result re-parses to an
// isomorphic graph.
inline std::string write_cgrsmiles(const CgrGraph& g, bool keep_mapping = true) {
    return detail::Writer(g, keep_mapping).run();
}

// Molecular SMILES of one MolGraph component set (whole graph, components
// joined with '.').
inline CgrGraph to_cgr(const MolGraph& m) {
    CgrGraph g;
    g.atoms = m.atoms;
    for (const auto& b : m.bonds) g.bonds.push_back({b.a, b.b, b.order, b.order});
    return g;
}

inline std::string write_smiles(const MolGraph& m, bool keep_mapping = false) {
    return write_cgrsmiles(to_cgr(m), keep_mapping);
}

// reactants = component SMILES of the before projection, products = of the
// after projection; both sorted. Atom maps dropped unless keep_mapping.
inline std::pair<std::vector<std::string>, std::vector<std::string>> to_reaction_smiles(
    const CgrGraph& g, bool keep_mapping = false) {
    std::pair<std::vector<std::string>, std::vector<std::string>> out;
    for (int side = 0; side < 2; ++side) {
        MolGraph m = project(g, side == 0 ? Side::Before : Side::After);
        auto comps = components(m);
        auto& dst = side == 0 ? out.first : out.second;
        for (const auto& comp : comps) {
            MolGraph sub;
            std::map<int, int> remap;
            for (int v : comp) {
                remap[v] = static_cast<int>(sub.atoms.size());
                sub.atoms.push_back(m.atoms[static_cast<size_t>(v)]);
            }
            for (const auto& b : m.bonds)
                if (remap.count(b.a) && remap.count(b.b))
                    sub.bonds.push_back({remap[b.a], remap[b.b], b.order});
            dst.push_back(write_smiles(sub, keep_mapping));
        }
        std::sort(dst.begin(), dst.end());
    }
    return out;
}

}  // namespace cgr::chem
