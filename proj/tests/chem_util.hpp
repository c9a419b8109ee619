#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgr/chem.hpp"
#include "cgr/rng.hpp"

namespace test_util {

inline std::vector<std::string> load_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] != '#') out.push_back(line);
    }
    return out;
}

inline bool same_atom(const cgr::chem::Atom& a, const cgr::chem::Atom& b) {
    return a.element == b.element && a.aromatic == b.aromatic && a.explicit_h == b.explicit_h &&
           a.charge_before == b.charge_before && a.charge_after == b.charge_after &&
           a.isotope == b.isotope && a.map_index == b.map_index;
}

// Brute-force backtracking isomorphism check; fine for corpus-sized graphs.
inline bool isomorphic(const cgr::chem::CgrGraph& g, const cgr::chem::CgrGraph& h) {
    const size_t n = g.atoms.size();
    if (h.atoms.size() != n || h.bonds.size() != g.bonds.size()) return false;

    using Key = std::pair<cgr::chem::BondOrder, cgr::chem::BondOrder>;
    std::map<std::pair<int, int>, Key> gb, hb;
    for (const auto& b : g.bonds)
        gb[std::minmax(b.a, b.b)] = {b.before, b.after};
    for (const auto& b : h.bonds)
        hb[std::minmax(b.a, b.b)] = {b.before, b.after};

    auto g_adj = cgr::chem::adjacency(g);
    std::vector<int> map_gh(n, -1), used(n, 0);

    std::function<bool(size_t)> place = [&](size_t v) -> bool {
        if (v == n) {
            for (const auto& [k, ord] : gb) {
                auto it = hb.find(std::minmax(map_gh[static_cast<size_t>(k.first)],
                                              map_gh[static_cast<size_t>(k.second)]));
                if (it == hb.end() || it->second != ord) return false;
            }
            return true;
        }
        for (size_t w = 0; w < n; ++w) {
            if (used[w] || !same_atom(g.atoms[v], h.atoms[w])) continue;
            bool ok = true;
            for (int bi : g_adj[v]) {
                int u = g.bonds[static_cast<size_t>(bi)].other(static_cast<int>(v));
                if (static_cast<size_t>(u) < v) {
                    auto it = hb.find(std::minmax(static_cast<int>(w), map_gh[static_cast<size_t>(u)]));
                    if (it == hb.end() ||
                        it->second != gb.at(std::minmax(static_cast<int>(v), u))) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok) continue;
            used[w] = 1;
            map_gh[v] = static_cast<int>(w);
            if (place(v + 1)) return true;
            used[w] = 0;
            map_gh[v] = -1;
        }
        return false;
    };
    return place(0);
}

inline cgr::chem::CgrGraph permuted(const cgr::chem::CgrGraph& g, const std::vector<int>& perm) {
    cgr::chem::CgrGraph out;
    out.atoms.resize(g.atoms.size());
    for (size_t i = 0; i < g.atoms.size(); ++i)
        out.atoms[static_cast<size_t>(perm[i])] = g.atoms[i];
    for (const auto& b : g.bonds)
        out.bonds.push_back({perm[static_cast<size_t>(b.a)], perm[static_cast<size_t>(b.b)],
                             b.before, b.after});
    return out;
}

inline std::vector<int> random_perm(size_t n, cgr::Rng& rng) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    for (size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
    return p;
}

}  // namespace test_util
