#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgr/chem/graph.hpp"
#include "cgr/chem/parse.hpp"

namespace cgr::chem {

struct ValenceError : std::runtime_error {
    int atom_index;
    ValenceError(int idx, const std::string& what)
        : std::runtime_error("atom " + std::to_string(idx) + ": " + what), atom_index(idx) {}
};

// Sum of bond orders at an atom; aromatic bonds count 1.5, total rounded down.
inline int bond_order_sum(const MolGraph& m, int atom_index) {
    double s = 0.0;
    for (const auto& b : m.bonds)
        if (b.a == atom_index || b.b == atom_index) s += bond_valence(b.order);
    return static_cast<int>(std::floor(s));
}

// Implicit hydrogen count for one atom of a projection. Bracket atoms report
// their explicit count verbatim; organic-subset atoms fill to the smallest
// allowed valence.
inline int implicit_hydrogens(const MolGraph& m, int atom_index) {
    const Atom& a = m.atoms[static_cast<size_t>(atom_index)];
    if (a.explicit_h) return *a.explicit_h;
    int sum = bond_order_sum(m, atom_index);
    const auto& allowed = a.elem().allowed_valences;
    for (int v : allowed)
        if (v >= sum) return v - sum;
    throw ValenceError(atom_index, "bond order sum " + std::to_string(sum) +
                                       " exceeds every allowed valence of " + a.elem().symbol);
}

struct ValidityReport {
    bool parse_ok = false;
    bool valence_ok_before = false;
    bool valence_ok_after = false;
    bool aromatic_ok = false;
    int h_balance = 0;  // total implicit H after - before
    std::vector<std::string> errors;

    bool valid() const {
        return parse_ok && valence_ok_before && valence_ok_after && aromatic_ok;
    }
};

namespace detail {

// Every aromatic atom must lie on a cycle of aromatic atoms joined by
// aromatic bonds. Checked by peeling degree-<2 vertices from the aromatic
// subgraph; survivors are exactly the atoms on cycles.
inline bool aromatic_rings_ok(const MolGraph& m) {
    const size_t n = m.atoms.size();
    std::vector<std::vector<int>> nbr(n);
    for (const auto& b : m.bonds) {
        if (b.order != BondOrder::Aromatic) continue;
        if (!m.atoms[static_cast<size_t>(b.a)].aromatic ||
            !m.atoms[static_cast<size_t>(b.b)].aromatic)
            continue;
        nbr[static_cast<size_t>(b.a)].push_back(b.b);
        nbr[static_cast<size_t>(b.b)].push_back(b.a);
    }
    std::vector<int> degree(n);
    for (size_t i = 0; i < n; ++i) degree[i] = static_cast<int>(nbr[i].size());
    std::vector<int> queue;
    std::vector<bool> removed(n, false);
    for (size_t i = 0; i < n; ++i)
        if (degree[i] < 2) queue.push_back(static_cast<int>(i));
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        if (removed[static_cast<size_t>(v)]) continue;
        removed[static_cast<size_t>(v)] = true;
        for (int u : nbr[static_cast<size_t>(v)]) {
            if (removed[static_cast<size_t>(u)]) continue;
            if (--degree[static_cast<size_t>(u)] < 2) queue.push_back(u);
        }
    }
    for (size_t i = 0; i < n; ++i)
        if (m.atoms[i].aromatic && removed[i]) return false;
    return true;
}

inline bool valence_side_ok(const MolGraph& m, const char* side, std::vector<std::string>& errors,
                            int* total_h) {
    bool ok = true;
    int h = 0;
    for (size_t i = 0; i < m.atoms.size(); ++i) {
        const Atom& a = m.atoms[i];
        const auto& allowed = a.elem().allowed_valences;
        try {
            if (a.explicit_h) {
                int sum = bond_order_sum(m, static_cast<int>(i));
                int max_v = allowed.empty() ? 0 : allowed.back();
                if (!allowed.empty() && sum + *a.explicit_h > max_v) {
                    ok = false;
                    errors.push_back(std::string(side) + ": atom " + std::to_string(i) + " (" +
                                     a.elem().symbol + ") valence " +
                                     std::to_string(sum + *a.explicit_h) + " exceeds " +
                                     std::to_string(max_v));
                }
                h += *a.explicit_h;
            } else {
                h += implicit_hydrogens(m, static_cast<int>(i));
            }
        } catch (const ValenceError& e) {
            ok = false;
            errors.push_back(std::string(side) + ": " + e.what());
        }
    }
    *total_h = h;
    return ok;
}

}  // namespace detail

// Never throws; all failures land in the report.
inline ValidityReport validate(const CgrGraph& g) {
    ValidityReport r;
    r.parse_ok = true;
    MolGraph before = project(g, Side::Before);
    MolGraph after = project(g, Side::After);
    int h_before = 0, h_after = 0;
    r.valence_ok_before = detail::valence_side_ok(before, "before", r.errors, &h_before);
    r.valence_ok_after = detail::valence_side_ok(after, "after", r.errors, &h_after);
    r.aromatic_ok = detail::aromatic_rings_ok(before) && detail::aromatic_rings_ok(after);
    if (!r.aromatic_ok) r.errors.push_back("aromatic atom outside an aromatic ring");
    if (r.valence_ok_before && r.valence_ok_after) r.h_balance = h_after - h_before;
    return r;
}

inline ValidityReport validate_text(const std::string& text, size_t max_len = kDefaultMaxLen) {
    try {
        return validate(parse_cgrsmiles(text, max_len));
    } catch (const std::exception& e) {
        ValidityReport r;
        r.errors.push_back(e.what());
        return r;
    }
}

}  // namespace cgr::chem
