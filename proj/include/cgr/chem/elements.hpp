#pragma once

#include <string>
#include <vector>

namespace cgr::chem {

struct Element {
    std::string symbol;
    std::vector<int> allowed_valences;  // empty = no valence model (e.g. Pt)
    bool aromatic_capable = false;
    bool organic_subset = false;
};

// Registry covering the alphabet the corpus uses. Bracket-only species carry
// either a valence list (Na, Se) or none at all (Pt).
inline const std::vector<Element>& element_registry() {
    static const std::vector<Element> table = {
        {"B", {3}, true, true},
        {"C", {4}, true, true},
        {"N", {3, 5}, true, true},
        {"O", {2}, true, true},
        {"P", {3, 5}, true, true},
        {"S", {2, 4, 6}, true, true},
        {"F", {1}, false, true},
        {"Cl", {1}, false, true},
        {"Br", {1}, false, true},
        {"I", {1}, false, true},
        {"H", {1}, false, false},
        {"Na", {1}, false, false},
        {"Se", {2, 4, 6}, true, false},
        {"Pt", {}, false, false},
    };
    return table;
}

// Index into the registry, or -1.
inline int element_index(const std::string& symbol) {
    const auto& reg = element_registry();
    for (size_t i = 0; i < reg.size(); ++i)
        if (reg[i].symbol == symbol) return static_cast<int>(i);
    return -1;
}

inline const Element& element(int idx) { return element_registry()[static_cast<size_t>(idx)]; }

}  // namespace cgr::chem
