#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cgr/chem/graph.hpp"
#include "cgr/rng.hpp"

namespace cgr::chem {

struct LengthMismatch : std::runtime_error {
    LengthMismatch() : std::runtime_error("fingerprint bit lengths differ") {}
};

struct Fingerprint {
    int n_bits = 2048;
    std::vector<uint64_t> words;  // n_bits / 64

    explicit Fingerprint(int bits = 2048) : n_bits(bits), words(static_cast<size_t>(bits) / 64, 0) {}

    void set(uint64_t h) {
        uint64_t b = h % static_cast<uint64_t>(n_bits);
        words[b >> 6] |= 1ull << (b & 63);
    }
    int popcount() const {
        int n = 0;
        for (uint64_t w : words) n += std::popcount(w);
        return n;
    }
    bool operator==(const Fingerprint& o) const { return n_bits == o.n_bits && words == o.words; }
};

// Circular (ECFP-style) fingerprint: per-atom environment ids at radius
// 0..2, each folded into the bitset.
inline Fingerprint fingerprint(const MolGraph& m, int radius = 2, int n_bits = 2048) {
    Fingerprint fp(n_bits);
    const size_t n = m.atoms.size();
    std::vector<std::vector<int>> adj = adjacency(m);

    auto mix = [](uint64_t a, uint64_t b) {
        uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2));
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        return z ^ (z >> 31);
    };

    std::vector<uint64_t> ids(n);
    for (size_t i = 0; i < n; ++i) {
        const Atom& a = m.atoms[i];
        uint64_t h = fnv1a64(a.elem().symbol);
        h = mix(h, a.aromatic ? 1 : 0);
        h = mix(h, static_cast<uint64_t>(a.charge_before + 8));
        h = mix(h, adj[i].size());
        ids[i] = h;
        fp.set(h);
    }
    for (int r = 0; r < radius; ++r) {
        std::vector<uint64_t> next(n);
        for (size_t i = 0; i < n; ++i) {
            std::vector<uint64_t> env;
            for (int e : adj[i]) {
                const MolBond& b = m.bonds[static_cast<size_t>(e)];
                int u = b.other(static_cast<int>(i));
                env.push_back(mix(static_cast<uint64_t>(b.order) + 1,
                                  ids[static_cast<size_t>(u)]));
            }
            std::sort(env.begin(), env.end());
            uint64_t h = mix(ids[i], static_cast<uint64_t>(r) + 17);
            for (uint64_t v : env) h = mix(h, v);
            next[i] = h;
            fp.set(h);
        }
        ids = std::move(next);
    }
    return fp;
}

// |a AND b| / |a OR b|, defined as 1.0 when both are empty.
inline double tanimoto(const Fingerprint& a, const Fingerprint& b) {
    if (a.n_bits != b.n_bits) throw LengthMismatch();
    int inter = 0, uni = 0;
    for (size_t i = 0; i < a.words.size(); ++i) {
        inter += std::popcount(a.words[i] & b.words[i]);
        uni += std::popcount(a.words[i] | b.words[i]);
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
}

// True iff any reactant contains an O=O bonded pair.
inline bool contains_oo(const std::vector<MolGraph>& reactants) {
    int oxygen = element_index("O");
    for (const auto& m : reactants)
        for (const auto& b : m.bonds)
            if (b.order == BondOrder::Double &&
                m.atoms[static_cast<size_t>(b.a)].element == oxygen &&
                m.atoms[static_cast<size_t>(b.b)].element == oxygen)
                return true;
    return false;
}

}  // namespace cgr::chem
