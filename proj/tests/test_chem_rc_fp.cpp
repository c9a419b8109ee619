#include <catch2/catch_amalgamated.hpp>

#include "chem_util.hpp"

using namespace cgr;
using namespace cgr::chem;

TEST_CASE("reaction center extraction") {
    CgrGraph g = parse_cgrsmiles("C[.>-]O");
    CgrGraph r0 = reaction_center(g, 0);
    REQUIRE(r0.atoms.size() == 2);
    REQUIRE(r0.bonds.size() == 1);
    REQUIRE(r0.bonds[0].dynamic());

    CgrGraph g2 = parse_cgrsmiles("CC[.>-]O");
    CgrGraph r1 = reaction_center(g2, 1);
    REQUIRE(r1.atoms.size() == 3);
    CgrGraph r0b = reaction_center(g2, 0);
    REQUIRE(r0b.atoms.size() == 2);

    REQUIRE_THROWS_AS(reaction_center(parse_cgrsmiles("CCO"), 1), EmptyCenter);

    // dynamic charge alone seeds a center
    CgrGraph q = parse_cgrsmiles("C[NH3+>0]");
    CgrGraph rq = reaction_center(q, 0);
    REQUIRE(rq.atoms.size() == 1);
}

TEST_CASE("rc_hash is permutation invariant") {
    Rng rng(17);
    for (const std::string s :
         {"C[.>-]O", "CC[.>-]OC(=O)C", "c1ccccc1C[->.]N(C)C", "C[NH3+>0].O[.>-]C"}) {
        CgrGraph g = parse_cgrsmiles(s);
        uint64_t base = rc_hash(reaction_center(g, 1)).key;
        for (int k = 0; k < 20; ++k) {
            auto perm = test_util::random_perm(g.atoms.size(), rng);
            CgrGraph p = test_util::permuted(g, perm);
            REQUIRE(rc_hash(reaction_center(p, 1)).key == base);
        }
    }
}

TEST_CASE("rc_hash distinguishes direction and is repeatable") {
    uint64_t form = rc_hash(reaction_center(parse_cgrsmiles("C[.>-]O"), 0)).key;
    uint64_t brk = rc_hash(reaction_center(parse_cgrsmiles("C[->.]O"), 0)).key;
    REQUIRE(form != brk);
    REQUIRE(rc_hash(reaction_center(parse_cgrsmiles("C[.>-]O"), 0)).key == form);

    // map indices and explicit hydrogens do not affect the key
    uint64_t mapped = rc_hash(reaction_center(parse_cgrsmiles("[CH4:7][.>-][OH2:3]"), 0)).key;
    REQUIRE(mapped == form);
}

TEST_CASE("fingerprint determinism and invariance") {
    MolGraph m = project(parse_cgrsmiles("CC(=O)OC1=CC=CC=C1"), Side::Before);
    Fingerprint a = fingerprint(m);
    Fingerprint b = fingerprint(m);
    REQUIRE(a == b);
    REQUIRE(a.popcount() >= 1);

    Rng rng(23);
    CgrGraph g = parse_cgrsmiles("CC(=O)OC1=CC=CC=C1");
    for (int k = 0; k < 10; ++k) {
        auto perm = test_util::random_perm(g.atoms.size(), rng);
        MolGraph pm = project(test_util::permuted(g, perm), Side::Before);
        REQUIRE(fingerprint(pm) == a);
    }
}

TEST_CASE("tanimoto properties") {
    MolGraph methane = project(parse_cgrsmiles("C"), Side::Before);
    MolGraph water = project(parse_cgrsmiles("O"), Side::Before);
    Fingerprint fm = fingerprint(methane), fw = fingerprint(water);
    REQUIRE(tanimoto(fm, fm) == 1.0);
    REQUIRE(tanimoto(fm, fw) < 0.05);
    REQUIRE(tanimoto(fm, fw) == tanimoto(fw, fm));

    Fingerprint e1, e2;
    REQUIRE(tanimoto(e1, e2) == 1.0);

    Fingerprint d1, d2;
    d1.set(3);
    d2.set(100);
    REQUIRE(tanimoto(d1, d2) == 0.0);

    Fingerprint wrong;
    wrong.words.resize(1);
    wrong.n_bits = 64;
    REQUIRE_THROWS_AS(tanimoto(fm, wrong), LengthMismatch);

    // symmetry and range over random bitsets
    Rng rng(5);
    for (int k = 0; k < 50; ++k) {
        Fingerprint a, b;
        for (int i = 0; i < 40; ++i) {
            a.set(rng.below(2048));
            b.set(rng.below(2048));
        }
        double t = tanimoto(a, b);
        REQUIRE(t >= 0.0);
        REQUIRE(t <= 1.0);
        REQUIRE(t == tanimoto(b, a));
        REQUIRE(tanimoto(a, a) == 1.0);
    }
}

TEST_CASE("contains_oo flags molecular oxygen only") {
    auto reactants_of = [](const std::string& s) {
        CgrGraph g = parse_cgrsmiles(s);
        MolGraph before = project(g, Side::Before);
        std::vector<MolGraph> out;
        for (const auto& comp : components(before)) {
            MolGraph sub;
            std::map<int, int> remap;
            for (int v : comp) {
                remap[v] = static_cast<int>(sub.atoms.size());
                sub.atoms.push_back(before.atoms[static_cast<size_t>(v)]);
            }
            for (const auto& b : before.bonds)
                if (remap.count(b.a) && remap.count(b.b))
                    sub.bonds.push_back({remap[b.a], remap[b.b], b.order});
            out.push_back(std::move(sub));
        }
        return out;
    };
    REQUIRE(contains_oo(reactants_of("O=O.CC")));
    REQUIRE_FALSE(contains_oo(reactants_of("C.O")));
    REQUIRE_FALSE(contains_oo(reactants_of("OO")));
}

TEST_CASE("projection atom sets agree") {
    for (const std::string s : {"C[.>-]O", "CC[=>-]C.O=O", "c1ccccc1"}) {
        CgrGraph g = parse_cgrsmiles(s);
        REQUIRE(project(g, Side::Before).atoms.size() == project(g, Side::After).atoms.size());
    }
}
