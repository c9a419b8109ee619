#include <catch2/catch_amalgamated.hpp>

#include "chem_util.hpp"

using namespace cgr;
using namespace cgr::chem;

TEST_CASE("single atom parses") {
    CgrGraph g = parse_cgrsmiles("O");
    REQUIRE(g.atoms.size() == 1);
    REQUIRE(g.bonds.empty());
    REQUIRE(g.atoms[0].elem().symbol == "O");
    REQUIRE_FALSE(g.atoms[0].aromatic);
}

TEST_CASE("dynamic bond formation") {
    CgrGraph g = parse_cgrsmiles("C[.>-]O");
    REQUIRE(g.atoms.size() == 2);
    REQUIRE(g.bonds.size() == 1);
    REQUIRE(g.bonds[0].before == BondOrder::None);
    REQUIRE(g.bonds[0].after == BondOrder::Single);
    REQUIRE(g.has_dynamic());
}

TEST_CASE("pentavalent carbon parses but fails validation later") {
    CgrGraph g = parse_cgrsmiles("C(C)(C)(C)(C)C");
    REQUIRE(g.atoms.size() == 6);
    REQUIRE(g.bonds.size() == 5);
    for (const auto& b : g.bonds) REQUIRE(b.a == 0);
}

TEST_CASE("branches and rings") {
    CgrGraph g = parse_cgrsmiles("CC(=O)O");
    REQUIRE(g.atoms.size() == 4);
    REQUIRE(g.bonds.size() == 3);

    CgrGraph ring = parse_cgrsmiles("C1CCCCC1");
    REQUIRE(ring.atoms.size() == 6);
    REQUIRE(ring.bonds.size() == 6);

    CgrGraph arom = parse_cgrsmiles("c1ccccc1");
    REQUIRE(arom.atoms.size() == 6);
    for (const auto& a : arom.atoms) REQUIRE(a.aromatic);
    for (const auto& b : arom.bonds) REQUIRE(b.before == BondOrder::Aromatic);

    CgrGraph pct = parse_cgrsmiles("C%12CC%12");
    REQUIRE(pct.bonds.size() == 3);
}

TEST_CASE("bracket atoms") {
    CgrGraph g = parse_cgrsmiles("[13CH3:5][NH2+>0]");
    REQUIRE(g.atoms.size() == 2);
    const Atom& c = g.atoms[0];
    REQUIRE(c.isotope == 13);
    REQUIRE(c.explicit_h == 3);
    REQUIRE(c.map_index == 5);
    const Atom& n = g.atoms[1];
    REQUIRE(n.elem().symbol == "N");
    REQUIRE(n.explicit_h == 2);
    REQUIRE(n.charge_before == 1);
    REQUIRE(n.charge_after == 0);
    REQUIRE(n.dynamic_charge());
    REQUIRE(g.has_dynamic());

    CgrGraph q = parse_cgrsmiles("[O--]");
    REQUIRE(q.atoms[0].charge_before == -2);
    CgrGraph q2 = parse_cgrsmiles("[O-2]");
    REQUIRE(q2.atoms[0].charge_before == -2);
}

TEST_CASE("components separated by dot") {
    CgrGraph g = parse_cgrsmiles("CC.O");
    REQUIRE(g.atoms.size() == 3);
    REQUIRE(g.bonds.size() == 1);
}

TEST_CASE("syntax errors carry positions") {
    auto pos_of = [](const std::string& s) {
        try {
            parse_cgrsmiles(s);
        } catch (const SyntaxError& e) {
            return e.position;
        }
        return static_cast<size_t>(9999);
    };
    REQUIRE_THROWS_AS(parse_cgrsmiles("C(C"), SyntaxError);
    REQUIRE_THROWS_AS(parse_cgrsmiles("C1CC"), SyntaxError);
    REQUIRE_THROWS_AS(parse_cgrsmiles("C)"), SyntaxError);
    REQUIRE_THROWS_AS(parse_cgrsmiles("X"), SyntaxError);
    REQUIRE_THROWS_AS(parse_cgrsmiles("C="), SyntaxError);
    REQUIRE_THROWS_AS(parse_cgrsmiles("=C"), SyntaxError);
    REQUIRE_THROWS_AS(parse_cgrsmiles("C=-C"), SyntaxError);
    REQUIRE_THROWS_AS(parse_cgrsmiles("C11C"), SyntaxError);
    REQUIRE_THROWS_AS(parse_cgrsmiles("C1C1CC1C1"), SyntaxError);
    REQUIRE_THROWS_AS(parse_cgrsmiles("C[.>.]O"), SyntaxError);
    REQUIRE_THROWS_AS(parse_cgrsmiles("[CH"), SyntaxError);
    REQUIRE_THROWS_AS(parse_cgrsmiles("[C+5]"), SyntaxError);
    REQUIRE_THROWS_AS(parse_cgrsmiles(""), SyntaxError);
    REQUIRE(pos_of("CC=)") == 3);
}

TEST_CASE("length cap") {
    std::string long_chain(200, 'C');
    REQUIRE_THROWS_AS(parse_cgrsmiles(long_chain), LengthError);
    REQUIRE_NOTHROW(parse_cgrsmiles(std::string(156, 'C')));
    REQUIRE_NOTHROW(parse_cgrsmiles(long_chain, 400));
}

TEST_CASE("writer round trips hand examples") {
    for (const std::string s :
         {"O", "C[.>-]O", "CC(=O)O", "c1ccccc1", "CC.O", "[13CH3:5][NH2+>0]",
          "C1CC1[=>#]N", "O=C(O)c1ccccc1", "CC[.>-]OC", "[Na+].[O-]C"}) {
        CgrGraph g = parse_cgrsmiles(s);
        std::string w = write_cgrsmiles(g);
        CgrGraph h = parse_cgrsmiles(w);
        INFO(s << " -> " << w);
        REQUIRE(test_util::isomorphic(g, h));
    }
}

TEST_CASE("writer is invariant under atom permutation") {
    Rng rng(31);
    for (const std::string s :
         {"CC(=O)OC1=CC=CC=C1", "c1ccc2ccccc2c1", "C[.>-]O.CC[N+>0]1CC1"}) {
        CgrGraph g = parse_cgrsmiles(s);
        std::string base = write_cgrsmiles(g);
        for (int k = 0; k < 20; ++k) {
            auto perm = test_util::random_perm(g.atoms.size(), rng);
            REQUIRE(write_cgrsmiles(test_util::permuted(g, perm)) == base);
        }
    }
}

TEST_CASE("projections by definition") {
    CgrGraph g = parse_cgrsmiles("C[.>-]O");
    MolGraph before = project(g, Side::Before);
    REQUIRE(before.bonds.empty());
    MolGraph after = project(g, Side::After);
    REQUIRE(after.bonds.size() == 1);
    REQUIRE(after.bonds[0].order == BondOrder::Single);

    CgrGraph st = parse_cgrsmiles("CC(=O)O");
    MolGraph b2 = project(st, Side::Before), a2 = project(st, Side::After);
    REQUIRE(b2.atoms.size() == a2.atoms.size());
    REQUIRE(b2.bonds.size() == a2.bonds.size());
}

TEST_CASE("reaction smiles conversion") {
    CgrGraph g = parse_cgrsmiles("C[.>-]O");
    auto [reactants, products] = to_reaction_smiles(g);
    REQUIRE(reactants == std::vector<std::string>{"C", "O"});
    REQUIRE(products == std::vector<std::string>{"CO"});

    CgrGraph st = parse_cgrsmiles("CC(=O)O");
    auto [r2, p2] = to_reaction_smiles(st);
    REQUIRE(r2 == p2);

    // mapping dropped by default path used for reaction SMILES output
    CgrGraph m = parse_cgrsmiles("[CH4:1]");
    auto [r3, p3] = to_reaction_smiles(m, false);
    REQUIRE(r3 == std::vector<std::string>{"[CH4]"});
    auto [r4, p4] = to_reaction_smiles(m, true);
    REQUIRE(r4 == std::vector<std::string>{"[CH4:1]"});
}

TEST_CASE("corpus round trip is isomorphic for every line") {
    auto lines = test_util::load_lines(std::string(CGR_TEST_DATA_DIR) + "/golden_corpus.txt");
    REQUIRE(lines.size() == 200);
    for (const auto& s : lines) {
        CgrGraph g = parse_cgrsmiles(s);
        CgrGraph h = parse_cgrsmiles(write_cgrsmiles(g));
        INFO(s);
        REQUIRE(test_util::isomorphic(g, h));
    }
}
