#include <doctest.h>

#include <set>

#include "profin/matrioshka.hpp"

using namespace profin;

namespace {

std::vector<Tower> acceptance_towers() {
    std::vector<Tower> out;
    out.push_back(make_tower(TowerKind::binary, 0, 6));
    out.push_back(make_tower(TowerKind::padic, 2, 5));
    out.push_back(make_tower(TowerKind::cyclotomic, 3, 3));
    out.push_back(make_tower(TowerKind::f2ab, 0, 2));
    out.push_back(make_tower(TowerKind::aut_f2ab, 0, 2));
    return out;
}

}  // namespace

TEST_CASE("binary tower: the code is the word itself") {
    Tower b = make_tower(TowerKind::binary, 0, 3);
    PartitionTree tree(b);
    for (int i = 0; i < b.level(3).order(); ++i) {
        CoherentElement x = CoherentElement::from_top(b, i);
        CHECK(tree.encode(x).to_string() == b.level(3).label(i));
    }
    CoherentElement x = CoherentElement::from_labels(b, {"1", "10", "101"});
    CHECK(tree.encode(x).to_string() == "101");
}

TEST_CASE("cyclotomic(3) examples") {
    Tower c1 = make_tower(TowerKind::cyclotomic, 3, 1);
    PartitionTree tree1(c1);
    CHECK(tree1.encode(CoherentElement::from_labels(c1, {"1"})).to_string() == "0");
    CHECK(tree1.encode(CoherentElement::from_labels(c1, {"2"})).to_string() == "1");

    Tower c2 = make_tower(TowerKind::cyclotomic, 3, 2);
    PartitionTree tree2(c2);
    // fiber over 2 is {2,5,8}: 2 -> 00, 5 -> 01, 8 -> 1
    CHECK(tree2.encode(CoherentElement::from_labels(c2, {"2", "2"})).to_string() == "100");
    CHECK(tree2.encode(CoherentElement::from_labels(c2, {"2", "5"})).to_string() == "101");
    CHECK(tree2.encode(CoherentElement::from_labels(c2, {"2", "8"})).to_string() == "11");

    // decoding a proper prefix lands on a clopen cell
    DecodeResult cell = tree2.decode("10");
    CHECK_FALSE(cell.is_element());
    CHECK(cell.level == 2);
    REQUIRE(cell.members.size() == 2);
    CHECK(c2.level(2).label(cell.members[0]) == "2");
    CHECK(c2.level(2).label(cell.members[1]) == "5");

    // a complete code decodes to the element
    DecodeResult el = tree2.decode("101");
    REQUIRE(el.is_element());
    CHECK(el.element->to_string() == "2,5");
}

TEST_CASE("dead branches raise InvalidCode at the offending index") {
    Tower c2 = make_tower(TowerKind::cyclotomic, 3, 2);
    PartitionTree tree(c2);
    try {
        tree.decode("111");  // "11" is already the element (2,8)
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidCode);
        CHECK(e.detail() == 2);
    }
}

TEST_CASE("round trip and code distinctness over every test tower") {
    for (const Tower& t : acceptance_towers()) {
        PartitionTree tree(t);
        std::set<std::string> codes;
        int top = t.level(t.depth()).order();
        for (int i = 0; i < top; ++i) {
            CoherentElement x = CoherentElement::from_top(t, i);
            BitSequence code = tree.encode(x);
            DecodeResult back = tree.decode(code);
            REQUIRE(back.is_element());
            CHECK(*back.element == x);
            CHECK(codes.insert(code.to_string()).second);  // injective
        }
        CHECK(static_cast<long long>(codes.size()) == tree.frontier_leaf_count());
    }
}

TEST_CASE("prefix coherence: deeper trees only refine") {
    for (const Tower& t : acceptance_towers()) {
        if (t.depth() < 2) continue;
        Tower shallower = t.truncate(t.depth() - 1);
        PartitionTree deep(t), shallow(shallower);
        for (int i = 0; i < t.level(t.depth()).order(); ++i) {
            CoherentElement x = CoherentElement::from_top(t, i);
            std::vector<int> chain(x.components().begin(), x.components().end() - 1);
            std::string deep_code = deep.encode(x).to_string();
            std::string shallow_code = shallow.encode_chain(chain).to_string();
            CHECK(deep_code.substr(0, shallow_code.size()) == shallow_code);
            // and the in-tree prefix walk agrees with the truncated tower
            CHECK(deep.encode_to_level(x, t.depth() - 1).to_string() == shallow_code);
        }
    }
}

TEST_CASE("convention determinism: rebuilt trees give identical codes") {
    Tower t = make_tower(TowerKind::cyclotomic, 3, 3);
    PartitionTree a(t), b(t);
    for (int i = 0; i < t.level(3).order(); ++i) {
        CoherentElement x = CoherentElement::from_top(t, i);
        CHECK(a.encode(x).to_string() == b.encode(x).to_string());
        CHECK(a.encode(x).convention_version == "cm-1");
    }
}

TEST_CASE("block encoding: worked cyclotomic(3) example") {
    Tower c2 = make_tower(TowerKind::cyclotomic, 3, 2);
    CoherentElement x = CoherentElement::from_labels(c2, {"2", "5"});
    BlockCode code = block_encode(c2, x);
    REQUIRE(code.blocks.size() == 2);
    CHECK(code.blocks[0] == "1");
    CHECK(code.blocks[1] == "101");
    CHECK(code.min_bits(1) == 1);
    CHECK(code.min_bits(2) == 3);  // ceil(log2 6)
    CHECK(code.m_values[1] == 6);
    CHECK(code.serialize() == "b1:1|b2:101");

    CHECK(block_truncate(code, 2) == "1");
    CHECK(block_truncate(code, 1) == "");
}

TEST_CASE("block widths: trivial level gives an empty block") {
    auto g1 = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(1));
    auto g2 = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(3));
    Tower t = make_custom_tower({g1, g2}, {{0, 0, 0}});
    CoherentElement x = CoherentElement::from_labels(t, {"0", "2"});
    BlockCode code = block_encode(t, x);
    CHECK(code.blocks[0] == "");
    CHECK(code.widths[0] == 0);
    CHECK(code.blocks[1] == "10");  // fiber {0,1,2}, index 2, 2 bits
}

TEST_CASE("block widths exceed min_bits when fibers are not powers of two") {
    // padic(5): each level consumes 3 fiber bits, so the level-2 block is
    // 6 bits wide while 25 elements would fit in 5; truncation coherence
    // is what the construction preserves.
    Tower t = make_tower(TowerKind::padic, 5, 2);
    CoherentElement x = CoherentElement::from_labels(t, {"3", "13"});
    BlockCode code = block_encode(t, x);
    CHECK(code.blocks[0] == "011");
    CHECK(code.blocks[1] == "011010");  // fiber {3,8,13,18,23}, index 2
    CHECK(code.widths[1] == 6);
    CHECK(code.min_bits(2) == 5);
    CHECK(block_truncate(code, 2) == code.blocks[0]);
}

TEST_CASE("block coherence holds exhaustively") {
    for (const Tower& t : acceptance_towers()) {
        for (int i = 0; i < t.level(t.depth()).order(); ++i) {
            CoherentElement x = CoherentElement::from_top(t, i);
            BlockCode code = block_encode(t, x);
            for (int k = 1; k <= t.depth(); ++k) {
                std::string prev = k == 1 ? "" : code.blocks[k - 2];
                CHECK(block_truncate(code, k) == prev);
            }
        }
    }
}

TEST_CASE("tower mismatch is refused") {
    Tower a = make_tower(TowerKind::binary, 0, 2);
    Tower b = make_tower(TowerKind::binary, 0, 2);
    PartitionTree tree(a);
    CoherentElement x = CoherentElement::identity(b);
    CHECK_THROWS_AS(tree.encode(x), Error);
    CHECK_THROWS_AS(block_encode(a, x), Error);
}

TEST_CASE("a singleton cell is exactly one cylinder") {
    Tower c2 = make_tower(TowerKind::cyclotomic, 3, 2);
    PartitionTree tree(c2);
    DecodeResult r = tree.decode("1");  // resolves level 1 to element 2
    CHECK_FALSE(r.is_element());
    REQUIRE(r.is_cylinder());
    Cylinder z = r.as_cylinder(c2);
    CHECK(z.level == 1);
    CHECK(z.contains(CoherentElement::from_labels(c2, {"2", "5"})));
    CHECK_FALSE(z.contains(CoherentElement::identity(c2)));
}

TEST_CASE("codes from a different convention version never decode") {
    Tower t = make_tower(TowerKind::binary, 0, 2);
    PartitionTree tree(t);
    BitSequence alien;
    alien.bits = {0, 1};
    alien.convention_version = "cm-0";
    CHECK_THROWS_AS(tree.decode(alien), Error);
}
