#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "drsim/cells.hpp"
#include "drsim/error.hpp"

#include <sstream>

using namespace drsim;

namespace {

uint8_t eval(CellKind k, std::initializer_list<uint8_t> in, uint8_t prev = 0) {
    std::vector<uint8_t> v(in);
    return eval_cell(k, v, prev);
}

} // namespace

TEST_CASE("C-element follows agreeing inputs and otherwise holds") {
    CHECK(eval(CellKind::C2, {1, 1}, 0) == 1);
    CHECK(eval(CellKind::C2, {0, 0}, 1) == 0);
    CHECK(eval(CellKind::C2, {1, 0}, 1) == 1);
    CHECK(eval(CellKind::C2, {1, 0}, 0) == 0);
    CHECK(eval(CellKind::C2, {0, 1}, 1) == 1);
}

TEST_CASE("C-element is monotone in its inputs and idempotent") {
    for (uint8_t prev = 0; prev < 2; ++prev)
        for (uint8_t a = 0; a < 2; ++a)
            for (uint8_t b = 0; b < 2; ++b) {
                uint8_t base = eval(CellKind::C2, {a, b}, prev);
                // raising any input never lowers the output
                CHECK(eval(CellKind::C2, {1, b}, prev) >= (a ? base : 0));
                CHECK(eval(CellKind::C2, {a, 1}, prev) >= (b ? base : 0));
                // evaluating again at the new stored state changes nothing
                CHECK(eval(CellKind::C2, {a, b}, base) == base);
            }
}

TEST_CASE("combinational cells match their two-level expansions") {
    for (int bits = 0; bits < 16; ++bits) {
        uint8_t a = bits & 1, b = (bits >> 1) & 1, c = (bits >> 2) & 1, d = (bits >> 3) & 1;
        CHECK(eval(CellKind::AO22, {a, b, c, d}) == ((a & b) | (c & d)));
        CHECK(eval(CellKind::AO21, {a, b, c}) == ((a & b) | c));
        CHECK(eval(CellKind::OR3, {a, b, c}) == (a | b | c));
        CHECK(eval(CellKind::AND2, {a, b}) == (a & b));
        CHECK(eval(CellKind::OR2, {a, b}) == (a | b));
        CHECK(eval(CellKind::INV, {a}) == !a);
        // non-C2 cells ignore the stored value
        CHECK(eval(CellKind::AO22, {a, b, c, d}, 1) == eval(CellKind::AO22, {a, b, c, d}, 0));
    }
    CHECK(eval(CellKind::AO22, {1, 1, 0, 0}) == 1);
    CHECK(eval(CellKind::AO21, {0, 1, 1}) == 1);
}

TEST_CASE("arity is enforced") {
    CHECK(arity(CellKind::INV) == 1);
    CHECK(arity(CellKind::AO22) == 4);
    CHECK_THROWS_AS(eval(CellKind::AND2, {1, 1, 1}), BuildError);
    CHECK_THROWS_AS(eval(CellKind::AO21, {1}), BuildError);
}

TEST_CASE("default model values") {
    TimingAreaModel m = default_model();
    m.check();
    CHECK(m.area_of(CellKind::C2) == 12);
    CHECK(m.area_of(CellKind::INV) == 2);
    CHECK(m.area_of(CellKind::AO22) == 10);
    for (CellKind k : all_cell_kinds()) CHECK(m.delay_of(k) == 1);
    CHECK(m.max_delay() == 1);
}

TEST_CASE("model override parsing") {
    std::istringstream good("# comment\n"
                            "\n"
                            "C2 delay=2 area=12\n"
                            "INV delay=3 area=4  # trailing comment\n");
    TimingAreaModel m = parse_model_overrides(good, default_model());
    CHECK(m.delay_of(CellKind::C2) == 2);
    CHECK(m.delay_of(CellKind::INV) == 3);
    CHECK(m.area_of(CellKind::INV) == 4);
    CHECK(m.delay_of(CellKind::OR2) == 1); // untouched
    CHECK(m.max_delay() == 3);

    std::istringstream unknown("XOR2 delay=1 area=1\n");
    CHECK_THROWS_AS(parse_model_overrides(unknown, default_model()), ParseError);
    std::istringstream malformed("C2 delay=fast area=12\n");
    CHECK_THROWS_AS(parse_model_overrides(malformed, default_model()), ParseError);
    std::istringstream missing("C2 delay=2\n");
    CHECK_THROWS_AS(parse_model_overrides(missing, default_model()), ParseError);
    std::istringstream zero("C2 delay=0 area=12\n");
    CHECK_THROWS_AS(parse_model_overrides(zero, default_model()), ParseError);
}

TEST_CASE("cell kind names round trip") {
    for (CellKind k : all_cell_kinds()) {
        auto back = cell_kind_from_string(to_string(k));
        REQUIRE(back.has_value());
        CHECK(*back == k);
    }
    CHECK_FALSE(cell_kind_from_string("NAND2").has_value());
}
