#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>

namespace drsim {

// Fixed asynchronous cell library. C2 is the 2-input Muller C-element: its
// output follows the inputs when they agree and holds its previous value
// otherwise. AO22(a,b,c,d) = a&b | c&d and AO21(a,b,c) = a&b | c, both
// non-inverting.
enum class CellKind : uint8_t { INV, AND2, OR2, OR3, C2, AO22, AO21 };

inline constexpr int kCellKindCount = 7;

constexpr std::array<CellKind, kCellKindCount> all_cell_kinds() {
    return {CellKind::INV,  CellKind::AND2, CellKind::OR2, CellKind::OR3,
            CellKind::C2,   CellKind::AO22, CellKind::AO21};
}

constexpr int arity(CellKind kind) {
    switch (kind) {
    case CellKind::INV: return 1;
    case CellKind::AND2:
    case CellKind::OR2:
    case CellKind::C2: return 2;
    case CellKind::OR3:
    case CellKind::AO21: return 3;
    case CellKind::AO22: return 4;
    }
    return 0;
}

std::string_view to_string(CellKind kind);
std::optional<CellKind> cell_kind_from_string(std::string_view name);

// Pure evaluation; prev is the stored output, consulted only by C2.
// Throws BuildError when inputs.size() != arity(kind).
uint8_t eval_cell(CellKind kind, std::span<const uint8_t> inputs, uint8_t prev);

// Per-kind delay (integer delay units) and area (transistor count) tables.
struct TimingAreaModel {
    std::array<int, kCellKindCount> delay{};
    std::array<int, kCellKindCount> area{};

    int delay_of(CellKind k) const { return delay[static_cast<size_t>(k)]; }
    int area_of(CellKind k) const { return area[static_cast<size_t>(k)]; }
    int max_delay() const;
    void check() const; // throws ConfigError when any entry is < 1
};

// Unit delay for every kind; areas are static CMOS transistor counts with the
// 12-transistor C-element as the anchor.
TimingAreaModel default_model();

// Override file: one record per line, "<KIND> delay=<int> area=<int>".
// Blank lines and '#' comments are skipped. Unlisted kinds keep base values.
TimingAreaModel parse_model_overrides(std::istream& in, TimingAreaModel base);

} // namespace drsim
