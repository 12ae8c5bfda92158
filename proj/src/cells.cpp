#include "drsim/cells.hpp"

#include "drsim/error.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <string>

namespace drsim {

std::string_view to_string(CellKind kind) {
    switch (kind) {
    case CellKind::INV: return "INV";
    case CellKind::AND2: return "AND2";
    case CellKind::OR2: return "OR2";
    case CellKind::OR3: return "OR3";
    case CellKind::C2: return "C2";
    case CellKind::AO22: return "AO22";
    case CellKind::AO21: return "AO21";
    }
    return "?";
}

std::optional<CellKind> cell_kind_from_string(std::string_view name) {
    for (CellKind k : all_cell_kinds())
        if (name == to_string(k)) return k;
    return std::nullopt;
}

uint8_t eval_cell(CellKind kind, std::span<const uint8_t> in, uint8_t prev) {
    if (in.size() != static_cast<size_t>(arity(kind)))
        throw BuildError("cell " + std::string(to_string(kind)) + " expects " +
                         std::to_string(arity(kind)) + " inputs, got " +
                         std::to_string(in.size()));
    switch (kind) {
    case CellKind::INV: return !in[0];
    case CellKind::AND2: return in[0] & in[1];
    case CellKind::OR2: return in[0] | in[1];
    case CellKind::OR3: return in[0] | in[1] | in[2];
    case CellKind::C2: return (in[0] & in[1]) | ((in[0] | in[1]) & prev);
    case CellKind::AO22: return (in[0] & in[1]) | (in[2] & in[3]);
    case CellKind::AO21: return (in[0] & in[1]) | in[2];
    }
    return 0;
}

int TimingAreaModel::max_delay() const {
    return *std::max_element(delay.begin(), delay.end());
}

void TimingAreaModel::check() const {
    for (CellKind k : all_cell_kinds()) {
        if (delay_of(k) < 1)
            throw ConfigError("delay of " + std::string(to_string(k)) + " must be >= 1");
        if (area_of(k) < 1)
            throw ConfigError("area of " + std::string(to_string(k)) + " must be >= 1");
    }
}

TimingAreaModel default_model() {
    TimingAreaModel m;
    m.delay.fill(1);
    auto set_area = [&m](CellKind k, int a) { m.area[static_cast<size_t>(k)] = a; };
    set_area(CellKind::INV, 2);
    set_area(CellKind::AND2, 6);
    set_area(CellKind::OR2, 6);
    set_area(CellKind::OR3, 8);
    set_area(CellKind::C2, 12);
    set_area(CellKind::AO22, 10);
    set_area(CellKind::AO21, 8);
    return m;
}

TimingAreaModel parse_model_overrides(std::istream& in, TimingAreaModel base) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fail = [lineno](const std::string& why) {
            throw ParseError("model override line " + std::to_string(lineno) + ": " + why);
        };
        std::string_view sv = line;
        if (auto pos = sv.find('#'); pos != std::string_view::npos) sv = sv.substr(0, pos);
        std::istringstream fields{std::string(sv)};
        std::string kind_name, delay_tok, area_tok;
        if (!(fields >> kind_name)) continue; // blank or comment-only
        auto kind = cell_kind_from_string(kind_name);
        if (!kind) fail("unknown cell kind '" + kind_name + "'");
        if (!(fields >> delay_tok >> area_tok)) fail("expected '<KIND> delay=<int> area=<int>'");
        std::string trailing;
        if (fields >> trailing) fail("unexpected trailing token '" + trailing + "'");
        auto parse_field = [&fail](const std::string& tok, std::string_view key) {
            if (tok.rfind(key, 0) != 0 || tok.size() <= key.size())
                fail("expected '" + std::string(key) + "<int>', got '" + tok + "'");
            int value = 0;
            size_t used = 0;
            try {
                value = std::stoi(tok.substr(key.size()), &used);
            } catch (const std::exception&) {
                fail("bad integer in '" + tok + "'");
            }
            if (used != tok.size() - key.size()) fail("bad integer in '" + tok + "'");
            if (value < 1) fail("values must be >= 1 in '" + tok + "'");
            return value;
        };
        base.delay[static_cast<size_t>(*kind)] = parse_field(delay_tok, "delay=");
        base.area[static_cast<size_t>(*kind)] = parse_field(area_tok, "area=");
    }
    base.check();
    return base;
}

} // namespace drsim
