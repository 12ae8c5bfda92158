#include "drsim/generators.hpp"

#include <charconv>

namespace drsim {

namespace {

struct RailRef {
    std::string r1;
    std::string r0;
};

RailRef pair_nets(const std::string& port) { return {port + "_1", port + "_0"}; }

// CG1 = A1B1 + A0B0 and CG2 = A1B0 + A0B1 are shared across the sum and
// carry logic: A1.B1 reappears in CG3 and A0.B0 in CG4, the redundant direct
// generate/kill paths that make the carry output early.
void emit_sbfa(Netlist& nl, const std::string& p, const RailRef& a, const RailRef& b,
               const RailRef& cin, const RailRef& sum, const RailRef& cout) {
    const std::string cg1 = p + "_cg1";
    const std::string cg2 = p + "_cg2";
    nl.add_cell(cg1, CellKind::AO22, {a.r1, b.r1, a.r0, b.r0}, cg1);
    nl.add_cell(cg2, CellKind::AO22, {a.r1, b.r0, a.r0, b.r1}, cg2);
    nl.add_cell(p + "_cg3", CellKind::AO22, {a.r1, b.r1, cg2, cin.r1}, cout.r1);
    nl.add_cell(p + "_cg4", CellKind::AO22, {a.r0, b.r0, cg2, cin.r0}, cout.r0);
    const std::string t1a = p + "_t1a";
    const std::string t1b = p + "_t1b";
    const std::string t0a = p + "_t0a";
    const std::string t0b = p + "_t0b";
    nl.add_cell(t1a, CellKind::C2, {cg1, cin.r1}, t1a);
    nl.add_cell(t1b, CellKind::C2, {cg2, cin.r0}, t1b);
    nl.add_cell(t0a, CellKind::C2, {cg1, cin.r0}, t0a);
    nl.add_cell(t0b, CellKind::C2, {cg2, cin.r1}, t0b);
    nl.add_cell(p + "_sum1", CellKind::OR2, {t1a, t1b}, sum.r1);
    nl.add_cell(p + "_sum0", CellKind::OR2, {t0a, t0b}, sum.r0);
}

// Dual-bit stage. The per-position difference/equality products factor the
// carry logic: prop = xor_lo & xor_hi is the shared propagate, so both carry
// rails are a single AO21 away from CIN, and the longest path from the
// operand inputs to the carry output is AO22 -> AND2 -> AO21. The CIN-free
// sum products (s11f/s10f) feed their OR directly, bypassing the C-elements;
// together with the direct generate/kill terms they make set and reset of
// the outputs possible from an input subset.
void emit_dbfa(Netlist& nl, const std::string& p, const RailRef& a0, const RailRef& a1,
               const RailRef& b0, const RailRef& b1, const RailRef& cin, const RailRef& sum0,
               const RailRef& sum1, const RailRef& cout) {
    auto internal = [&p](const char* sig) { return p + "_" + sig; };
    auto unary = [&](const char* sig, CellKind kind, std::vector<std::string> ins) {
        std::string net = internal(sig);
        nl.add_cell(net, kind, std::move(ins), net);
        return net;
    };
    const std::string xor_lo = unary("xor_lo", CellKind::AO22, {a0.r0, b0.r1, a0.r1, b0.r0});
    const std::string xnor_lo = unary("xnor_lo", CellKind::AO22, {a0.r1, b0.r1, a0.r0, b0.r0});
    const std::string xor_hi = unary("xor_hi", CellKind::AO22, {a1.r0, b1.r1, a1.r1, b1.r0});
    const std::string xnor_hi = unary("xnor_hi", CellKind::AO22, {a1.r1, b1.r1, a1.r0, b1.r0});
    const std::string and_l0 = unary("and_l0", CellKind::AND2, {a0.r0, b0.r0});
    const std::string and_l1 = unary("and_l1", CellKind::AND2, {a0.r1, b0.r1});
    const std::string and_h0 = unary("and_h0", CellKind::AND2, {a1.r0, b1.r0});
    const std::string and_h1 = unary("and_h1", CellKind::AND2, {a1.r1, b1.r1});
    const std::string prop = unary("prop", CellKind::AND2, {xor_lo, xor_hi});
    const std::string hprop = unary("hprop", CellKind::AND2, {xor_lo, xnor_hi});
    const std::string gen = unary("gen", CellKind::AO21, {and_l1, xor_hi, and_h1});
    const std::string kill = unary("kill", CellKind::AO21, {and_l0, xor_hi, and_h0});
    nl.add_cell(p + "_cout1", CellKind::AO21, {prop, cin.r1, gen}, cout.r1);
    nl.add_cell(p + "_cout0", CellKind::AO21, {prop, cin.r0, kill}, cout.r0);

    const std::string s01a = unary("s01a", CellKind::C2, {xnor_lo, cin.r1});
    const std::string s01b = unary("s01b", CellKind::C2, {xor_lo, cin.r0});
    nl.add_cell(p + "_sum01", CellKind::OR2, {s01a, s01b}, sum0.r1);
    const std::string s00a = unary("s00a", CellKind::C2, {xor_lo, cin.r1});
    const std::string s00b = unary("s00b", CellKind::C2, {xnor_lo, cin.r0});
    nl.add_cell(p + "_sum00", CellKind::OR2, {s00a, s00b}, sum0.r0);

    const std::string s11a = unary("s11a", CellKind::C2, {hprop, cin.r1});
    const std::string s11b = unary("s11b", CellKind::C2, {prop, cin.r0});
    const std::string s11f = unary("s11f", CellKind::AO22, {and_l1, xnor_hi, and_l0, xor_hi});
    nl.add_cell(p + "_sum11", CellKind::OR3, {s11a, s11b, s11f}, sum1.r1);
    const std::string s10a = unary("s10a", CellKind::C2, {prop, cin.r1});
    const std::string s10b = unary("s10b", CellKind::C2, {hprop, cin.r0});
    const std::string s10f = unary("s10f", CellKind::AO22, {and_l0, xnor_hi, and_l1, xor_hi});
    nl.add_cell(p + "_sum10", CellKind::OR3, {s10a, s10b, s10f}, sum1.r0);
}

// OR per rail pair, then a balanced binary C-element tree. Odd elements of a
// level carry over to the next level unchanged.
void emit_completion_detector(Netlist& nl, const std::string& p,
                              const std::vector<RailRef>& pairs, const std::string& done) {
    std::vector<std::string> level;
    level.reserve(pairs.size());
    if (pairs.size() == 1) {
        nl.add_cell(p + "_or0", CellKind::OR2, {pairs[0].r1, pairs[0].r0}, done);
        return;
    }
    for (size_t i = 0; i < pairs.size(); ++i) {
        std::string net = p + "_or" + std::to_string(i);
        nl.add_cell(net, CellKind::OR2, {pairs[i].r1, pairs[i].r0}, net);
        level.push_back(std::move(net));
    }
    unsigned depth = 0;
    while (level.size() > 1) {
        std::vector<std::string> next;
        next.reserve((level.size() + 1) / 2);
        for (size_t i = 0; i + 1 < level.size(); i += 2) {
            bool last = level.size() == 2;
            std::string net =
                last ? done : p + "_c" + std::to_string(depth) + "_" + std::to_string(i / 2);
            nl.add_cell(p + "_c" + std::to_string(depth) + "_" + std::to_string(i / 2),
                        CellKind::C2, {level[i], level[i + 1]}, net);
            next.push_back(std::move(net));
        }
        if (level.size() % 2) next.push_back(level.back());
        level = std::move(next);
        ++depth;
    }
}

} // namespace

AdderComposition AdderComposition::parse(std::string_view text,
                                         std::optional<unsigned> expect_width) {
    AdderComposition comp;
    size_t pos = 0;
    if (text.empty()) throw ConfigError("empty composition");
    while (pos <= text.size()) {
        size_t end = text.find('+', pos);
        std::string_view tok =
            text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        StageKind kind;
        std::string_view rest;
        if (tok.rfind("sbfa", 0) == 0) {
            kind = StageKind::Sbfa;
            rest = tok.substr(4);
        } else if (tok.rfind("dbfa", 0) == 0) {
            kind = StageKind::Dbfa;
            rest = tok.substr(4);
        } else {
            throw ConfigError("bad composition token '" + std::string(tok) +
                              "' (expected sbfa[*N] or dbfa[*N])");
        }
        unsigned count = 1;
        if (!rest.empty()) {
            if (rest[0] != '*')
                throw ConfigError("bad composition token '" + std::string(tok) + "'");
            rest.remove_prefix(1);
            auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), count);
            if (ec != std::errc{} || ptr != rest.data() + rest.size() || count == 0)
                throw ConfigError("bad stage count in '" + std::string(tok) + "'");
        }
        comp.stages.insert(comp.stages.end(), count, kind);
        if (end == std::string_view::npos) break;
        pos = end + 1;
        if (pos == text.size()) throw ConfigError("trailing '+' in composition");
    }
    for (StageKind s : comp.stages) comp.width += s == StageKind::Sbfa ? 1 : 2;
    if (expect_width && *expect_width != comp.width)
        throw ConfigError("composition covers " + std::to_string(comp.width) +
                          " bits but width " + std::to_string(*expect_width) + " was requested");
    comp.check();
    return comp;
}

void AdderComposition::check() const {
    if (stages.empty()) throw ConfigError("composition has no stages");
    unsigned bits = 0;
    bool seen_dbfa = false;
    for (StageKind s : stages) {
        if (s == StageKind::Sbfa) {
            if (seen_dbfa)
                throw ConfigError("SBFA stages must precede all DBFA stages "
                                  "(least significant positions)");
            bits += 1;
        } else {
            seen_dbfa = true;
            bits += 2;
        }
    }
    if (bits != width)
        throw ConfigError("composition covers " + std::to_string(bits) + " bits, width field says " +
                          std::to_string(width));
}

std::string AdderComposition::to_string() const {
    std::string out;
    size_t i = 0;
    while (i < stages.size()) {
        size_t j = i;
        while (j < stages.size() && stages[j] == stages[i]) ++j;
        if (!out.empty()) out += '+';
        out += stages[i] == StageKind::Sbfa ? "sbfa" : "dbfa";
        if (j - i > 1) out += "*" + std::to_string(j - i);
        i = j;
    }
    return out;
}

std::string AdderComposition::short_tag() const {
    std::string out;
    size_t i = 0;
    while (i < stages.size()) {
        size_t j = i;
        while (j < stages.size() && stages[j] == stages[i]) ++j;
        out += stages[i] == StageKind::Sbfa ? 's' : 'd';
        out += std::to_string(j - i);
        i = j;
    }
    return out;
}

Netlist build_sbfa() {
    Netlist nl("sbfa");
    for (const char* port : {"A", "B", "CIN"}) {
        nl.add_net(std::string(port) + "_1", NetKind::PrimaryInput);
        nl.add_net(std::string(port) + "_0", NetKind::PrimaryInput);
    }
    for (const char* port : {"SUM", "COUT"}) {
        nl.add_net(std::string(port) + "_1", NetKind::PrimaryOutput);
        nl.add_net(std::string(port) + "_0", NetKind::PrimaryOutput);
    }
    for (const char* port : {"A", "B", "CIN", "SUM", "COUT"})
        nl.mark_port(port, std::string(port) + "_1", std::string(port) + "_0");
    emit_sbfa(nl, "s0", pair_nets("A"), pair_nets("B"), pair_nets("CIN"), pair_nets("SUM"),
              pair_nets("COUT"));
    return nl;
}

Netlist build_dbfa() {
    Netlist nl("dbfa");
    for (const char* port : {"A0", "A1", "B0", "B1", "CIN"}) {
        nl.add_net(std::string(port) + "_1", NetKind::PrimaryInput);
        nl.add_net(std::string(port) + "_0", NetKind::PrimaryInput);
    }
    for (const char* port : {"SUM0", "SUM1", "COUT"}) {
        nl.add_net(std::string(port) + "_1", NetKind::PrimaryOutput);
        nl.add_net(std::string(port) + "_0", NetKind::PrimaryOutput);
    }
    for (const char* port : {"A0", "A1", "B0", "B1", "CIN", "SUM0", "SUM1", "COUT"})
        nl.mark_port(port, std::string(port) + "_1", std::string(port) + "_0");
    emit_dbfa(nl, "s0", pair_nets("A0"), pair_nets("A1"), pair_nets("B0"), pair_nets("B1"),
              pair_nets("CIN"), pair_nets("SUM0"), pair_nets("SUM1"), pair_nets("COUT"));
    return nl;
}

Netlist build_completion_detector(unsigned pairs) {
    if (pairs < 1) throw ConfigError("completion detector needs at least one rail pair");
    Netlist nl("cd" + std::to_string(pairs));
    std::vector<RailRef> refs;
    refs.reserve(pairs);
    for (unsigned i = 0; i < pairs; ++i) {
        std::string port = "P" + std::to_string(i);
        nl.add_net(port + "_1", NetKind::PrimaryInput);
        nl.add_net(port + "_0", NetKind::PrimaryInput);
        refs.push_back(pair_nets(port));
    }
    nl.add_net("DONE", NetKind::PrimaryOutput);
    for (unsigned i = 0; i < pairs; ++i) {
        std::string port = "P" + std::to_string(i);
        nl.mark_port(port, port + "_1", port + "_0");
    }
    emit_completion_detector(nl, "cd", refs, "DONE");
    return nl;
}

Netlist build_rca(const AdderComposition& comp, bool with_cd) {
    comp.check();
    const unsigned w = comp.width;
    Netlist nl("rca" + std::to_string(w) + "_" + comp.short_tag() + (with_cd ? "_cd" : ""));
    auto bit_port = [](const char* base, unsigned i) { return base + std::to_string(i); };
    for (unsigned i = 0; i < w; ++i) {
        nl.add_net(bit_port("A", i) + "_1", NetKind::PrimaryInput);
        nl.add_net(bit_port("A", i) + "_0", NetKind::PrimaryInput);
    }
    for (unsigned i = 0; i < w; ++i) {
        nl.add_net(bit_port("B", i) + "_1", NetKind::PrimaryInput);
        nl.add_net(bit_port("B", i) + "_0", NetKind::PrimaryInput);
    }
    nl.add_net("CIN_1", NetKind::PrimaryInput);
    nl.add_net("CIN_0", NetKind::PrimaryInput);
    for (unsigned i = 0; i < w; ++i) {
        nl.add_net(bit_port("SUM", i) + "_1", NetKind::PrimaryOutput);
        nl.add_net(bit_port("SUM", i) + "_0", NetKind::PrimaryOutput);
    }
    nl.add_net("COUT_1", NetKind::PrimaryOutput);
    nl.add_net("COUT_0", NetKind::PrimaryOutput);
    if (with_cd) nl.add_net("DONE", NetKind::PrimaryOutput);

    for (unsigned i = 0; i < w; ++i)
        nl.mark_port(bit_port("A", i), bit_port("A", i) + "_1", bit_port("A", i) + "_0");
    for (unsigned i = 0; i < w; ++i)
        nl.mark_port(bit_port("B", i), bit_port("B", i) + "_1", bit_port("B", i) + "_0");
    nl.mark_port("CIN", "CIN_1", "CIN_0");
    for (unsigned i = 0; i < w; ++i)
        nl.mark_port(bit_port("SUM", i), bit_port("SUM", i) + "_1", bit_port("SUM", i) + "_0");
    nl.mark_port("COUT", "COUT_1", "COUT_0");

    RailRef carry = pair_nets("CIN");
    unsigned bit = 0;
    for (size_t k = 0; k < comp.stages.size(); ++k) {
        bool last = k + 1 == comp.stages.size();
        StageKind kind = comp.stages[k];
        unsigned next_bit = bit + (kind == StageKind::Sbfa ? 1 : 2);
        RailRef out = last ? pair_nets("COUT")
                           : RailRef{"c" + std::to_string(next_bit) + "_1",
                                     "c" + std::to_string(next_bit) + "_0"};
        std::string prefix =
            (kind == StageKind::Sbfa ? "sbfa_s" : "dbfa_s") + std::to_string(k);
        if (kind == StageKind::Sbfa) {
            emit_sbfa(nl, prefix, pair_nets(bit_port("A", bit)), pair_nets(bit_port("B", bit)),
                      carry, pair_nets(bit_port("SUM", bit)), out);
        } else {
            emit_dbfa(nl, prefix, pair_nets(bit_port("A", bit)), pair_nets(bit_port("A", bit + 1)),
                      pair_nets(bit_port("B", bit)), pair_nets(bit_port("B", bit + 1)), carry,
                      pair_nets(bit_port("SUM", bit)), pair_nets(bit_port("SUM", bit + 1)), out);
        }
        carry = out;
        bit = next_bit;
    }

    if (with_cd) {
        std::vector<RailRef> cd_pairs;
        cd_pairs.reserve(2 * w + 1);
        for (unsigned i = 0; i < w; ++i) cd_pairs.push_back(pair_nets(bit_port("A", i)));
        for (unsigned i = 0; i < w; ++i) cd_pairs.push_back(pair_nets(bit_port("B", i)));
        cd_pairs.push_back(pair_nets("CIN"));
        emit_completion_detector(nl, "cd", cd_pairs, "DONE");
    }
    return nl;
}

namespace {

Product prod(std::initializer_list<const char*> literals) {
    Product p;
    for (const char* l : literals) p.literals.emplace_back(l);
    return p;
}

DsopEquationTable make_sbfa_table() {
    DsopEquationTable t;
    t.block = "sbfa";
    t.operand_bits = 1;
    t.inputs = {{"A", "A1", "A0"}, {"B", "B1", "B0"}, {"CIN", "CIN1", "CIN0"}};
    t.outputs = {{"SUM", "SUM1", "SUM0"}, {"COUT", "COUT1", "COUT0"}};
    t.equations = {
        {"SUM1",
         {prod({"A0", "B0", "CIN1"}), prod({"A0", "B1", "CIN0"}), prod({"A1", "B0", "CIN0"}),
          prod({"A1", "B1", "CIN1"})}},
        {"SUM0",
         {prod({"A0", "B0", "CIN0"}), prod({"A0", "B1", "CIN1"}), prod({"A1", "B0", "CIN1"}),
          prod({"A1", "B1", "CIN0"})}},
        {"COUT1",
         {prod({"A0", "B1", "CIN1"}), prod({"A1", "B0", "CIN1"}), prod({"A1", "B1", "CIN0"}),
          prod({"A1", "B1", "CIN1"})}},
        {"COUT0",
         {prod({"A0", "B0", "CIN0"}), prod({"A0", "B0", "CIN1"}), prod({"A0", "B1", "CIN0"}),
          prod({"A1", "B0", "CIN0"})}},
    };
    return t;
}

DsopEquationTable make_dbfa_table() {
    DsopEquationTable t;
    t.block = "dbfa";
    t.operand_bits = 2;
    t.inputs = {{"A1", "A11", "A10"},
                {"A0", "A01", "A00"},
                {"B1", "B11", "B10"},
                {"B0", "B01", "B00"},
                {"CIN", "CIN1", "CIN0"}};
    t.outputs = {{"SUM1", "SUM11", "SUM10"}, {"SUM0", "SUM01", "SUM00"},
                 {"COUT", "COUT21", "COUT20"}};
    t.equations = {
        {"SUM11",
         {prod({"A11", "A01", "B10", "B00", "CIN0"}), prod({"A10", "A01", "B11", "B00", "CIN0"}),
          prod({"A11", "A00", "B10", "B01", "CIN0"}), prod({"A10", "A00", "B11", "B01", "CIN0"}),
          prod({"A11", "A00", "B11", "B01", "CIN1"}), prod({"A11", "A01", "B11", "B00", "CIN1"}),
          prod({"A10", "A00", "B10", "B01", "CIN1"}), prod({"A10", "A01", "B10", "B00", "CIN1"}),
          prod({"A10", "A01", "B10", "B01"}), prod({"A11", "A00", "B10", "B00"}),
          prod({"A10", "A00", "B11", "B00"}), prod({"A11", "A01", "B11", "B01"})}},
        {"SUM10",
         {prod({"A11", "A01", "B10", "B00", "CIN1"}), prod({"A10", "A01", "B11", "B00", "CIN1"}),
          prod({"A11", "A00", "B10", "B01", "CIN1"}), prod({"A10", "A00", "B11", "B01", "CIN1"}),
          prod({"A10", "A01", "B10", "B00", "CIN0"}), prod({"A10", "A00", "B10", "B01", "CIN0"}),
          prod({"A11", "A01", "B11", "B00", "CIN0"}), prod({"A11", "A00", "B11", "B01", "CIN0"}),
          prod({"A11", "A00", "B11", "B00"}), prod({"A11", "A01", "B10", "B01"}),
          prod({"A10", "A01", "B11", "B01"}), prod({"A10", "A00", "B10", "B00"})}},
        {"SUM01",
         {prod({"A01", "B00", "CIN0"}), prod({"A00", "B01", "CIN0"}),
          prod({"A00", "B00", "CIN1"}), prod({"A01", "B01", "CIN1"})}},
        {"SUM00",
         {prod({"A01", "B01", "CIN0"}), prod({"A01", "B00", "CIN1"}),
          prod({"A00", "B01", "CIN1"}), prod({"A00", "B00", "CIN0"})}},
        {"COUT21",
         {prod({"A10", "A00", "B11", "B01", "CIN1"}), prod({"A11", "A00", "B10", "B01", "CIN1"}),
          prod({"A10", "A01", "B11", "B00", "CIN1"}), prod({"A11", "A01", "B10", "B00", "CIN1"}),
          prod({"A10", "A01", "B11", "B01"}), prod({"A11", "A01", "B10", "B01"}),
          prod({"A11", "B11"})}},
        {"COUT20",
         {prod({"A11", "A01", "B10", "B00", "CIN0"}), prod({"A10", "A01", "B11", "B00", "CIN0"}),
          prod({"A11", "A00", "B10", "B01", "CIN0"}), prod({"A10", "A00", "B11", "B01", "CIN0"}),
          prod({"A11", "A00", "B10", "B00"}), prod({"A10", "A00", "B11", "B00"}),
          prod({"A10", "B10"})}},
    };
    return t;
}

} // namespace

const RailEquation& DsopEquationTable::equation(std::string_view rail) const {
    for (const RailEquation& eq : equations)
        if (eq.rail == rail) return eq;
    throw BuildError("no equation for rail '" + std::string(rail) + "' in block '" + block + "'");
}

const DsopEquationTable& sbfa_equation_table() {
    static const DsopEquationTable t = make_sbfa_table();
    return t;
}

const DsopEquationTable& dbfa_equation_table() {
    static const DsopEquationTable t = make_dbfa_table();
    return t;
}

} // namespace drsim
