#pragma once

#include "drsim/netlist.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace drsim {

enum class StageKind : uint8_t { Sbfa, Dbfa };

// One ripple-carry adder configuration: total width plus the ordered stage
// list, least significant first. SBFA stages consume one bit pair, DBFA
// stages two; SBFA stages, when present, occupy the least significant
// positions and therefore precede all DBFA stages.
struct AdderComposition {
    unsigned width = 0;
    std::vector<StageKind> stages;

    // Parses e.g. "sbfa*2+dbfa*15" (least significant first). The width is
    // inferred from the stage list and cross-checked against expect_width
    // when given. Throws ConfigError on syntax or invariant violations.
    static AdderComposition parse(std::string_view text,
                                  std::optional<unsigned> expect_width = std::nullopt);

    std::string to_string() const; // canonical composition string
    std::string short_tag() const; // compact form used in netlist names, e.g. "s2d15"
    void check() const;            // throws ConfigError when invariants do not hold
};

// Early output single-bit full adder: complex gates CG1..CG4 (AO22), four
// 2-input C-elements and two OR2. Ports A, B, CIN, SUM, COUT.
Netlist build_sbfa();

// Early output dual-bit full adder synthesized from the dual-rail sum/carry
// equations with a shared propagate term; the carry output is one AO21 away
// from CIN on both rails. Ports A0, A1, B0, B1, CIN, SUM0, SUM1, COUT.
Netlist build_dbfa();

// One OR2 per rail pair feeding a balanced binary C-element tree; the single
// output net is DONE. Ports P0..P{n-1}.
Netlist build_completion_detector(unsigned pairs);

// Stages chained through dual-rail carries. Ports A0..A{w-1}, B0..B{w-1},
// CIN, SUM0..SUM{w-1}, COUT; with_cd adds a completion detector over all
// 2*width+1 input pairs driving DONE.
Netlist build_rca(const AdderComposition& comp, bool with_cd);

// Sum-of-products tables for the adder blocks, stored as data. Every product
// list is the ground truth for the functional and disjointness checks.
struct Product {
    std::vector<std::string> literals; // input rail names, e.g. "A1", "CIN0"
};

struct RailEquation {
    std::string rail; // output rail name, e.g. "SUM1"
    std::vector<Product> products;
};

struct PortPairSpec {
    std::string port;  // netlist port name, e.g. "A" or "A1"
    std::string rail1; // rail literal names used in the equations
    std::string rail0;
};

struct DsopEquationTable {
    std::string block;   // "sbfa" | "dbfa"
    unsigned operand_bits; // bits per operand consumed by the block
    std::vector<PortPairSpec> inputs;  // operand pairs first, CIN last
    std::vector<PortPairSpec> outputs; // sums first, carry last
    std::vector<RailEquation> equations;

    const RailEquation& equation(std::string_view rail) const; // throws BuildError
};

const DsopEquationTable& sbfa_equation_table();
const DsopEquationTable& dbfa_equation_table();

} // namespace drsim
