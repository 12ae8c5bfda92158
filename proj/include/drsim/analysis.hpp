#pragma once

#include "drsim/generators.hpp"
#include "drsim/simulator.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace drsim {

struct PathReport {
    int length = 0; // sum of cell delays along the path
    std::vector<std::string> cells;
    std::string from;
    std::string to;
};

// Longest weighted path from the source nets to the sink nets over the full
// cell graph; C2 contributes its whole delay (worst-case traversal). Default
// endpoints are all primary inputs and all primary outputs. Throws BuildError
// when the graph has a cycle even through C2 cells.
PathReport structural_sta(const Netlist& nl, const TimingAreaModel& model);
PathReport structural_sta(const Netlist& nl, const TimingAreaModel& model,
                          std::span<const std::string> source_nets,
                          std::span<const std::string> sink_nets);

struct AreaReport {
    long total = 0; // transistors
    std::map<CellKind, int> census;
};

AreaReport area_report(const Netlist& nl, const TimingAreaModel& model);

uint8_t eval_product(const Product& p, const std::map<std::string, uint8_t>& rails);
uint8_t eval_rail(const RailEquation& eq, const std::map<std::string, uint8_t>& rails);

// Rail assignment for one valid input code word of a block table.
std::map<std::string, uint8_t> table_rails(const DsopEquationTable& table, uint64_t a, uint64_t b,
                                           int cin);

struct DsopCheck {
    bool pass = true;
    std::vector<std::string> witnesses;
};

// Over all valid input code words of the block: within each output-rail
// equation at most one product is true, and exactly one rail per output pair
// is asserted.
DsopCheck check_dsop(const DsopEquationTable& table);

// For each valid input code word: exactly one product of the asserted rail's
// equation is true, and the simulated netlist asserts that rail (and only it).
DsopCheck check_monotonic_cover(const Netlist& nl, const TimingAreaModel& model,
                                const DsopEquationTable& table);

struct VerifyOptions {
    enum class Mode { Exhaustive, Random, Explicit };
    Mode mode = Mode::Random;
    uint64_t seed = 1;
    size_t count = 1000;             // Random mode
    std::vector<Vector3> vectors;    // Explicit mode
    unsigned jobs = 1;
    bool protocol_checks = true;
};

struct Counterexample {
    Vector3 vector;
    std::string reason;
    std::string trace_excerpt;
};

struct VerifyResult {
    bool pass = true;
    size_t vectors_run = 0;
    std::optional<Counterexample> counterexample;
    uint64_t max_forward_latency = 0;
    Vector3 latency_argmax;
    size_t protocol_violations = 0;
};

// Runs one full handshake cycle per vector and checks the decoded result
// against a + b + cin, plus the protocol properties when enabled. The result
// is independent of the worker count: the counterexample is the first
// failing vector in enumeration order and latency ties resolve to the
// earliest vector.
VerifyResult verify_adder(const Netlist& nl, const TimingAreaModel& model,
                          const VerifyOptions& options);

// Deterministic vector families. Random operands are drawn by masking a
// seeded mt19937_64 stream: a, then b (width bits each), then cin (1 bit).
std::vector<Vector3> carry_chain_vectors(unsigned width);
std::vector<Vector3> random_vectors(unsigned width, uint64_t seed, size_t count);

struct ComparisonRow {
    std::string legend;
    std::string composition;
    uint64_t sim_forward_latency = 0;
    Vector3 latency_argmax;
    int structural_longest_path = 0;
    long area_transistors = 0;
    std::map<CellKind, int> census;
};

struct CompareOptions {
    uint64_t seed = 1;
    size_t random_count = 1000;
    unsigned jobs = 1;
    bool with_cd = true;
};

// One row per configuration: worst observed forward latency over the carry
// chain family plus seeded random vectors, the structural longest path, and
// the transistor area.
std::vector<ComparisonRow> compare(unsigned width, std::span<const AdderComposition> comps,
                                   const TimingAreaModel& model, const CompareOptions& options);

std::string render_csv(std::span<const ComparisonRow> rows);
std::string render_table(std::span<const ComparisonRow> rows);
// "# latency order:" / "# area order:" summary lines, ascending.
std::string render_ordering_footer(std::span<const ComparisonRow> rows);

} // namespace drsim
