#include "drsim/analysis.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <thread>

namespace drsim {

namespace {

std::string hex(uint64_t v) {
    std::ostringstream out;
    out << "0x" << std::hex << v;
    return out.str();
}

std::string vector_str(const Vector3& v) {
    return "a=" + hex(v.a) + " b=" + hex(v.b) + " cin=" + std::to_string(v.cin);
}

} // namespace

PathReport structural_sta(const Netlist& nl, const TimingAreaModel& model) {
    std::vector<std::string> sources, sinks;
    for (const Net& n : nl.nets()) {
        if (n.kind == NetKind::PrimaryInput) sources.push_back(n.name);
        if (n.kind == NetKind::PrimaryOutput) sinks.push_back(n.name);
    }
    return structural_sta(nl, model, sources, sinks);
}

PathReport structural_sta(const Netlist& nl, const TimingAreaModel& model,
                          std::span<const std::string> source_nets,
                          std::span<const std::string> sink_nets) {
    auto order = nl.topo_order(true);
    if (!order) throw BuildError("netlist '" + nl.name() + "' has a cycle through C2 cells");
    constexpr int64_t kUnreached = -1;
    std::vector<int64_t> arrival(nl.nets().size(), kUnreached);
    std::vector<uint32_t> via_cell(nl.nets().size(), kNoCell);
    for (const std::string& s : source_nets) arrival[nl.net(s)] = 0;
    for (uint32_t ci : *order) {
        const CellInstance& c = nl.cells()[ci];
        int64_t best = kUnreached;
        for (NetId in : c.inputs)
            if (arrival[in] != kUnreached) best = std::max(best, arrival[in]);
        if (best == kUnreached) continue;
        int64_t t = best + model.delay_of(c.kind);
        if (t > arrival[c.output]) {
            arrival[c.output] = t;
            via_cell[c.output] = ci;
        }
    }
    PathReport report;
    NetId best_sink = kNoCell;
    for (const std::string& s : sink_nets) {
        NetId n = nl.net(s);
        if (arrival[n] != kUnreached && (best_sink == kNoCell || arrival[n] > arrival[best_sink]))
            best_sink = n;
    }
    if (best_sink == kNoCell) return report; // no source reaches a sink
    report.length = static_cast<int>(arrival[best_sink]);
    report.to = nl.nets()[best_sink].name;
    NetId cursor = best_sink;
    while (via_cell[cursor] != kNoCell) {
        const CellInstance& c = nl.cells()[via_cell[cursor]];
        report.cells.push_back(c.id);
        // step to the latest-arriving input (first such input for determinism)
        NetId next = cursor;
        int64_t need = arrival[cursor] - model.delay_of(c.kind);
        for (NetId in : c.inputs) {
            if (arrival[in] == need) {
                next = in;
                break;
            }
        }
        if (next == cursor) break;
        cursor = next;
    }
    std::reverse(report.cells.begin(), report.cells.end());
    report.from = nl.nets()[cursor].name;
    return report;
}

AreaReport area_report(const Netlist& nl, const TimingAreaModel& model) {
    AreaReport report;
    for (const CellInstance& c : nl.cells()) ++report.census[c.kind];
    for (const auto& [kind, count] : report.census)
        report.total += static_cast<long>(count) * model.area_of(kind);
    return report;
}

uint8_t eval_product(const Product& p, const std::map<std::string, uint8_t>& rails) {
    for (const std::string& lit : p.literals) {
        auto it = rails.find(lit);
        if (it == rails.end()) throw BuildError("equation literal '" + lit + "' has no rail value");
        if (!it->second) return 0;
    }
    return 1;
}

uint8_t eval_rail(const RailEquation& eq, const std::map<std::string, uint8_t>& rails) {
    for (const Product& p : eq.products)
        if (eval_product(p, rails)) return 1;
    return 0;
}

std::map<std::string, uint8_t> table_rails(const DsopEquationTable& table, uint64_t a, uint64_t b,
                                           int cin) {
    std::map<std::string, uint8_t> rails;
    // Operand pair order in the table is most significant bit first for
    // multi-bit operands (A1, A0); bind by position from the port name.
    for (const PortPairSpec& in : table.inputs) {
        int bit;
        if (in.port == "CIN") {
            bit = cin & 1;
        } else {
            unsigned index = 0;
            if (in.port.size() > 1) index = static_cast<unsigned>(in.port[1] - '0');
            uint64_t operand = in.port[0] == 'A' ? a : b;
            bit = static_cast<int>((operand >> index) & 1);
        }
        rails[in.rail1] = static_cast<uint8_t>(bit);
        rails[in.rail0] = static_cast<uint8_t>(!bit);
    }
    return rails;
}

DsopCheck check_dsop(const DsopEquationTable& table) {
    DsopCheck check;
    const uint64_t operand_max = uint64_t{1} << table.operand_bits;
    for (uint64_t a = 0; a < operand_max; ++a)
        for (uint64_t b = 0; b < operand_max; ++b)
            for (int cin = 0; cin < 2; ++cin) {
                auto rails = table_rails(table, a, b, cin);
                std::string word = "a=" + std::to_string(a) + " b=" + std::to_string(b) +
                                   " cin=" + std::to_string(cin);
                for (const RailEquation& eq : table.equations) {
                    int true_products = 0;
                    for (const Product& p : eq.products) true_products += eval_product(p, rails);
                    if (true_products > 1) {
                        check.pass = false;
                        check.witnesses.push_back("disjointness: " + std::to_string(true_products) +
                                                  " products of " + eq.rail + " true at " + word);
                    }
                }
                for (const PortPairSpec& out : table.outputs) {
                    int asserted = eval_rail(table.equation(out.rail1), rails) +
                                   eval_rail(table.equation(out.rail0), rails);
                    if (asserted != 1) {
                        check.pass = false;
                        check.witnesses.push_back("completeness: output " + out.port + " asserts " +
                                                  std::to_string(asserted) + " rails at " + word);
                    }
                }
            }
    return check;
}

DsopCheck check_monotonic_cover(const Netlist& nl, const TimingAreaModel& model,
                                const DsopEquationTable& table) {
    DsopCheck check;
    Simulator sim(nl, model);
    const uint64_t operand_max = uint64_t{1} << table.operand_bits;
    for (uint64_t a = 0; a < operand_max; ++a)
        for (uint64_t b = 0; b < operand_max; ++b)
            for (int cin = 0; cin < 2; ++cin) {
                auto rails = table_rails(table, a, b, cin);
                std::string word = "a=" + std::to_string(a) + " b=" + std::to_string(b) +
                                   " cin=" + std::to_string(cin);
                sim.reset();
                for (const PortPairSpec& in : table.inputs) {
                    auto port = nl.find_port(in.port);
                    if (!port) {
                        check.pass = false;
                        check.witnesses.push_back("netlist lacks port " + in.port);
                        return check;
                    }
                    sim.stage_pair(*port, rails[in.rail1] ? 1 : 0);
                }
                sim.settle();
                for (const PortPairSpec& out : table.outputs) {
                    const RailEquation& eq1 = table.equation(out.rail1);
                    const RailEquation& eq0 = table.equation(out.rail0);
                    uint8_t want1 = eval_rail(eq1, rails);
                    const RailEquation& asserted_eq = want1 ? eq1 : eq0;
                    int true_products = 0;
                    for (const Product& p : asserted_eq.products)
                        true_products += eval_product(p, rails);
                    if (true_products != 1) {
                        check.pass = false;
                        check.witnesses.push_back("cover: " + std::to_string(true_products) +
                                                  " active products for " + asserted_eq.rail +
                                                  " at " + word);
                    }
                    auto port = nl.find_port(out.port);
                    RailPair sim_pair = sim.pair_value(*port);
                    if (sim_pair.rail1 != want1 || sim_pair.rail0 != !want1) {
                        check.pass = false;
                        check.witnesses.push_back("simulation/equation mismatch on " + out.port +
                                                  " at " + word);
                    }
                }
            }
    return check;
}

std::vector<Vector3> carry_chain_vectors(unsigned width) {
    if (width < 1 || width > 64) throw ConfigError("width must be in [1,64]");
    const uint64_t mask = width == 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1;
    const uint64_t ones = mask;
    const uint64_t alt_a = UINT64_C(0x5555555555555555) & mask;
    const uint64_t alt_b = UINT64_C(0xaaaaaaaaaaaaaaaa) & mask;
    // Full propagate chains from both carry sources, generate-fed chains,
    // kill cases, and alternating patterns.
    return {
        {ones, 0, 1}, {0, ones, 1}, {ones, 1, 0}, {1, ones, 0}, {ones, 0, 0}, {0, ones, 0},
        {ones, ones, 0}, {ones, ones, 1}, {0, 0, 0}, {0, 0, 1}, {alt_a, alt_b, 0}, {alt_a, alt_b, 1},
    };
}

std::vector<Vector3> random_vectors(unsigned width, uint64_t seed, size_t count) {
    if (width < 1 || width > 64) throw ConfigError("width must be in [1,64]");
    const uint64_t mask = width == 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1;
    std::mt19937_64 rng(seed);
    std::vector<Vector3> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        Vector3 v;
        v.a = rng() & mask;
        v.b = rng() & mask;
        v.cin = static_cast<int>(rng() & 1);
        out.push_back(v);
    }
    return out;
}

namespace {

struct WorkerResult {
    bool pass = true;
    size_t failed_index = 0;
    std::string fail_reason;
    uint64_t max_latency = 0;
    size_t latency_index = 0;
    bool has_latency = false;
    size_t protocol_violations = 0;
    size_t vectors_run = 0;
};

} // namespace

VerifyResult verify_adder(const Netlist& nl, const TimingAreaModel& model,
                          const VerifyOptions& options) {
    AdderPorts ports = discover_adder_ports(nl);
    const unsigned width = ports.width();
    size_t total = 0;
    std::vector<Vector3> list;
    switch (options.mode) {
    case VerifyOptions::Mode::Exhaustive:
        if (width > 16) throw ConfigError("exhaustive verification is limited to width <= 16");
        total = size_t{1} << (2 * width + 1);
        break;
    case VerifyOptions::Mode::Random:
        list = random_vectors(width, options.seed, options.count);
        total = list.size();
        break;
    case VerifyOptions::Mode::Explicit:
        list = options.vectors;
        total = list.size();
        break;
    }
    if (total == 0) throw ConfigError("no vectors to verify");
    const uint64_t mask = width == 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1;
    auto vector_at = [&](size_t i) -> Vector3 {
        if (!list.empty()) return list[i];
        Vector3 v;
        v.a = static_cast<uint64_t>(i) & mask;
        v.b = (static_cast<uint64_t>(i) >> width) & mask;
        v.cin = static_cast<int>((static_cast<uint64_t>(i) >> (2 * width)) & 1);
        return v;
    };

    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(total)));
    std::vector<WorkerResult> results(jobs);
    auto run_range = [&](size_t begin, size_t end, WorkerResult& r) {
        try {
            AdderSession session(nl, model);
            for (size_t i = begin; i < end; ++i) {
                Vector3 v = vector_at(i);
                CycleReport rep;
                try {
                    rep = session.run_cycle(v.a, v.b, v.cin);
                } catch (const SimError& e) {
                    r.pass = false;
                    r.failed_index = i;
                    r.fail_reason = e.what();
                    return;
                }
                ++r.vectors_run;
                const uint64_t expect = v.a + v.b + static_cast<uint64_t>(v.cin);
                const uint64_t got = rep.sum | (static_cast<uint64_t>(rep.carry_out) << width);
                if (got != expect) {
                    r.pass = false;
                    r.failed_index = i;
                    r.fail_reason = "decoded result " + std::to_string(got) + " != expected " +
                                    std::to_string(expect);
                    return;
                }
                if (options.protocol_checks) {
                    size_t violations = session.protocol_violations();
                    if (!rep.returned_to_reset) ++violations;
                    if (violations) {
                        r.protocol_violations += violations;
                        r.pass = false;
                        r.failed_index = i;
                        r.fail_reason = "protocol violations in handshake cycle";
                        return;
                    }
                }
                if (!r.has_latency || rep.forward_latency > r.max_latency) {
                    r.max_latency = rep.forward_latency;
                    r.latency_index = i;
                    r.has_latency = true;
                }
            }
        } catch (const Error& e) {
            r.pass = false;
            r.failed_index = begin;
            r.fail_reason = e.what();
        }
    };

    if (jobs == 1) {
        run_range(0, total, results[0]);
    } else {
        std::vector<std::thread> threads;
        const size_t chunk = (total + jobs - 1) / jobs;
        for (unsigned j = 0; j < jobs; ++j) {
            size_t begin = std::min<size_t>(static_cast<size_t>(j) * chunk, total);
            size_t end = std::min<size_t>(begin + chunk, total);
            threads.emplace_back(run_range, begin, end, std::ref(results[j]));
        }
        for (std::thread& t : threads) t.join();
    }

    VerifyResult out;
    bool have_fail = false;
    size_t fail_index = 0;
    std::string fail_reason;
    bool have_latency = false;
    size_t latency_index = 0;
    for (const WorkerResult& r : results) {
        out.vectors_run += r.vectors_run;
        out.protocol_violations += r.protocol_violations;
        if (!r.pass && (!have_fail || r.failed_index < fail_index)) {
            have_fail = true;
            fail_index = r.failed_index;
            fail_reason = r.fail_reason;
        }
        if (r.has_latency &&
            (!have_latency || r.max_latency > out.max_forward_latency ||
             (r.max_latency == out.max_forward_latency && r.latency_index < latency_index))) {
            have_latency = true;
            out.max_forward_latency = r.max_latency;
            latency_index = r.latency_index;
        }
    }
    if (have_latency) out.latency_argmax = vector_at(latency_index);
    if (have_fail) {
        out.pass = false;
        Counterexample cex;
        cex.vector = vector_at(fail_index);
        cex.reason = fail_reason;
        // Replay the failing vector for a trace excerpt.
        try {
            AdderSession session(nl, model);
            try {
                session.run_cycle(cex.vector.a, cex.vector.b, cex.vector.cin);
            } catch (const SimError&) {
            }
            std::string dump = dump_trace(nl, session.sim().trace());
            constexpr size_t kExcerpt = 2000;
            cex.trace_excerpt =
                dump.size() <= kExcerpt ? dump : dump.substr(0, kExcerpt) + "...\n";
        } catch (const Error&) {
        }
        out.counterexample = std::move(cex);
    }
    return out;
}

std::vector<ComparisonRow> compare(unsigned width, std::span<const AdderComposition> comps,
                                   const TimingAreaModel& model, const CompareOptions& options) {
    std::vector<ComparisonRow> rows;
    for (const AdderComposition& comp : comps) {
        if (comp.width != width)
            throw ConfigError("composition '" + comp.to_string() + "' does not match width " +
                              std::to_string(width));
        Netlist nl = build_rca(comp, options.with_cd);
        VerifyOptions vopt;
        vopt.mode = VerifyOptions::Mode::Explicit;
        vopt.vectors = carry_chain_vectors(width);
        auto randoms = random_vectors(width, options.seed, options.random_count);
        vopt.vectors.insert(vopt.vectors.end(), randoms.begin(), randoms.end());
        vopt.jobs = options.jobs;
        VerifyResult vr = verify_adder(nl, model, vopt);
        if (!vr.pass)
            throw SimError("configuration '" + comp.to_string() + "' failed verification: " +
                           (vr.counterexample ? vr.counterexample->reason : "unknown"));
        ComparisonRow row;
        row.legend = comp.to_string();
        row.composition = comp.short_tag();
        row.sim_forward_latency = vr.max_forward_latency;
        row.latency_argmax = vr.latency_argmax;
        row.structural_longest_path = structural_sta(nl, model).length;
        AreaReport area = area_report(nl, model);
        row.area_transistors = area.total;
        row.census = std::move(area.census);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::vector<std::vector<std::string>> comparison_cells(std::span<const ComparisonRow> rows) {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header{"legend",          "composition",       "latency_units",
                                    "longest_path_units", "area_transistors"};
    for (CellKind k : all_cell_kinds()) header.push_back("n_" + std::string(to_string(k)));
    cells.push_back(std::move(header));
    for (const ComparisonRow& row : rows) {
        std::vector<std::string> line{row.legend, row.composition,
                                      std::to_string(row.sim_forward_latency),
                                      std::to_string(row.structural_longest_path),
                                      std::to_string(row.area_transistors)};
        for (CellKind k : all_cell_kinds()) {
            auto it = row.census.find(k);
            line.push_back(std::to_string(it == row.census.end() ? 0 : it->second));
        }
        cells.push_back(std::move(line));
    }
    return cells;
}

std::string ordering_line(std::span<const ComparisonRow> rows, const char* label,
                          uint64_t (*key)(const ComparisonRow&)) {
    std::vector<size_t> order(rows.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t x, size_t y) { return key(rows[x]) < key(rows[y]); });
    std::string out = std::string("# ") + label + ":";
    for (size_t i = 0; i < order.size(); ++i) {
        if (i)
            out += key(rows[order[i]]) == key(rows[order[i - 1]]) ? " =" : " <";
        out += " " + rows[order[i]].legend + " [" + std::to_string(key(rows[order[i]])) + "]";
    }
    return out + "\n";
}

} // namespace

std::string render_csv(std::span<const ComparisonRow> rows) {
    std::string out;
    for (const auto& line : comparison_cells(rows)) {
        for (size_t i = 0; i < line.size(); ++i) {
            if (i) out += ',';
            out += line[i];
        }
        out += '\n';
    }
    return out;
}

std::string render_table(std::span<const ComparisonRow> rows) {
    auto cells = comparison_cells(rows);
    std::vector<size_t> width(cells[0].size(), 0);
    for (const auto& line : cells)
        for (size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
    std::string out;
    for (const auto& line : cells) {
        for (size_t i = 0; i < line.size(); ++i) {
            if (i) out += "  ";
            out += line[i];
            out.append(width[i] - line[i].size(), ' ');
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += '\n';
    }
    return out;
}

std::string render_ordering_footer(std::span<const ComparisonRow> rows) {
    std::string out = ordering_line(rows, "latency order",
                                    [](const ComparisonRow& r) { return r.sim_forward_latency; });
    out += ordering_line(rows, "area order", [](const ComparisonRow& r) {
        return static_cast<uint64_t>(r.area_transistors);
    });
    return out;
}

} // namespace drsim
