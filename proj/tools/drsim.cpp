// Command line front end: generate, simulate, verify, check and report on
// dual-rail asynchronous adder netlists. All commands are deterministic
// given their flags; exit codes are 0 (pass), 1 (verification or property
// failure), 2 (usage or configuration error).

#include "drsim/analysis.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace drsim;

std::string hex(uint64_t v) {
    std::ostringstream out;
    out << "0x" << std::hex << v;
    return out.str();
}

std::string vector_str(const Vector3& v) {
    return "a=" + hex(v.a) + " b=" + hex(v.b) + " cin=" + std::to_string(v.cin);
}

uint64_t parse_hex(const std::string& text, const char* what) {
    size_t used = 0;
    uint64_t value = 0;
    try {
        value = std::stoull(text, &used, 16);
    } catch (const std::exception&) {
        throw ConfigError(std::string("bad hex value for ") + what + ": '" + text + "'");
    }
    if (used != text.size())
        throw ConfigError(std::string("bad hex value for ") + what + ": '" + text + "'");
    return value;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << bytes;
}

TimingAreaModel load_model(const std::string& override_path) {
    TimingAreaModel model = default_model();
    if (override_path.empty()) return model;
    std::ifstream in(override_path);
    if (!in) throw ConfigError("cannot open model file '" + override_path + "'");
    return parse_model_overrides(in, model);
}

std::vector<Vector3> load_vectors(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open vector file '" + path + "'");
    std::vector<Vector3> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = line;
        if (auto pos = sv.find('#'); pos != std::string_view::npos) sv = sv.substr(0, pos);
        std::istringstream fields{std::string(sv)};
        std::string a, b, cin;
        if (!(fields >> a)) continue;
        if (!(fields >> b >> cin) || cin.size() != 1 || (cin != "0" && cin != "1"))
            throw ParseError("vector file line " + std::to_string(lineno) +
                             ": expected '<hexA> <hexB> <0|1>'");
        std::string trailing;
        if (fields >> trailing)
            throw ParseError("vector file line " + std::to_string(lineno) +
                             ": unexpected trailing token");
        out.push_back({parse_hex(a, "a"), parse_hex(b, "b"), cin == "1" ? 1 : 0});
    }
    if (out.empty()) throw ParseError("vector file '" + path + "' contains no vectors");
    return out;
}

struct NetlistSource {
    std::string netlist_path;
    std::string composition;
    unsigned width = 0;
    std::string block; // sbfa | dbfa | cd
    unsigned cd_pairs = 0;
    bool with_cd = false;

    Netlist resolve() const {
        if (!netlist_path.empty()) return Netlist::read_json(read_file(netlist_path));
        if (!block.empty()) {
            if (block == "sbfa") return build_sbfa();
            if (block == "dbfa") return build_dbfa();
            if (block == "cd") {
                if (cd_pairs == 0) throw ConfigError("--block cd needs --cd-pairs");
                return build_completion_detector(cd_pairs);
            }
            throw ConfigError("unknown block '" + block + "' (expected sbfa, dbfa or cd)");
        }
        if (!composition.empty()) {
            std::optional<unsigned> expect;
            if (width) expect = width;
            return build_rca(AdderComposition::parse(composition, expect), with_cd);
        }
        throw ConfigError("no netlist source given (use --netlist, --composition or --block)");
    }
};

void add_source_flags(CLI::App* cmd, NetlistSource& src, bool blocks) {
    cmd->add_option("--netlist", src.netlist_path, "netlist JSON file");
    cmd->add_option("--width", src.width, "adder width in bits");
    cmd->add_option("--composition", src.composition,
                    "stage list, least significant first, e.g. sbfa*2+dbfa*15");
    if (blocks) {
        cmd->add_option("--block", src.block, "generate a single block: sbfa, dbfa or cd");
        cmd->add_option("--cd-pairs", src.cd_pairs, "rail pairs for --block cd");
    }
}

int cmd_gen(const NetlistSource& src, const std::string& out_path) {
    Netlist nl = src.resolve();
    auto diags = nl.validate();
    if (!diags.empty()) {
        for (const auto& d : diags) std::cerr << "invalid netlist: " << d << "\n";
        return 2;
    }
    std::string bytes = nl.write_json();
    if (out_path.empty() || out_path == "-")
        std::cout << bytes;
    else
        write_file(out_path, bytes);
    return 0;
}

int cmd_sim(const std::string& netlist_path, const std::string& a_hex, const std::string& b_hex,
            int cin, const std::string& model_path, const std::string& trace_path) {
    Netlist nl = Netlist::read_json(read_file(netlist_path));
    TimingAreaModel model = load_model(model_path);
    AdderSession session(nl, model);
    uint64_t a = parse_hex(a_hex, "--a");
    uint64_t b = parse_hex(b_hex, "--b");
    CycleReport r = session.run_cycle(a, b, cin);
    std::cout << "netlist: " << nl.name() << "\n";
    std::cout << "inputs: " << vector_str({a, b, cin}) << "\n";
    std::cout << "sum=" << hex(r.sum) << " cout=" << r.carry_out << "\n";
    std::cout << "forward_latency=" << r.forward_latency << " reverse_latency=" << r.reverse_latency
              << " cycle_time=" << r.cycle_time << "\n";
    for (size_t i = 0; i < kPhaseMarkerCount; ++i)
        std::cout << "marker " << to_string(static_cast<PhaseMarker>(i)) << " t=" << r.marker_time[i]
                  << "\n";
    std::cout << "returned_to_reset=" << (r.returned_to_reset ? 1 : 0) << "\n";
    const uint64_t expect = a + b + static_cast<uint64_t>(cin);
    const unsigned w = session.width();
    const uint64_t got = r.sum | (static_cast<uint64_t>(r.carry_out) << w);
    std::cout << "result_check=" << (got == expect ? "ok" : "MISMATCH") << "\n";
    if (!trace_path.empty()) {
        std::string dump = dump_trace(nl, session.sim().trace());
        if (trace_path == "-")
            std::cout << dump;
        else
            write_file(trace_path, dump);
    }
    return got == expect && r.returned_to_reset ? 0 : 1;
}

int cmd_sta(const std::string& netlist_path, const std::string& model_path,
            const std::vector<std::string>& from, const std::vector<std::string>& to) {
    Netlist nl = Netlist::read_json(read_file(netlist_path));
    TimingAreaModel model = load_model(model_path);
    PathReport report;
    if (from.empty() && to.empty()) {
        report = structural_sta(nl, model);
    } else {
        std::vector<std::string> sources = from, sinks = to;
        if (sources.empty())
            for (const Net& n : nl.nets())
                if (n.kind == NetKind::PrimaryInput) sources.push_back(n.name);
        if (sinks.empty())
            for (const Net& n : nl.nets())
                if (n.kind == NetKind::PrimaryOutput) sinks.push_back(n.name);
        report = structural_sta(nl, model, sources, sinks);
    }
    std::cout << "netlist: " << nl.name() << "\n";
    std::cout << "longest_path=" << report.length << "\n";
    std::cout << "from: " << report.from << "\n";
    std::cout << "to: " << report.to << "\n";
    std::cout << "cells:";
    for (const std::string& c : report.cells) std::cout << " " << c;
    std::cout << "\n";
    AreaReport area = area_report(nl, model);
    std::cout << "area_transistors=" << area.total << "\n";
    return 0;
}

int cmd_verify(const NetlistSource& src, bool exhaustive, long random_count,
               const std::string& vectors_path, uint64_t seed, unsigned jobs,
               const std::string& model_path) {
    Netlist nl = src.resolve();
    TimingAreaModel model = load_model(model_path);
    VerifyOptions opt;
    opt.seed = seed;
    opt.jobs = jobs;
    std::string mode;
    if (exhaustive) {
        opt.mode = VerifyOptions::Mode::Exhaustive;
        mode = "exhaustive";
    } else if (!vectors_path.empty()) {
        opt.mode = VerifyOptions::Mode::Explicit;
        opt.vectors = load_vectors(vectors_path);
        mode = "file count=" + std::to_string(opt.vectors.size());
    } else {
        opt.mode = VerifyOptions::Mode::Random;
        opt.count = static_cast<size_t>(random_count);
        mode = "random count=" + std::to_string(opt.count) + " seed=" + std::to_string(seed);
    }
    std::cout << "verify netlist=" << nl.name() << " mode=" << mode << "\n";
    VerifyResult result = verify_adder(nl, model, opt);
    if (result.pass) {
        std::cout << "PASS vectors=" << result.vectors_run
                  << " max_forward_latency=" << result.max_forward_latency << " argmax "
                  << vector_str(result.latency_argmax) << "\n";
        return 0;
    }
    std::cout << "FAIL";
    if (result.counterexample) {
        std::cout << " vector " << vector_str(result.counterexample->vector) << "\n";
        std::cout << "reason: " << result.counterexample->reason << "\n";
        if (!result.counterexample->trace_excerpt.empty())
            std::cout << "trace excerpt:\n" << result.counterexample->trace_excerpt;
    } else {
        std::cout << "\n";
    }
    return 1;
}

int cmd_check(const NetlistSource& src, const std::string& props_csv, uint64_t seed,
              long random_count, const std::string& model_path) {
    Netlist nl = src.resolve();
    TimingAreaModel model = load_model(model_path);
    std::vector<std::string> props;
    {
        std::istringstream in(props_csv);
        std::string tok;
        while (std::getline(in, tok, ','))
            if (!tok.empty()) props.push_back(tok);
    }
    if (props.empty()) throw ConfigError("--props needs at least one property");

    auto block_table = [&]() -> const DsopEquationTable& {
        if (nl.find_port("A") && !nl.find_port("A1")) return sbfa_equation_table();
        if (nl.find_port("A1") && nl.find_port("A0") && !nl.find_port("A2"))
            return dbfa_equation_table();
        throw ConfigError("dsop/cover checks apply to single sbfa/dbfa blocks only");
    };

    bool all_pass = true;
    for (const std::string& prop : props) {
        if (prop == "dsop") {
            DsopCheck c = check_dsop(block_table());
            std::cout << "dsop: " << (c.pass ? "PASS" : "FAIL") << "\n";
            for (const auto& w : c.witnesses) std::cout << "  " << w << "\n";
            all_pass = all_pass && c.pass;
        } else if (prop == "cover") {
            DsopCheck c = check_monotonic_cover(nl, model, block_table());
            std::cout << "cover: " << (c.pass ? "PASS" : "FAIL") << "\n";
            for (const auto& w : c.witnesses) std::cout << "  " << w << "\n";
            all_pass = all_pass && c.pass;
        } else if (prop == "phase" || prop == "quiescence") {
            AdderSession session(nl, model);
            const unsigned w = session.width();
            std::vector<Vector3> vectors;
            if (2 * w + 1 <= 13) {
                const uint64_t mask = (uint64_t{1} << w) - 1;
                for (uint64_t i = 0; i < (uint64_t{1} << (2 * w + 1)); ++i)
                    vectors.push_back(
                        {i & mask, (i >> w) & mask, static_cast<int>(i >> (2 * w))});
            } else {
                vectors = carry_chain_vectors(w);
                auto r = random_vectors(w, seed, static_cast<size_t>(random_count));
                vectors.insert(vectors.end(), r.begin(), r.end());
            }
            size_t violations = 0;
            for (const Vector3& v : vectors) {
                session.run_cycle(v.a, v.b, v.cin);
                const SimTrace& trace = session.sim().trace();
                if (prop == "phase")
                    violations += check_phase_monotonicity(nl, trace).size();
                else
                    violations +=
                        check_quiescence_after_completion(nl, trace, model.max_delay()).size();
            }
            bool pass = violations == 0;
            std::cout << prop << ": " << (pass ? "PASS" : "FAIL") << " (" << vectors.size()
                      << " cycles";
            if (!pass) std::cout << ", " << violations << " violations";
            std::cout << ")\n";
            all_pass = all_pass && pass;
        } else if (prop == "indication") {
            IndicationReport rep = probe_indication(nl, model);
            std::cout << "indication: PASS" << (rep.exhaustive ? "" : " (sampled)") << "\n";
            for (const auto& [name, ind] : rep.outputs) {
                std::cout << "  " << name << ": " << ind.label();
                if (ind.early_set) std::cout << " early-set [" << ind.set_witness << "]";
                if (ind.early_reset) std::cout << " early-reset [" << ind.reset_witness << "]";
                std::cout << "\n";
            }
            std::cout << "  block: " << rep.block_label() << "\n";
        } else {
            throw ConfigError("unknown property '" + prop +
                              "' (expected dsop, cover, phase, quiescence, indication)");
        }
    }
    return all_pass ? 0 : 1;
}

int cmd_report(unsigned width, const std::string& compositions_csv, uint64_t seed,
               long random_count, unsigned jobs, const std::string& format,
               const std::string& model_path, const std::string& out_path) {
    if (width == 0) throw ConfigError("--width is required");
    std::vector<AdderComposition> comps;
    {
        std::istringstream in(compositions_csv);
        std::string tok;
        while (std::getline(in, tok, ','))
            if (!tok.empty()) comps.push_back(AdderComposition::parse(tok, width));
    }
    if (comps.empty()) throw ConfigError("--compositions needs at least one entry");
    TimingAreaModel model = load_model(model_path);
    CompareOptions opt;
    opt.seed = seed;
    opt.random_count = static_cast<size_t>(random_count);
    opt.jobs = jobs;
    auto rows = compare(width, comps, model, opt);
    std::string body;
    if (format == "csv")
        body = render_csv(rows);
    else if (format == "table")
        body = render_table(rows);
    else
        throw ConfigError("unknown format '" + format + "' (expected csv or table)");
    body += "# width=" + std::to_string(width) + " seed=" + std::to_string(seed) +
            " random=" + std::to_string(random_count) + "\n";
    body += render_ordering_footer(rows);
    if (out_path.empty() || out_path == "-")
        std::cout << body;
    else
        write_file(out_path, body);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual-rail asynchronous circuit toolkit"};
    app.require_subcommand(1);

    NetlistSource gen_src;
    gen_src.with_cd = false;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen", "generate a netlist JSON file");
    add_source_flags(gen, gen_src, true);
    gen->add_flag("--cd", gen_src.with_cd, "add a completion detector over the inputs");
    gen->add_option("--out", gen_out, "output file ('-' for stdout)");

    std::string sim_netlist, sim_a, sim_b, sim_model, sim_trace;
    int sim_cin = 0;
    CLI::App* sim = app.add_subcommand("sim", "run one 4-phase handshake cycle");
    sim->add_option("--netlist", sim_netlist, "netlist JSON file")->required();
    sim->add_option("--a", sim_a, "augend (hex)")->required();
    sim->add_option("--b", sim_b, "addend (hex)")->required();
    sim->add_option("--cin", sim_cin, "carry input (0|1)")->check(CLI::Range(0, 1));
    sim->add_option("--model", sim_model, "delay/area override file");
    sim->add_option("--trace", sim_trace, "write the transition trace here ('-' for stdout)");

    std::string sta_netlist, sta_model;
    std::vector<std::string> sta_from, sta_to;
    CLI::App* sta = app.add_subcommand("sta", "structural longest-path analysis");
    sta->add_option("--netlist", sta_netlist, "netlist JSON file")->required();
    sta->add_option("--model", sta_model, "delay/area override file");
    sta->add_option("--from", sta_from, "restrict source nets");
    sta->add_option("--to", sta_to, "restrict sink nets");

    NetlistSource verify_src;
    verify_src.with_cd = true;
    bool verify_exhaustive = false;
    long verify_random = 1000;
    std::string verify_vectors, verify_model;
    uint64_t verify_seed = 1;
    unsigned verify_jobs = 1;
    CLI::App* verify = app.add_subcommand("verify", "check decoded results against a + b + cin");
    add_source_flags(verify, verify_src, false);
    verify->add_flag("--exhaustive", verify_exhaustive, "all 2^(2w+1) vectors");
    verify->add_option("--random", verify_random, "number of random vectors")
        ->check(CLI::PositiveNumber);
    verify->add_option("--vectors", verify_vectors, "vector file: '<hexA> <hexB> <0|1>' per line");
    verify->add_option("--seed", verify_seed, "random seed");
    verify->add_option("--jobs", verify_jobs, "worker threads")->check(CLI::PositiveNumber);
    verify->add_option("--model", verify_model, "delay/area override file");

    NetlistSource check_src;
    check_src.with_cd = true;
    std::string check_props, check_model;
    uint64_t check_seed = 1;
    long check_random = 100;
    CLI::App* check = app.add_subcommand("check", "protocol and logic property checks");
    add_source_flags(check, check_src, true);
    check->add_option("--props", check_props, "comma list: dsop,cover,phase,quiescence,indication")
        ->required();
    check->add_option("--seed", check_seed, "random seed for sampled cycles");
    check->add_option("--random", check_random, "random cycles for phase/quiescence on wide adders")
        ->check(CLI::PositiveNumber);
    check->add_option("--model", check_model, "delay/area override file");

    unsigned report_width = 0;
    std::string report_comps, report_format = "table", report_model, report_out;
    uint64_t report_seed = 1;
    long report_random = 1000;
    unsigned report_jobs = 1;
    CLI::App* report = app.add_subcommand("report", "compare adder configurations");
    report->add_option("--width", report_width, "adder width in bits")->required();
    report->add_option("--compositions", report_comps, "comma list of composition strings")
        ->required();
    report->add_option("--seed", report_seed, "random seed");
    report->add_option("--random", report_random, "random vectors per configuration")
        ->check(CLI::PositiveNumber);
    report->add_option("--jobs", report_jobs, "worker threads")->check(CLI::PositiveNumber);
    report->add_option("--format", report_format, "csv or table");
    report->add_option("--model", report_model, "delay/area override file");
    report->add_option("--out", report_out, "output file ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") return app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_src, gen_out);
        if (sim->parsed()) return cmd_sim(sim_netlist, sim_a, sim_b, sim_cin, sim_model, sim_trace);
        if (sta->parsed()) return cmd_sta(sta_netlist, sta_model, sta_from, sta_to);
        if (verify->parsed())
            return cmd_verify(verify_src, verify_exhaustive, verify_random, verify_vectors,
                              verify_seed, verify_jobs, verify_model);
        if (check->parsed()) return cmd_check(check_src, check_props, check_seed, check_random,
                                              check_model);
        if (report->parsed())
            return cmd_report(report_width, report_comps, report_seed, report_random, report_jobs,
                              report_format, report_model, report_out);
    } catch (const SimError& e) {
        std::cerr << "simulation failure: " << e.what() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BuildError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
