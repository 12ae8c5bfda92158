#include "drsim/simulator.hpp"

#include <algorithm>
#include <cstring>
#include <random>
#include <set>
#include <sstream>

namespace drsim {

std::string_view to_string(PhaseMarker m) {
    switch (m) {
    case PhaseMarker::ValidApplied: return "ValidApplied";
    case PhaseMarker::AllOutputsValid: return "AllOutputsValid";
    case PhaseMarker::DoneHigh: return "DoneHigh";
    case PhaseMarker::SpacerApplied: return "SpacerApplied";
    case PhaseMarker::AllOutputsSpacer: return "AllOutputsSpacer";
    case PhaseMarker::DoneLow: return "DoneLow";
    }
    return "?";
}

void SimTrace::clear() {
    transitions.clear();
    markers.fill(std::nullopt);
}

std::string dump_trace(const Netlist& nl, const SimTrace& trace) {
    // Stimulus markers precede transitions at the same time, settle markers
    // follow them; markers tie-break in declaration order.
    struct MarkerEntry {
        uint64_t time;
        int cls; // 0 before transitions, 2 after
        size_t index;
    };
    std::vector<MarkerEntry> markers;
    for (size_t i = 0; i < kPhaseMarkerCount; ++i) {
        if (!trace.markers[i]) continue;
        PhaseMarker m = static_cast<PhaseMarker>(i);
        bool stimulus = m == PhaseMarker::ValidApplied || m == PhaseMarker::SpacerApplied;
        markers.push_back({*trace.markers[i], stimulus ? 0 : 2, i});
    }
    std::stable_sort(markers.begin(), markers.end(), [](const MarkerEntry& x, const MarkerEntry& y) {
        return std::tie(x.time, x.cls, x.index) < std::tie(y.time, y.cls, y.index);
    });
    std::string out;
    size_t mi = 0;
    auto emit_marker = [&](const MarkerEntry& m) {
        out += "# ";
        out += to_string(static_cast<PhaseMarker>(m.index));
        out += " t=" + std::to_string(m.time) + "\n";
    };
    for (const Transition& tr : trace.transitions) {
        while (mi < markers.size() &&
               (markers[mi].time < tr.time || (markers[mi].time == tr.time && markers[mi].cls == 0)))
            emit_marker(markers[mi++]);
        out += "t=" + std::to_string(tr.time) + " " + nl.nets()[tr.net].name + " " +
               std::to_string(tr.old_value) + "->" + std::to_string(tr.new_value) + "\n";
    }
    while (mi < markers.size()) emit_marker(markers[mi++]);
    return out;
}

Simulator::Simulator(const Netlist& nl, const TimingAreaModel& model, SimOptions opts)
    : nl_(&nl), model_(model), opts_(opts) {
    model_.check();
    max_delay_ = model_.max_delay();
    cells_.reserve(nl.cells().size());
    for (const CellInstance& c : nl.cells()) {
        CompiledCell cc{};
        cc.kind = c.kind;
        int d = model_.delay_of(c.kind);
        if (d > 255) throw ConfigError("cell delays above 255 units are not supported");
        cc.delay = static_cast<uint8_t>(d);
        for (size_t i = 0; i < c.inputs.size(); ++i) cc.in[i] = c.inputs[i];
        cc.out = c.output;
        cells_.push_back(cc);
    }
    // fanout CSR, cell order per net
    const size_t nnets = nl.nets().size();
    fanout_offset_.assign(nnets + 1, 0);
    for (const CellInstance& c : nl.cells())
        for (NetId in : c.inputs) ++fanout_offset_[in + 1];
    for (size_t i = 0; i < nnets; ++i) fanout_offset_[i + 1] += fanout_offset_[i];
    fanout_cells_.resize(fanout_offset_[nnets]);
    std::vector<uint32_t> cursor(fanout_offset_.begin(), fanout_offset_.end() - 1);
    for (uint32_t ci = 0; ci < cells_.size(); ++ci)
        for (const NetId in : nl.cells()[ci].inputs) fanout_cells_[cursor[in]++] = ci;
    value_.assign(nnets, 0);
    pending_.assign(nnets, {});
    wheel_.assign(static_cast<size_t>(max_delay_) + 1, {});
    reset();
}

void Simulator::reset() {
    std::fill(value_.begin(), value_.end(), 0);
    std::fill(pending_.begin(), pending_.end(), Pending{});
    for (auto& slot : wheel_) slot.clear();
    scheduled_ = 0;
    seq_ = 0;
    staged_.clear();
    trace_.clear();
    // Power-up fixpoint: a no-op for the monotone dual-rail circuits built
    // here (all-zero is already stable), but settles netlists with inverting
    // cells into a consistent reset state.
    for (uint32_t ci = 0; ci < cells_.size(); ++ci) evaluate_and_schedule(ci, 0);
    uint64_t events = 0;
    run_queue(1, opts_.event_budget, &events);
    trace_.clear();
    next_stim_ = 0;
    reset_value_ = value_;
}

bool Simulator::in_reset_state() const {
    return scheduled_ == 0 && value_ == reset_value_;
}

void Simulator::stage_net(NetId net, uint8_t v) { staged_.emplace_back(net, v); }

void Simulator::stage_net(std::string_view name, uint8_t v) {
    staged_.emplace_back(nl_->net(name), v);
}

void Simulator::stage_pair(std::string_view port, std::optional<int> bit) {
    auto rails = nl_->find_port(port);
    if (!rails) throw BuildError("unknown port '" + std::string(port) + "'");
    stage_pair(*rails, bit);
}

void Simulator::stage_pair(const RailPortNets& rails, std::optional<int> bit) {
    RailPair p = bit ? RailPair::of_bit(*bit) : RailPair::spacer();
    staged_.emplace_back(rails.rail1, p.rail1);
    staged_.emplace_back(rails.rail0, p.rail0);
}

void Simulator::apply_change(NetId net, uint8_t v, uint64_t t) {
    if (value_[net] == v) {
        if (pending_[net].active) { // a stale pending no longer applies
            pending_[net].active = 0;
            --scheduled_;
        }
        return;
    }
    if (pending_[net].active) {
        pending_[net].active = 0;
        --scheduled_;
    }
    trace_.transitions.push_back({t, net, value_[net], v});
    value_[net] = v;
    const uint32_t begin = fanout_offset_[net];
    const uint32_t end = fanout_offset_[net + 1];
    for (uint32_t i = begin; i < end; ++i) evaluate_and_schedule(fanout_cells_[i], t);
}

void Simulator::evaluate_and_schedule(uint32_t cell, uint64_t t_now) {
    const CompiledCell& c = cells_[cell];
    uint8_t nv = 0;
    switch (c.kind) {
    case CellKind::INV: nv = !value_[c.in[0]]; break;
    case CellKind::AND2: nv = value_[c.in[0]] & value_[c.in[1]]; break;
    case CellKind::OR2: nv = value_[c.in[0]] | value_[c.in[1]]; break;
    case CellKind::OR3: nv = value_[c.in[0]] | value_[c.in[1]] | value_[c.in[2]]; break;
    case CellKind::C2: {
        uint8_t a = value_[c.in[0]], b = value_[c.in[1]];
        nv = (a & b) | ((a | b) & value_[c.out]);
        break;
    }
    case CellKind::AO22:
        nv = (value_[c.in[0]] & value_[c.in[1]]) | (value_[c.in[2]] & value_[c.in[3]]);
        break;
    case CellKind::AO21: nv = (value_[c.in[0]] & value_[c.in[1]]) | value_[c.in[2]]; break;
    }
    Pending& p = pending_[c.out];
    if (p.active) {
        if (p.value == nv) return; // identical outcome already in flight
        if (value_[c.out] == nv) { // pulse shorter than the cell delay: swallow
            p.active = 0;
            --scheduled_;
            return;
        }
        p.value = nv;
        p.seq = ++seq_;
    } else {
        if (value_[c.out] == nv) return;
        p.active = 1;
        p.value = nv;
        p.seq = ++seq_;
        ++scheduled_;
    }
    wheel_[(t_now + c.delay) % wheel_.size()].push_back({c.out, p.seq, nv});
}

uint64_t Simulator::run_queue(uint64_t t_from, uint64_t budget, uint64_t* events_out) {
    uint64_t t = t_from;
    uint64_t t_end = t_from - 1;
    uint64_t applied = 0;
    while (scheduled_ > 0) {
        auto& slot = wheel_[t % wheel_.size()];
        for (size_t i = 0; i < slot.size(); ++i) { // slot may not grow for the current time
            Ev ev = slot[i];
            Pending& p = pending_[ev.net];
            if (!p.active || p.seq != ev.seq) continue; // superseded or cancelled
            p.active = 0;
            --scheduled_;
            if (++applied > budget)
                throw SimError("simulation did not quiesce within " + std::to_string(budget) +
                               " events (oscillation?) near net '" + nl_->nets()[ev.net].name +
                               "'");
            trace_.transitions.push_back({t, ev.net, value_[ev.net], ev.value});
            value_[ev.net] = ev.value;
            t_end = t;
            const uint32_t begin = fanout_offset_[ev.net];
            const uint32_t end = fanout_offset_[ev.net + 1];
            for (uint32_t f = begin; f < end; ++f) evaluate_and_schedule(fanout_cells_[f], t);
        }
        slot.clear();
        ++t;
    }
    if (events_out) *events_out = applied;
    return applied ? t_end : t_from - 1;
}

SettleStats Simulator::settle() {
    SettleStats stats;
    const uint64_t t0 = next_stim_;
    stats.applied_at = t0;
    uint64_t input_events = 0;
    for (const auto& [net, v] : staged_) {
        if (value_[net] != v) ++input_events;
        apply_change(net, v, t0);
    }
    staged_.clear();
    uint64_t applied = 0;
    uint64_t t_end = run_queue(t0 + 1, opts_.event_budget, &applied);
    stats.events = applied + input_events;
    stats.t_end = applied ? t_end : t0;
    next_stim_ = stats.t_end + 1;
    return stats;
}

namespace {

// Ports named <base><index> collected in index order; a bare <base> port is
// the degenerate single-pair form.
std::vector<std::string> collect_indexed(const Netlist& nl, const std::string& base) {
    if (nl.find_port(base)) return {base};
    std::vector<std::pair<unsigned, std::string>> found;
    for (const auto& [name, rails] : nl.ports()) {
        (void)rails;
        if (name.size() <= base.size() || name.compare(0, base.size(), base) != 0) continue;
        std::string_view idx{name.data() + base.size(), name.size() - base.size()};
        unsigned value = 0;
        bool numeric = !idx.empty();
        for (char ch : idx) {
            if (ch < '0' || ch > '9') {
                numeric = false;
                break;
            }
            value = value * 10 + static_cast<unsigned>(ch - '0');
        }
        if (numeric) found.emplace_back(value, name);
    }
    std::sort(found.begin(), found.end());
    std::vector<std::string> out;
    for (size_t i = 0; i < found.size(); ++i) {
        if (found[i].first != i)
            throw BuildError("port group '" + base + "' is not contiguous from 0");
        out.push_back(found[i].second);
    }
    return out;
}

} // namespace

AdderPorts discover_adder_ports(const Netlist& nl) {
    AdderPorts p;
    p.a = collect_indexed(nl, "A");
    p.b = collect_indexed(nl, "B");
    p.sum = collect_indexed(nl, "SUM");
    if (p.a.empty() || p.a.size() != p.b.size() || p.a.size() != p.sum.size())
        throw BuildError("netlist '" + nl.name() + "' lacks matching A/B/SUM port groups");
    if (!nl.find_port("CIN") || !nl.find_port("COUT"))
        throw BuildError("netlist '" + nl.name() + "' lacks CIN/COUT ports");
    if (auto done = nl.find_net("DONE")) p.done = *done;
    return p;
}

AdderSession::AdderSession(const Netlist& nl, const TimingAreaModel& model, SimOptions opts)
    : sim_(nl, model, opts), ports_(discover_adder_ports(nl)) {
    auto rails = [&nl](const std::string& port) { return *nl.find_port(port); };
    for (const std::string& port : ports_.a) a_rails_.push_back(rails(port));
    for (const std::string& port : ports_.b) b_rails_.push_back(rails(port));
    for (const std::string& port : ports_.sum) sum_rails_.push_back(rails(port));
    cin_rails_ = rails(ports_.cin);
    cout_rails_ = rails(ports_.cout);
    out_rail_index_.assign(nl.nets().size(), -1);
    int8_t idx = 0;
    for (const RailPortNets& r : sum_rails_) {
        out_rail_index_[r.rail1] = idx;
        out_rail_index_[r.rail0] = idx;
        ++idx;
    }
    out_rail_index_[cout_rails_.rail1] = idx;
    out_rail_index_[cout_rails_.rail0] = idx;
    out_rail_count_ = static_cast<size_t>(idx) + 1;
    scan_time_.assign(out_rail_count_, 0);
}

CycleReport AdderSession::run_cycle(uint64_t a, uint64_t b, int cin) {
    const unsigned w = width();
    if (w < 64 && ((a >> w) || (b >> w)))
        throw ConfigError("operand out of range for width " + std::to_string(w));
    if (!sim_.in_reset_state())
        throw SimError("handshake cycle started outside the reset (all-spacer) state");
    CycleReport report;
    SimTrace& trace = sim_.trace();
    trace.clear();

    auto mark = [&](PhaseMarker m, uint64_t t) {
        trace.set_marker(m, t);
        report.marker_time[static_cast<size_t>(m)] = t;
    };

    // Phase 1: the environment transmits a valid code word.
    const uint64_t t_valid = sim_.next_stimulus_time();
    mark(PhaseMarker::ValidApplied, t_valid);
    for (unsigned i = 0; i < w; ++i) {
        sim_.stage_pair(a_rails_[i], static_cast<int>((a >> i) & 1));
        sim_.stage_pair(b_rails_[i], static_cast<int>((b >> i) & 1));
    }
    sim_.stage_pair(cin_rails_, cin & 1);
    sim_.settle();

    auto classify_outputs = [&](bool expect_valid) {
        for (size_t i = 0; i <= sum_rails_.size(); ++i) {
            const RailPortNets& r = i < sum_rails_.size() ? sum_rails_[i] : cout_rails_;
            const std::string& name = i < sum_rails_.size() ? ports_.sum[i] : ports_.cout;
            RailPair v = sim_.pair_value(r);
            if (v.classify() == RailValue::Illegal)
                throw SimError("illegal output pair on port " + name);
            if (expect_valid && !v.is_valid())
                throw SimError("deadlock: output port " + name +
                               " did not become valid (a=" + std::to_string(a) +
                               " b=" + std::to_string(b) + " cin=" + std::to_string(cin) + ")");
            if (!expect_valid && !v.is_spacer())
                throw SimError("output port " + name + " did not return to spacer");
        }
    };
    classify_outputs(true);

    const size_t data_end = trace.transitions.size();
    uint64_t t_all_valid = t_valid;
    uint64_t t_done_rise = t_valid;
    for (size_t i = 0; i < data_end; ++i) {
        const Transition& tr = trace.transitions[i];
        if (tr.new_value && out_rail_index_[tr.net] >= 0) t_all_valid = std::max(t_all_valid, tr.time);
        if (ports_.done && tr.net == *ports_.done && tr.new_value)
            t_done_rise = std::max(t_done_rise, tr.time);
    }
    if (ports_.done && sim_.value(*ports_.done) != 1)
        throw SimError("DONE did not rise although all inputs are valid");
    mark(PhaseMarker::AllOutputsValid, t_all_valid);
    mark(PhaseMarker::DoneHigh, std::max(t_all_valid, t_done_rise));
    report.forward_latency = t_all_valid - t_valid;

    DualRailWord sum_word;
    for (const RailPortNets& r : sum_rails_) sum_word.pairs.push_back(sim_.pair_value(r));
    DecodedWord decoded = decode_dual_rail(sum_word);
    report.sum = decoded.value;
    report.carry_out = sim_.pair_value(cout_rails_).classify() == RailValue::Valid1 ? 1 : 0;

    // Phase 3: acknowledge seen, return the bus to the spacer state.
    const uint64_t t_spacer = sim_.next_stimulus_time();
    mark(PhaseMarker::SpacerApplied, t_spacer);
    for (unsigned i = 0; i < w; ++i) {
        sim_.stage_pair(a_rails_[i], std::nullopt);
        sim_.stage_pair(b_rails_[i], std::nullopt);
    }
    sim_.stage_pair(cin_rails_, std::nullopt);
    sim_.settle();
    classify_outputs(false);

    uint64_t t_all_spacer = t_spacer;
    uint64_t t_done_fall = t_spacer;
    for (size_t i = data_end; i < trace.transitions.size(); ++i) {
        const Transition& tr = trace.transitions[i];
        if (!tr.new_value && out_rail_index_[tr.net] >= 0)
            t_all_spacer = std::max(t_all_spacer, tr.time);
        if (ports_.done && tr.net == *ports_.done && !tr.new_value)
            t_done_fall = std::max(t_done_fall, tr.time);
    }
    mark(PhaseMarker::AllOutputsSpacer, t_all_spacer);
    mark(PhaseMarker::DoneLow, std::max(t_all_spacer, t_done_fall));
    report.reverse_latency = t_all_spacer - t_spacer;
    report.cycle_time = report.forward_latency + report.reverse_latency;
    report.returned_to_reset = sim_.in_reset_state();
    return report;
}

size_t AdderSession::protocol_violations() const {
    const SimTrace& trace = sim_.trace();
    size_t violations = 0;
    uint64_t prev = 0;
    bool have_prev = false;
    for (size_t i = 0; i < kPhaseMarkerCount; ++i) {
        if (!trace.markers[i]) return 1; // incomplete transaction
        if (have_prev && *trace.markers[i] < prev) ++violations;
        prev = *trace.markers[i];
        have_prev = true;
    }
    const uint64_t t_spacer = *trace.marker(PhaseMarker::SpacerApplied);
    const uint64_t quiet_after =
        *trace.marker(PhaseMarker::DoneHigh) + static_cast<uint64_t>(sim_.model().max_delay());
    if (scan_scratch_.size() != sim_.netlist().nets().size())
        scan_scratch_.assign(sim_.netlist().nets().size(), 0);
    else
        std::fill(scan_scratch_.begin(), scan_scratch_.end(), 0);
    // scratch: bit0 = seen in data phase, bit1 = seen in reset phase
    for (const Transition& tr : trace.transitions) {
        const bool data_phase = tr.time < t_spacer;
        uint8_t& seen = scan_scratch_[tr.net];
        if (data_phase) {
            if (!tr.new_value || (seen & 1)) ++violations; // fall or second rise
            if (tr.time > quiet_after) ++violations;       // unacknowledged late activity
            seen |= 1;
        } else {
            if (tr.new_value || (seen & 2)) ++violations;
            seen |= 2;
        }
    }
    return violations;
}

std::vector<std::string> check_phase_monotonicity(const Netlist& nl, const SimTrace& trace) {
    std::vector<std::string> out;
    auto t_spacer = trace.marker(PhaseMarker::SpacerApplied);
    std::vector<uint8_t> seen(nl.nets().size(), 0);
    for (const Transition& tr : trace.transitions) {
        const bool data_phase = !t_spacer || tr.time < *t_spacer;
        const std::string& name = nl.nets()[tr.net].name;
        uint8_t& s = seen[tr.net];
        if (data_phase) {
            if (!tr.new_value)
                out.push_back("net '" + name + "' fell during the data phase at t=" +
                              std::to_string(tr.time));
            else if (s & 1)
                out.push_back("net '" + name + "' transitioned more than once in the data phase (t=" +
                              std::to_string(tr.time) + ")");
            s |= 1;
        } else {
            if (tr.new_value)
                out.push_back("net '" + name + "' rose during the reset phase at t=" +
                              std::to_string(tr.time));
            else if (s & 2)
                out.push_back("net '" + name + "' transitioned more than once in the reset phase (t=" +
                              std::to_string(tr.time) + ")");
            s |= 2;
        }
    }
    return out;
}

std::vector<std::string> check_quiescence_after_completion(const Netlist& nl,
                                                           const SimTrace& trace,
                                                           int max_cell_delay) {
    std::vector<std::string> out;
    auto done_high = trace.marker(PhaseMarker::DoneHigh);
    if (!done_high) return out;
    const uint64_t quiet_after = *done_high + static_cast<uint64_t>(max_cell_delay);
    auto t_spacer = trace.marker(PhaseMarker::SpacerApplied);
    for (const Transition& tr : trace.transitions) {
        if (t_spacer && tr.time >= *t_spacer) break;
        if (tr.time > quiet_after)
            out.push_back("net '" + nl.nets()[tr.net].name + "' transitioned at t=" +
                          std::to_string(tr.time) + " after completion (quiet after t=" +
                          std::to_string(quiet_after) + ")");
    }
    return out;
}

LatencyScan measure_forward_latency(const Netlist& nl, const TimingAreaModel& model,
                                    std::span<const Vector3> vectors) {
    if (vectors.empty()) throw ConfigError("latency measurement needs at least one vector");
    AdderSession session(nl, model);
    LatencyScan scan;
    for (const Vector3& v : vectors) {
        CycleReport r = session.run_cycle(v.a, v.b, v.cin);
        if (scan.vectors == 0 || r.forward_latency > scan.max_latency) {
            scan.max_latency = r.forward_latency;
            scan.argmax = v;
        }
        ++scan.vectors;
    }
    return scan;
}

std::string IndicationReport::block_label() const {
    size_t early = 0;
    for (const auto& [name, ind] : outputs) {
        (void)name;
        if (ind.early_set || ind.early_reset) ++early;
    }
    if (early == 0) return "strong";
    if (early == outputs.size()) return "early";
    return "weak";
}

namespace {

struct ProbeIo {
    std::vector<std::pair<std::string, RailPortNets>> inputs;  // dual-rail input ports
    std::vector<std::pair<std::string, RailPortNets>> pairs_out;
    std::vector<std::pair<std::string, NetId>> single_out; // bare primary outputs (DONE)
};

ProbeIo probe_io(const Netlist& nl) {
    ProbeIo io;
    std::vector<uint8_t> in_port(nl.nets().size(), 0);
    for (const auto& [name, rails] : nl.ports()) {
        in_port[rails.rail1] = 1;
        in_port[rails.rail0] = 1;
        if (nl.nets()[rails.rail1].kind == NetKind::PrimaryInput)
            io.inputs.emplace_back(name, rails);
        else if (nl.nets()[rails.rail1].kind == NetKind::PrimaryOutput)
            io.pairs_out.emplace_back(name, rails);
    }
    for (NetId n = 0; n < nl.nets().size(); ++n)
        if (nl.nets()[n].kind == NetKind::PrimaryOutput && !in_port[n])
            io.single_out.emplace_back(nl.nets()[n].name, n);
    return io;
}

std::vector<uint64_t> probe_value_samples(size_t port_count, bool* exhaustive) {
    std::vector<uint64_t> values;
    if (port_count <= 12) {
        values.resize(size_t{1} << port_count);
        for (size_t i = 0; i < values.size(); ++i) values[i] = i;
        *exhaustive = true;
        return values;
    }
    *exhaustive = false;
    values.push_back(0);
    values.push_back(port_count >= 64 ? ~uint64_t{0} : (uint64_t{1} << port_count) - 1);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 62; ++i) values.push_back(rng());
    return values;
}

} // namespace

IndicationReport probe_indication(const Netlist& nl, const TimingAreaModel& model) {
    ProbeIo io = probe_io(nl);
    if (io.inputs.empty() || (io.pairs_out.empty() && io.single_out.empty()))
        throw BuildError("netlist '" + nl.name() + "' has no dual-rail inputs or no outputs to probe");
    IndicationReport report;
    for (const auto& [name, rails] : io.pairs_out) {
        (void)rails;
        report.outputs.emplace_back(name, OutputIndication{});
    }
    for (const auto& [name, net] : io.single_out) {
        (void)net;
        report.outputs.emplace_back(name, OutputIndication{});
    }
    auto indication_of = [&](size_t idx) -> OutputIndication& { return report.outputs[idx].second; };

    Simulator sim(nl, model);
    const size_t n = io.inputs.size();

    // Probe subsets, as withheld/reset port index sets: each single port, plus
    // the all-but-CIN and only-CIN splits when a CIN port exists.
    std::set<std::vector<size_t>> subset_set;
    for (size_t i = 0; i < n; ++i) subset_set.insert({i});
    std::optional<size_t> cin_index;
    for (size_t i = 0; i < n; ++i)
        if (io.inputs[i].first == "CIN") cin_index = i;
    if (cin_index && n > 1) {
        std::vector<size_t> all_but_cin;
        for (size_t i = 0; i < n; ++i)
            if (i != *cin_index) all_but_cin.push_back(i);
        subset_set.insert(all_but_cin); // CIN-only applied (set) / CIN kept (reset)
    }
    std::vector<std::vector<size_t>> subsets(subset_set.begin(), subset_set.end());

    auto subset_name = [&](const std::vector<size_t>& subset) {
        std::string s = "{";
        for (size_t i = 0; i < subset.size(); ++i)
            s += (i ? "," : "") + io.inputs[subset[i]].first;
        return s + "}";
    };

    bool set_exhaustive = true;
    bool reset_exhaustive = true;

    // Set probing: withhold the subset at spacer, drive the rest with every
    // sampled value pattern, and record outputs that still become valid.
    for (const std::vector<size_t>& withheld : subsets) {
        std::vector<size_t> applied;
        for (size_t i = 0; i < n; ++i)
            if (std::find(withheld.begin(), withheld.end(), i) == withheld.end())
                applied.push_back(i);
        if (applied.empty()) continue;
        bool exhaustive = true;
        for (uint64_t bits : probe_value_samples(applied.size(), &exhaustive)) {
            sim.reset();
            for (size_t k = 0; k < applied.size(); ++k)
                sim.stage_pair(io.inputs[applied[k]].second, static_cast<int>((bits >> k) & 1));
            sim.settle();
            size_t idx = 0;
            for (const auto& [name, rails] : io.pairs_out) {
                (void)name;
                OutputIndication& ind = indication_of(idx);
                if (!ind.early_set && sim.pair_value(rails).is_valid()) {
                    ind.early_set = true;
                    ind.set_witness = "withhold=" + subset_name(withheld);
                }
                ++idx;
            }
            for (const auto& [name, net] : io.single_out) {
                (void)name;
                OutputIndication& ind = indication_of(idx);
                if (!ind.early_set && sim.value(net)) {
                    ind.early_set = true;
                    ind.set_witness = "withhold=" + subset_name(withheld);
                }
                ++idx;
            }
        }
        set_exhaustive = set_exhaustive && exhaustive;
    }

    // Reset probing: from an all-valid settled state, reset only the subset
    // and record outputs that reach the spacer while the rest stays valid.
    {
        bool exhaustive = true;
        std::vector<uint64_t> full = probe_value_samples(n, &exhaustive);
        reset_exhaustive = exhaustive;
        for (const std::vector<size_t>& reset_ports : subsets) {
            if (reset_ports.size() == n) continue;
            for (uint64_t bits : full) {
                sim.reset();
                for (size_t i = 0; i < n; ++i)
                    sim.stage_pair(io.inputs[i].second, static_cast<int>((bits >> i) & 1));
                sim.settle();
                std::vector<uint8_t> was_valid(io.pairs_out.size(), 0);
                std::vector<uint8_t> was_high(io.single_out.size(), 0);
                for (size_t i = 0; i < io.pairs_out.size(); ++i)
                    was_valid[i] = sim.pair_value(io.pairs_out[i].second).is_valid();
                for (size_t i = 0; i < io.single_out.size(); ++i)
                    was_high[i] = sim.value(io.single_out[i].second);
                for (size_t i : reset_ports) sim.stage_pair(io.inputs[i].second, std::nullopt);
                sim.settle();
                size_t idx = 0;
                for (size_t i = 0; i < io.pairs_out.size(); ++i, ++idx) {
                    OutputIndication& ind = indication_of(idx);
                    if (!ind.early_reset && was_valid[i] &&
                        sim.pair_value(io.pairs_out[i].second).is_spacer()) {
                        ind.early_reset = true;
                        ind.reset_witness = "reset=" + subset_name(reset_ports);
                    }
                }
                for (size_t i = 0; i < io.single_out.size(); ++i, ++idx) {
                    OutputIndication& ind = indication_of(idx);
                    if (!ind.early_reset && was_high[i] && !sim.value(io.single_out[i].second)) {
                        ind.early_reset = true;
                        ind.reset_witness = "reset=" + subset_name(reset_ports);
                    }
                }
            }
        }
    }
    report.exhaustive = set_exhaustive && reset_exhaustive;
    return report;
}

} // namespace drsim
