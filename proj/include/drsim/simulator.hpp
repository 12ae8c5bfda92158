#pragma once

#include "drsim/encoding.hpp"
#include "drsim/netlist.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace drsim {

struct SimOptions {
    uint64_t event_budget = 1'000'000; // applied events per settle() before divergence error
};

struct Transition {
    uint64_t time;
    NetId net;
    uint8_t old_value;
    uint8_t new_value;
};

// Environment observation points of one 4-phase return-to-zero transaction.
// DoneHigh/DoneLow are the acknowledge points: the environment samples the
// DONE net only once the outputs are settled, so marker times are
// non-decreasing in this order even when the completion detector is faster
// than the function block.
enum class PhaseMarker : uint8_t {
    ValidApplied,
    AllOutputsValid,
    DoneHigh,
    SpacerApplied,
    AllOutputsSpacer,
    DoneLow,
};
inline constexpr size_t kPhaseMarkerCount = 6;

std::string_view to_string(PhaseMarker m);

struct SimTrace {
    std::vector<Transition> transitions;
    std::array<std::optional<uint64_t>, kPhaseMarkerCount> markers{};

    void clear();
    std::optional<uint64_t> marker(PhaseMarker m) const {
        return markers[static_cast<size_t>(m)];
    }
    void set_marker(PhaseMarker m, uint64_t t) { markers[static_cast<size_t>(m)] = t; }
};

// One line per transition "t=<int> <net> <old>-><new>"; markers as
// "# <marker> t=<int>". Stimulus markers precede same-time transitions,
// settle markers follow them.
std::string dump_trace(const Netlist& nl, const SimTrace& trace);

struct SettleStats {
    uint64_t applied_at = 0;
    uint64_t t_end = 0; // time of the last applied event (= applied_at when none)
    uint64_t events = 0;
};

// Deterministic event-driven simulator. Delays come from the timing model;
// pending events on a net are superseded by newer computations (inertial
// semantics). Events fire in (time, schedule order); reset state is all-zero
// followed by a power-up fixpoint, which is a no-op for the dual-rail
// circuits built here. C2 state is the current value of the C2 output net.
class Simulator {
public:
    Simulator(const Netlist& nl, const TimingAreaModel& model, SimOptions opts = {});

    void reset();

    // Staged input changes are applied together at next_stimulus_time().
    void stage_net(NetId net, uint8_t value);
    void stage_net(std::string_view name, uint8_t value);
    void stage_pair(std::string_view port, std::optional<int> bit); // nullopt = spacer
    void stage_pair(const RailPortNets& rails, std::optional<int> bit);

    // Applies staged changes and propagates to quiescence. Throws SimError
    // when the event budget is exhausted.
    SettleStats settle();

    uint64_t next_stimulus_time() const { return next_stim_; }
    uint8_t value(NetId net) const { return value_[net]; }
    RailPair pair_value(const RailPortNets& rails) const {
        return RailPair{value_[rails.rail1], value_[rails.rail0]};
    }
    bool in_reset_state() const;

    const Netlist& netlist() const { return *nl_; }
    const TimingAreaModel& model() const { return model_; }
    SimTrace& trace() { return trace_; }
    const SimTrace& trace() const { return trace_; }

private:
    struct Pending {
        uint32_t seq = 0;
        uint8_t active = 0;
        uint8_t value = 0;
    };
    struct Ev {
        NetId net;
        uint32_t seq;
        uint8_t value;
    };
    struct CompiledCell {
        CellKind kind;
        uint8_t delay;
        std::array<NetId, 4> in;
        NetId out;
    };

    void evaluate_and_schedule(uint32_t cell, uint64_t t_now);
    void apply_change(NetId net, uint8_t value, uint64_t t);
    uint64_t run_queue(uint64_t t_from, uint64_t budget, uint64_t* events_out);

    const Netlist* nl_;
    TimingAreaModel model_;
    SimOptions opts_;
    std::vector<CompiledCell> cells_;
    std::vector<uint32_t> fanout_offset_;
    std::vector<uint32_t> fanout_cells_;
    int max_delay_ = 1;

    std::vector<uint8_t> value_;
    std::vector<uint8_t> reset_value_;
    std::vector<Pending> pending_;
    std::vector<std::vector<Ev>> wheel_; // slot = time % wheel size
    uint64_t scheduled_ = 0;
    uint32_t seq_ = 0;
    uint64_t next_stim_ = 0;
    std::vector<std::pair<NetId, uint8_t>> staged_;
    SimTrace trace_;
};

// Port bundle of a generated adder: A0.., B0.., CIN in; SUM0.., COUT out;
// plus the DONE net when a completion detector is present. Single-pair
// blocks use bare A/B/SUM names.
struct AdderPorts {
    std::vector<std::string> a, b, sum;
    std::string cin = "CIN";
    std::string cout = "COUT";
    std::optional<NetId> done;
    unsigned width() const { return static_cast<unsigned>(a.size()); }
};

AdderPorts discover_adder_ports(const Netlist& nl); // throws BuildError when the shape is absent

struct CycleReport {
    uint64_t forward_latency = 0; // ValidApplied -> AllOutputsValid
    uint64_t reverse_latency = 0; // SpacerApplied -> AllOutputsSpacer
    uint64_t cycle_time = 0;      // forward + reverse
    uint64_t sum = 0;
    int carry_out = 0;
    bool returned_to_reset = false;
    std::array<uint64_t, kPhaseMarkerCount> marker_time{};
};

// Drives full valid/spacer transactions against an adder netlist, playing
// the transmitter role directly on the primary inputs. The DONE net is
// optional; without it the acknowledge markers coincide with output
// validity/reset.
class AdderSession {
public:
    AdderSession(const Netlist& nl, const TimingAreaModel& model, SimOptions opts = {});

    // Throws SimError on deadlock (outputs never all valid), an illegal
    // output pair, or divergence. The cycle's trace stays readable on the
    // simulator until the next call.
    CycleReport run_cycle(uint64_t a, uint64_t b, int cin);

    Simulator& sim() { return sim_; }
    const AdderPorts& ports() const { return ports_; }
    unsigned width() const { return ports_.width(); }

    // Fast path over the current cycle's trace: phase monotonicity,
    // post-completion quiescence and the marker order, folded into one scan.
    size_t protocol_violations() const;

private:
    Simulator sim_;
    AdderPorts ports_;
    std::vector<RailPortNets> a_rails_, b_rails_, sum_rails_;
    RailPortNets cin_rails_, cout_rails_;
    std::vector<int8_t> out_rail_index_; // per net: rail index in output scan, -1 otherwise
    size_t out_rail_count_ = 0;
    std::vector<uint64_t> scan_time_;
    mutable std::vector<uint8_t> scan_scratch_;
};

// Report-only checks over a transaction trace. A conforming circuit makes
// every net rise at most once between ValidApplied and SpacerApplied and
// fall at most once afterwards; extra or opposite transitions are hazard /
// orphan symptoms.
std::vector<std::string> check_phase_monotonicity(const Netlist& nl, const SimTrace& trace);

// Flags transitions inside (DoneHigh + max_cell_delay, SpacerApplied), i.e.
// unacknowledged activity after the environment saw the transaction complete.
std::vector<std::string> check_quiescence_after_completion(const Netlist& nl,
                                                           const SimTrace& trace,
                                                           int max_cell_delay);

struct Vector3 {
    uint64_t a = 0;
    uint64_t b = 0;
    int cin = 0;
};

struct LatencyScan {
    uint64_t max_latency = 0;
    Vector3 argmax;
    size_t vectors = 0;
};

LatencyScan measure_forward_latency(const Netlist& nl, const TimingAreaModel& model,
                                    std::span<const Vector3> vectors);

// Indication probing. Set probing withholds input subsets at spacer and
// looks for outputs that still become valid; reset probing starts from an
// all-valid state and resets input subsets, looking for outputs that return
// to spacer early. Outputs are dual-rail pairs plus any bare primary output
// nets (e.g. DONE).
struct OutputIndication {
    bool early_set = false;
    bool early_reset = false;
    std::string set_witness;
    std::string reset_witness;
    std::string label() const { return early_set || early_reset ? "early" : "strong"; }
};

struct IndicationReport {
    std::vector<std::pair<std::string, OutputIndication>> outputs;
    bool exhaustive = true; // false when input values were sampled, not enumerated

    // strong: no output is early; early: every output is; weak: mixed.
    std::string block_label() const;
};

IndicationReport probe_indication(const Netlist& nl, const TimingAreaModel& model);

} // namespace drsim
