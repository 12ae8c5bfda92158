#pragma once

#include "drsim/cells.hpp"
#include "drsim/error.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace drsim {

using NetId = uint32_t;
inline constexpr uint32_t kNoCell = ~uint32_t{0};

enum class NetKind : uint8_t { PrimaryInput, Internal, PrimaryOutput };

struct Net {
    std::string name;
    NetKind kind = NetKind::Internal;
};

struct CellInstance {
    std::string id;
    CellKind kind;
    std::vector<NetId> inputs;
    NetId output;
};

struct RailPortNets {
    NetId rail1;
    NetId rail0;
};

// The circuit IR: named nets plus cell instances from the fixed cell library,
// with a dual-rail port map from logical port names to (rail1, rail0) nets.
// Construction-time checks catch arity errors, duplicates and double drives;
// the remaining structural invariants are reported by validate(). Netlists
// are treated as immutable once validated and may be shared read-only across
// concurrent simulations.
class Netlist {
public:
    explicit Netlist(std::string name) : name_(std::move(name)) {}

    NetId add_net(const std::string& name, NetKind kind);
    NetId ensure_net(const std::string& name, NetKind kind = NetKind::Internal);
    NetId net(std::string_view name) const; // throws BuildError when missing
    std::optional<NetId> find_net(std::string_view name) const;

    // Referenced input nets are created as Internal when absent. Throws
    // BuildError on duplicate cell id, arity mismatch, or a second driver
    // (the message names both drivers).
    void add_cell(const std::string& id, CellKind kind,
                  const std::vector<std::string>& input_nets, const std::string& output_net);

    // Both rail nets must already exist. Throws BuildError on duplicates.
    void mark_port(const std::string& port, const std::string& rail1, const std::string& rail0);

    // Structural diagnostics (empty means ok): driver presence per net kind,
    // acyclicity of the combinational subgraph (C2 outputs are cut points),
    // and port map integrity. Never throws.
    std::vector<std::string> validate() const;

    // Topological order over cell indices. When with_c2 is set, C2 cells are
    // ordered like combinational cells (nullopt if that graph is cyclic);
    // otherwise C2 cells are excluded and their outputs cut the graph.
    std::optional<std::vector<uint32_t>> topo_order(bool with_c2) const;

    const std::string& name() const { return name_; }
    const std::vector<Net>& nets() const { return nets_; }
    const std::vector<CellInstance>& cells() const { return cells_; }
    const std::vector<std::pair<std::string, RailPortNets>>& ports() const { return ports_; }
    std::optional<RailPortNets> find_port(std::string_view port) const;
    uint32_t driver_of(NetId net) const { return driver_[net]; } // kNoCell when undriven

    // Deterministic serialization: fixed key order, cells in insertion order,
    // LF newlines. Byte-identical across runs for equal netlists.
    std::string write_json() const;
    static Netlist read_json(std::string_view bytes); // throws ParseError

private:
    std::string name_;
    std::vector<Net> nets_;
    std::vector<CellInstance> cells_;
    std::vector<uint32_t> driver_;
    std::vector<std::pair<std::string, RailPortNets>> ports_;
    std::unordered_map<std::string, NetId> net_index_;
    std::unordered_map<std::string, uint32_t> cell_index_;
    std::unordered_map<std::string, size_t> port_index_;
};

// Equality over names and structure (net order, cell order, port map).
bool structural_equal(const Netlist& a, const Netlist& b);

} // namespace drsim
