#include "drsim/netlist.hpp"

#include <algorithm>
#include <queue>

#include <json.hpp>

namespace drsim {

NetId Netlist::add_net(const std::string& name, NetKind kind) {
    if (net_index_.count(name))
        throw BuildError("duplicate net '" + name + "' in netlist '" + name_ + "'");
    NetId id = static_cast<NetId>(nets_.size());
    nets_.push_back(Net{name, kind});
    driver_.push_back(kNoCell);
    net_index_.emplace(name, id);
    return id;
}

NetId Netlist::ensure_net(const std::string& name, NetKind kind) {
    auto it = net_index_.find(name);
    if (it != net_index_.end()) return it->second;
    return add_net(name, kind);
}

NetId Netlist::net(std::string_view name) const {
    auto id = find_net(name);
    if (!id) throw BuildError("unknown net '" + std::string(name) + "' in netlist '" + name_ + "'");
    return *id;
}

std::optional<NetId> Netlist::find_net(std::string_view name) const {
    auto it = net_index_.find(std::string(name));
    if (it == net_index_.end()) return std::nullopt;
    return it->second;
}

void Netlist::add_cell(const std::string& id, CellKind kind,
                       const std::vector<std::string>& input_nets,
                       const std::string& output_net) {
    if (cell_index_.count(id)) throw BuildError("duplicate cell id '" + id + "'");
    if (input_nets.size() != static_cast<size_t>(arity(kind)))
        throw BuildError("cell '" + id + "' (" + std::string(to_string(kind)) + ") expects " +
                         std::to_string(arity(kind)) + " inputs, got " +
                         std::to_string(input_nets.size()));
    CellInstance inst;
    inst.id = id;
    inst.kind = kind;
    for (const std::string& n : input_nets) inst.inputs.push_back(ensure_net(n));
    inst.output = ensure_net(output_net);
    if (driver_[inst.output] != kNoCell)
        throw BuildError("net '" + output_net + "' already driven by cell '" +
                         cells_[driver_[inst.output]].id + "', second driver '" + id + "'");
    uint32_t index = static_cast<uint32_t>(cells_.size());
    driver_[inst.output] = index;
    cell_index_.emplace(id, index);
    cells_.push_back(std::move(inst));
}

void Netlist::mark_port(const std::string& port, const std::string& rail1,
                        const std::string& rail0) {
    if (port_index_.count(port)) throw BuildError("duplicate port '" + port + "'");
    RailPortNets nets{net(rail1), net(rail0)};
    port_index_.emplace(port, ports_.size());
    ports_.emplace_back(port, nets);
}

std::optional<RailPortNets> Netlist::find_port(std::string_view port) const {
    auto it = port_index_.find(std::string(port));
    if (it == port_index_.end()) return std::nullopt;
    return ports_[it->second].second;
}

std::optional<std::vector<uint32_t>> Netlist::topo_order(bool with_c2) const {
    auto in_scope = [&](uint32_t c) { return with_c2 || cells_[c].kind != CellKind::C2; };
    // Kahn over cell->cell edges through driven nets; C2 outputs cut the
    // graph when C2 is out of scope.
    std::vector<uint32_t> indegree(cells_.size(), 0);
    for (uint32_t c = 0; c < cells_.size(); ++c) {
        if (!in_scope(c)) continue;
        for (NetId in : cells_[c].inputs) {
            uint32_t d = driver_[in];
            if (d != kNoCell && in_scope(d)) ++indegree[c];
        }
    }
    std::priority_queue<uint32_t, std::vector<uint32_t>, std::greater<>> ready;
    size_t scoped = 0;
    for (uint32_t c = 0; c < cells_.size(); ++c) {
        if (!in_scope(c)) continue;
        ++scoped;
        if (indegree[c] == 0) ready.push(c);
    }
    std::vector<uint32_t> order;
    order.reserve(scoped);
    // fanout lists, in-scope only
    std::vector<std::vector<uint32_t>> fanout(nets_.size());
    for (uint32_t c = 0; c < cells_.size(); ++c)
        if (in_scope(c))
            for (NetId in : cells_[c].inputs) fanout[in].push_back(c);
    for (auto& f : fanout) {
        std::sort(f.begin(), f.end());
        f.erase(std::unique(f.begin(), f.end()), f.end());
    }
    while (!ready.empty()) {
        uint32_t c = ready.top();
        ready.pop();
        order.push_back(c);
        for (uint32_t user : fanout[cells_[c].output])
            if (--indegree[user] == 0) ready.push(user);
    }
    if (order.size() != scoped) return std::nullopt;
    return order;
}

std::vector<std::string> Netlist::validate() const {
    std::vector<std::string> diags;
    for (NetId n = 0; n < nets_.size(); ++n) {
        const Net& net = nets_[n];
        bool driven = driver_[n] != kNoCell;
        if (net.kind == NetKind::PrimaryInput && driven)
            diags.push_back("primary input '" + net.name + "' is driven by cell '" +
                            cells_[driver_[n]].id + "'");
        if (net.kind != NetKind::PrimaryInput && !driven)
            diags.push_back("undriven net '" + net.name + "'");
    }
    if (!topo_order(false)) {
        diags.push_back("combinational cycle among non-C2 cells");
    }
    for (const auto& [port, rails] : ports_) {
        if (rails.rail1 >= nets_.size() || rails.rail0 >= nets_.size())
            diags.push_back("port '" + port + "' references a missing net");
        else if (rails.rail1 == rails.rail0)
            diags.push_back("port '" + port + "' maps both rails to net '" +
                            nets_[rails.rail1].name + "'");
    }
    return diags;
}

std::string Netlist::write_json() const {
    nlohmann::ordered_json j;
    j["name"] = name_;
    auto names_of = [this](NetKind kind) {
        std::vector<std::string> names;
        for (const Net& n : nets_)
            if (n.kind == kind) names.push_back(n.name);
        return names;
    };
    j["inputs"] = names_of(NetKind::PrimaryInput);
    j["outputs"] = names_of(NetKind::PrimaryOutput);
    nlohmann::ordered_json ports = nlohmann::ordered_json::object();
    for (const auto& [port, rails] : ports_)
        ports[port] = {nets_[rails.rail1].name, nets_[rails.rail0].name};
    j["ports"] = std::move(ports);
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const CellInstance& c : cells_) {
        nlohmann::ordered_json jc;
        jc["id"] = c.id;
        jc["kind"] = to_string(c.kind);
        nlohmann::ordered_json in = nlohmann::ordered_json::array();
        for (NetId n : c.inputs) in.push_back(nets_[n].name);
        jc["in"] = std::move(in);
        jc["out"] = nets_[c.output].name;
        cells.push_back(std::move(jc));
    }
    j["cells"] = std::move(cells);
    return j.dump(2) + "\n";
}

namespace {

void require_keys(const nlohmann::ordered_json& j, std::initializer_list<std::string_view> keys,
                  const char* what) {
    for (std::string_view k : keys)
        if (!j.contains(k))
            throw ParseError(std::string("netlist json: ") + what + " missing key '" +
                             std::string(k) + "'");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (std::string_view k : keys)
            if (it.key() == k) known = true;
        if (!known)
            throw ParseError(std::string("netlist json: ") + what + " has unknown key '" +
                             it.key() + "'");
    }
}

} // namespace

Netlist Netlist::read_json(std::string_view bytes) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("netlist json: ") + e.what());
    }
    try {
        if (!j.is_object()) throw ParseError("netlist json: top level must be an object");
        require_keys(j, {"name", "inputs", "outputs", "ports", "cells"}, "top level");
        if (!j["name"].is_string()) throw ParseError("netlist json: 'name' must be a string");
        Netlist nl(j["name"].get<std::string>());
        auto read_net_array = [&](const char* key, NetKind kind) {
            const auto& arr = j[key];
            if (!arr.is_array()) throw ParseError(std::string("netlist json: '") + key +
                                                  "' must be an array of net names");
            for (const auto& e : arr) {
                if (!e.is_string()) throw ParseError(std::string("netlist json: '") + key +
                                                     "' must contain strings");
                nl.add_net(e.get<std::string>(), kind);
            }
        };
        read_net_array("inputs", NetKind::PrimaryInput);
        read_net_array("outputs", NetKind::PrimaryOutput);
        if (!j["cells"].is_array()) throw ParseError("netlist json: 'cells' must be an array");
        for (const auto& jc : j["cells"]) {
            if (!jc.is_object()) throw ParseError("netlist json: cell entries must be objects");
            require_keys(jc, {"id", "kind", "in", "out"}, "cell");
            if (!jc["id"].is_string() || !jc["kind"].is_string() || !jc["in"].is_array() ||
                !jc["out"].is_string())
                throw ParseError("netlist json: cell fields must be id/kind strings, in array, out string");
            auto kind = cell_kind_from_string(jc["kind"].get<std::string>());
            if (!kind)
                throw ParseError("netlist json: unknown cell kind '" +
                                 jc["kind"].get<std::string>() + "'");
            std::vector<std::string> ins;
            for (const auto& e : jc["in"]) {
                if (!e.is_string()) throw ParseError("netlist json: cell 'in' must contain strings");
                ins.push_back(e.get<std::string>());
            }
            nl.add_cell(jc["id"].get<std::string>(), *kind, ins, jc["out"].get<std::string>());
        }
        if (!j["ports"].is_object()) throw ParseError("netlist json: 'ports' must be an object");
        for (auto it = j["ports"].begin(); it != j["ports"].end(); ++it) {
            const auto& rails = it.value();
            if (!rails.is_array() || rails.size() != 2 || !rails[0].is_string() ||
                !rails[1].is_string())
                throw ParseError("netlist json: port '" + it.key() +
                                 "' must map to [rail1, rail0] net names");
            nl.mark_port(it.key(), rails[0].get<std::string>(), rails[1].get<std::string>());
        }
        return nl;
    } catch (const BuildError& e) {
        throw ParseError(std::string("netlist json: ") + e.what());
    }
}

bool structural_equal(const Netlist& a, const Netlist& b) {
    if (a.name() != b.name()) return false;
    if (a.nets().size() != b.nets().size() || a.cells().size() != b.cells().size() ||
        a.ports().size() != b.ports().size())
        return false;
    for (size_t i = 0; i < a.nets().size(); ++i)
        if (a.nets()[i].name != b.nets()[i].name || a.nets()[i].kind != b.nets()[i].kind)
            return false;
    auto net_name = [](const Netlist& nl, NetId n) -> const std::string& {
        return nl.nets()[n].name;
    };
    for (size_t i = 0; i < a.cells().size(); ++i) {
        const CellInstance& ca = a.cells()[i];
        const CellInstance& cb = b.cells()[i];
        if (ca.id != cb.id || ca.kind != cb.kind) return false;
        if (ca.inputs.size() != cb.inputs.size()) return false;
        for (size_t k = 0; k < ca.inputs.size(); ++k)
            if (net_name(a, ca.inputs[k]) != net_name(b, cb.inputs[k])) return false;
        if (net_name(a, ca.output) != net_name(b, cb.output)) return false;
    }
    for (size_t i = 0; i < a.ports().size(); ++i) {
        const auto& [pa, ra] = a.ports()[i];
        const auto& [pb, rb] = b.ports()[i];
        if (pa != pb || net_name(a, ra.rail1) != net_name(b, rb.rail1) ||
            net_name(a, ra.rail0) != net_name(b, rb.rail0))
            return false;
    }
    return true;
}

} // namespace drsim
