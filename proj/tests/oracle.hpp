// Test-local oracles, independent of the library implementations they check.
#pragma once

#include "drsim/netlist.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace oracle {

// Expected adder behaviour straight from integer arithmetic.
inline uint64_t sum_bits(uint64_t a, uint64_t b, int cin, unsigned width) {
    const uint64_t total = a + b + static_cast<uint64_t>(cin);
    return width >= 64 ? total : total & ((uint64_t{1} << width) - 1);
}

inline int carry_bit(uint64_t a, uint64_t b, int cin, unsigned width) {
    const uint64_t total = a + b + static_cast<uint64_t>(cin);
    return static_cast<int>((total >> width) & 1);
}

// Longest input-to-output path by plain recursion over the cell graph, every
// cell weighted by its model delay. Exponential in principle, fine for the
// block-sized netlists it is used on.
inline int longest_path_brute(const drsim::Netlist& nl, const drsim::TimingAreaModel& model) {
    std::map<drsim::NetId, int> memo;
    struct Walker {
        const drsim::Netlist& nl;
        const drsim::TimingAreaModel& model;
        std::map<drsim::NetId, int>& memo;
        int depth_to(drsim::NetId net) {
            auto it = memo.find(net);
            if (it != memo.end()) return it->second;
            uint32_t driver = nl.driver_of(net);
            int depth = 0;
            if (driver != drsim::kNoCell) {
                const drsim::CellInstance& c = nl.cells()[driver];
                int best = 0;
                for (drsim::NetId in : c.inputs) best = std::max(best, depth_to(in));
                depth = best + model.delay_of(c.kind);
            }
            memo[net] = depth;
            return depth;
        }
    } walker{nl, model, memo};
    int best = 0;
    for (drsim::NetId n = 0; n < nl.nets().size(); ++n)
        if (nl.nets()[n].kind == drsim::NetKind::PrimaryOutput)
            best = std::max(best, walker.depth_to(n));
    return best;
}

// Minimal product-list evaluator used to cross-check the library's own.
inline bool product_true(const std::vector<std::string>& literals,
                         const std::map<std::string, uint8_t>& rails) {
    for (const std::string& lit : literals)
        if (!rails.at(lit)) return false;
    return true;
}

} // namespace oracle
