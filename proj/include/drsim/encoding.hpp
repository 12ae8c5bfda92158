#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace drsim {

// Delay-insensitive 1-of-2 (dual-rail) code. One bit uses two wires:
// (rail1, rail0) = (1,0) encodes 1, (0,1) encodes 0, (0,0) is the spacer
// separating successive data words, and (1,1) never occurs in a legal code.
enum class RailValue : uint8_t { Valid0, Valid1, Spacer, Illegal };

struct RailPair {
    uint8_t rail1 = 0;
    uint8_t rail0 = 0;

    RailValue classify() const {
        if (rail1 && rail0) return RailValue::Illegal;
        if (rail1) return RailValue::Valid1;
        if (rail0) return RailValue::Valid0;
        return RailValue::Spacer;
    }
    bool is_valid() const { return rail1 != rail0; }
    bool is_spacer() const { return !rail1 && !rail0; }

    static RailPair of_bit(int bit) { return bit ? RailPair{1, 0} : RailPair{0, 1}; }
    static RailPair spacer() { return {0, 0}; }

    bool operator==(const RailPair&) const = default;
};

enum class WordState : uint8_t { AllValid, AllSpacer, Partial, Illegal };

// A word of rail pairs; index 0 is the least significant bit. Partial words
// (a mix of valid pairs and spacers) are legal transient states and are
// first-class values, not errors.
struct DualRailWord {
    std::vector<RailPair> pairs;

    WordState state() const;
    unsigned width() const { return static_cast<unsigned>(pairs.size()); }

    bool operator==(const DualRailWord&) const = default;
};

struct DecodedWord {
    WordState state = WordState::AllSpacer;
    uint64_t value = 0; // meaningful only when state == AllValid
};

// Throws ConfigError unless 1 <= width <= 64 and value < 2^width.
DualRailWord encode_dual_rail(uint64_t value, unsigned width);

// All-spacer word. Throws ConfigError unless 1 <= width <= 64.
DualRailWord spacer_word(unsigned width);

// Total over all rail states; never throws.
DecodedWord decode_dual_rail(const DualRailWord& word);

// 1-of-4 code for one two-bit group (p is the more significant bit):
// (0,0)->F0, (0,1)->F1, (1,0)->F2, (1,1)->F3; all wires low is the spacer.
struct OneOfFourWord {
    std::array<uint8_t, 4> wires{}; // F0..F3

    bool operator==(const OneOfFourWord&) const = default;
};

enum class OneOfFourState : uint8_t { Value, Spacer, Invalid };

struct DecodedOneOfFour {
    OneOfFourState state = OneOfFourState::Spacer;
    int p = 0;
    int q = 0;
};

OneOfFourWord encode_one_of_four(int p, int q); // throws ConfigError unless p,q in {0,1}
DecodedOneOfFour decode_one_of_four(const OneOfFourWord& word);

} // namespace drsim
