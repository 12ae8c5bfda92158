#include "drsim/encoding.hpp"

#include "drsim/error.hpp"

#include <string>

namespace drsim {

namespace {

void check_width(unsigned width) {
    if (width < 1 || width > 64)
        throw ConfigError("word width must be in [1,64], got " + std::to_string(width));
}

} // namespace

WordState DualRailWord::state() const {
    bool any_valid = false;
    bool any_spacer = false;
    for (const RailPair& p : pairs) {
        switch (p.classify()) {
        case RailValue::Illegal: return WordState::Illegal;
        case RailValue::Spacer: any_spacer = true; break;
        default: any_valid = true; break;
        }
    }
    if (any_valid && any_spacer) return WordState::Partial;
    if (any_valid) return WordState::AllValid;
    return WordState::AllSpacer;
}

DualRailWord encode_dual_rail(uint64_t value, unsigned width) {
    check_width(width);
    if (width < 64 && value >> width)
        throw ConfigError("value " + std::to_string(value) + " does not fit in " +
                          std::to_string(width) + " bits");
    DualRailWord word;
    word.pairs.reserve(width);
    for (unsigned i = 0; i < width; ++i)
        word.pairs.push_back(RailPair::of_bit(static_cast<int>((value >> i) & 1)));
    return word;
}

DualRailWord spacer_word(unsigned width) {
    check_width(width);
    DualRailWord word;
    word.pairs.assign(width, RailPair::spacer());
    return word;
}

DecodedWord decode_dual_rail(const DualRailWord& word) {
    DecodedWord out;
    out.state = word.state();
    if (out.state != WordState::AllValid) return out;
    for (unsigned i = 0; i < word.width(); ++i)
        if (word.pairs[i].classify() == RailValue::Valid1) out.value |= uint64_t{1} << i;
    return out;
}

OneOfFourWord encode_one_of_four(int p, int q) {
    if ((p & ~1) || (q & ~1))
        throw ConfigError("1-of-4 encode expects single bits");
    OneOfFourWord word;
    word.wires[static_cast<size_t>(p * 2 + q)] = 1;
    return word;
}

DecodedOneOfFour decode_one_of_four(const OneOfFourWord& word) {
    DecodedOneOfFour out;
    int high = -1;
    int count = 0;
    for (int i = 0; i < 4; ++i) {
        if (word.wires[static_cast<size_t>(i)]) {
            high = i;
            ++count;
        }
    }
    if (count == 0) {
        out.state = OneOfFourState::Spacer;
    } else if (count == 1) {
        out.state = OneOfFourState::Value;
        out.p = high >> 1;
        out.q = high & 1;
    } else {
        out.state = OneOfFourState::Invalid;
    }
    return out;
}

} // namespace drsim
