#pragma once

#include <stdexcept>

namespace drsim {

// Error taxonomy shared across the toolkit:
//   ConfigError -- bad user input (flags, compositions, ranges); CLI exit 2
//   ParseError  -- malformed input files (netlist JSON, model overrides, vectors)
//   BuildError  -- netlist construction misuse (arity, double drive, duplicates)
//   SimError    -- simulation failures (divergence, deadlock, illegal code word)
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct BuildError : Error {
    using Error::Error;
};
struct SimError : Error {
    using Error::Error;
};

} // namespace drsim
