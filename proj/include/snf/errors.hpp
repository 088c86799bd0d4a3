#pragma once

#include <stdexcept>
#include <string>

namespace snf {

// Base class for all library errors. Subclasses map onto the CLI exit codes:
// config/argument problems -> 2, training divergence -> 3, I/O and decode -> 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeError : Error {
    using Error::Error;
};

struct ArgumentError : Error {
    using Error::Error;
};

// Carries the 1-based line number of the offending config line, or the byte
// offset for binary parse failures (-1 when unknown).
struct ParseError : Error {
    long where = -1;
    ParseError(const std::string& msg, long where_ = -1) : Error(msg), where(where_) {}
};

struct IoError : Error {
    using Error::Error;
};

// Names the chunk (1-based stage index) that failed to decode; 0 = header.
struct DecodeError : Error {
    int chunk = 0;
    DecodeError(const std::string& msg, int chunk_ = 0) : Error(msg), chunk(chunk_) {}
};

struct DivergedError : Error {
    int epoch = 0;
    DivergedError(const std::string& msg, int epoch_) : Error(msg), epoch(epoch_) {}
};

}  // namespace snf
