#pragma once

#include <stdexcept>
#include <string>

namespace hnet {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A forward or backward pass produced NaN/Inf.
struct NonFiniteError : Error {
  using Error::Error;
};

// Malformed input file (embeddings, corpus, pairs, ...).
struct ParseError : Error {
  using Error::Error;
};

// Invalid run configuration; `path` points at the offending JSON key or flag.
struct ConfigError : Error {
  ConfigError(std::string path_in, const std::string& msg)
      : Error(path_in + ": " + msg), path(std::move(path_in)) {}
  std::string path;
};

struct CheckpointError : Error {
  enum class Code {
    bad_magic,
    bad_version,
    truncated,
    malformed,
    missing_params,
    shape_mismatch,
    io,
  };
  CheckpointError(Code c, const std::string& msg) : Error(msg), code(c) {}
  Code code;
};

}  // namespace hnet
