#pragma once

#include <stdexcept>

namespace dxpipe {

// Error taxonomy mirrors the CLI exit codes:
//   ConfigError  -> 2 (usage / configuration)
//   DataError    -> 3 (malformed or unusable input data)
//   NumericError -> 4 (degenerate numeric situation)
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dxpipe
