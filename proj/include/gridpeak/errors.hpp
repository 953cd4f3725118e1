#pragma once

#include <stdexcept>

namespace gridpeak {

/// Malformed or inconsistent input data (files, schemas, series coverage).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gridpeak
