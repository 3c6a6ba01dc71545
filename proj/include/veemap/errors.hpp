#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace veemap {

// Out-of-range indices and invalid physical input use std::domain_error.

struct ConfigurationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StiffnessError : NumericError {
    using NumericError::NumericError;
};

struct PostSelectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// soft problems (regime guards, cutoff hints) collected instead of thrown
struct Diagnostics {
    std::vector<std::string> warnings;
    void warn(std::string w) { warnings.push_back(std::move(w)); }
    bool empty() const { return warnings.empty(); }
};

}  // namespace veemap
