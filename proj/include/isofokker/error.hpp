#pragma once

#include <stdexcept>
#include <string>

namespace isofokker {

/// Raised when a numerical construction cannot meet its own reliability
/// checks (non-convergence, mask contamination, nodes in a ground state).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace isofokker
