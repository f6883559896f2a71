#pragma once

#include <stdexcept>
#include <string>

namespace fbc {

// Library-wide exception for contract and format failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fbc
