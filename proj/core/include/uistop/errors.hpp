#pragma once

#include <stdexcept>
#include <string>

namespace uistop {

// Economic validity condition mu < r + lambda0 (+ lambda2) is violated.
class assumption_error : public std::domain_error {
public:
    explicit assumption_error(const std::string& what) : std::domain_error(what) {}
};

// sigma == 0: the stochastic formulas are 0/0; use the deterministic path.
class degenerate_sigma_error : public std::domain_error {
public:
    explicit degenerate_sigma_error(const std::string& what) : std::domain_error(what) {}
};

} // namespace uistop
