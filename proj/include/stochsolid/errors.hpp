#pragma once

#include <stdexcept>
#include <string>

namespace stochsolid {

/// Invalid scene, render or CLI configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The vacancy gradient is below the floor, so the level-set normal is undefined.
class DegenerateGradient : public std::runtime_error {
public:
    DegenerateGradient() : std::runtime_error("vacancy gradient below floor; normal undefined") {}
};

/// The projected area in the outgoing direction vanishes, so the phase function is undefined.
class GrazingDirection : public std::runtime_error {
public:
    GrazingDirection() : std::runtime_error("projected area is zero for the outgoing direction") {}
};

}  // namespace stochsolid
