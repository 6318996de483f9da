// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace bfd {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// All per-channel filters are (numerically) zero at the probed frequency,
// so the white noise gain denominator vanishes.
class ZeroFilterEnergy : public Error {
public:
    explicit ZeroFilterEnergy(const std::string& msg) : Error(msg) {}
};

// The beamformer response magnitude is below the guard threshold; the phase
// (and hence the group delay) is undefined at this point.
class NearZeroResponse : public Error {
public:
    explicit NearZeroResponse(const std::string& msg) : Error(msg) {}
};

// A reduced parameterization was requested for a geometry whose element
// positions are not symmetric about the array origin.
class AsymmetricGeometry : public Error {
public:
    explicit AsymmetricGeometry(const std::string& msg) : Error(msg) {}
};

class ShapeMismatch : public Error {
public:
    explicit ShapeMismatch(const std::string& msg) : Error(msg) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

class NonpositiveFloor : public Error {
public:
    explicit NonpositiveFloor(const std::string& msg) : Error(msg) {}
};

// Configuration file could not be parsed or failed validation. The message
// lists every violated field.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// The conic solver failed twice in a row inside the iterative designer.
class SolverFailure : public Error {
public:
    explicit SolverFailure(const std::string& msg) : Error(msg) {}
};

}  // namespace bfd
