#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cmclab {

// Root of every error thrown by the library. Each concrete error is a
// distinct type so callers can catch the exact failure they expect.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define CMCLAB_DEFINE_ERROR(Name)                  \
    class Name : public Error {                    \
    public:                                        \
        using Error::Error;                        \
    };

// mesh-core
CMCLAB_DEFINE_ERROR(TopologyError)
CMCLAB_DEFINE_ERROR(DimensionError)
CMCLAB_DEFINE_ERROR(IoError)
CMCLAB_DEFINE_ERROR(NotOrthogonal)
CMCLAB_DEFINE_ERROR(NonPositiveFactor)

// curvature
CMCLAB_DEFINE_ERROR(DegenerateTriangle)
CMCLAB_DEFINE_ERROR(CodimensionError)
CMCLAB_DEFINE_ERROR(DegenerateVolume)

// functionals
CMCLAB_DEFINE_ERROR(DegeneratePositions)
CMCLAB_DEFINE_ERROR(PreconditionUnmet)
CMCLAB_DEFINE_ERROR(NegativeVolume)

// density
CMCLAB_DEFINE_ERROR(NonPositiveRadius)
CMCLAB_DEFINE_ERROR(InvalidGamma)
CMCLAB_DEFINE_ERROR(NonPositiveW)
CMCLAB_DEFINE_ERROR(BadSample)

// sphere-map
CMCLAB_DEFINE_ERROR(GenusError)
CMCLAB_DEFINE_ERROR(FlowDiverged)
CMCLAB_DEFINE_ERROR(CenteringDiverged)
CMCLAB_DEFINE_ERROR(DegenerateCovariance)

// generators / lab
CMCLAB_DEFINE_ERROR(InvalidSpec)

#undef CMCLAB_DEFINE_ERROR

/// Malformed input text; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what)
        , m_line(line)
    {}

    std::size_t line() const { return m_line; }

private:
    std::size_t m_line;
};

/// Invalid experiment configuration; names the offending key and line.
class ConfigError : public Error {
public:
    ConfigError(std::string key, std::size_t line, const std::string& what)
        : Error(
              (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
              (key.empty() ? std::string() : "'" + key + "': ") + what)
        , m_key(std::move(key))
        , m_line(line)
    {}

    const std::string& key() const { return m_key; }
    std::size_t line() const { return m_line; }

private:
    std::string m_key;
    std::size_t m_line;
};

} // namespace cmclab
