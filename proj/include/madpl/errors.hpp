#pragma once

#include <stdexcept>
#include <string>

namespace madpl {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct UnknownDomain : Error { using Error::Error; };
struct UnknownSlot : Error { using Error::Error; };
struct UnknownAct : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct StaleCache : Error { using Error::Error; };
struct MissingValue : Error { using Error::Error; };
struct SamplingExhausted : Error { using Error::Error; };
struct EmptyCorpus : Error { using Error::Error; };
struct DivergenceError : Error { using Error::Error; };
struct MissingArtifact : Error { using Error::Error; };
struct MalformedCsv : Error { using Error::Error; };

}  // namespace madpl
