#pragma once

#include <stdexcept>
#include <string>

namespace trolleyloc {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// geometry
struct DegeneratePair : Error {
  using Error::Error;
};

// estimators
struct TooFewPoints : Error {
  using Error::Error;
};
struct DegenerateConfiguration : Error {
  using Error::Error;
};
struct BehindCamera : Error {
  using Error::Error;
};
struct TooFewAnchors : Error {
  using Error::Error;
};
struct CollinearAnchors : Error {
  using Error::Error;
};
struct NoConvergence : Error {
  using Error::Error;
};
struct DegenerateCluster : Error {
  using Error::Error;
};

// world / evaluation
struct EmptyGrid : Error {
  using Error::Error;
};
struct EmptySamples : Error {
  using Error::Error;
};

// i/o
struct ConfigParse : Error {
  using Error::Error;
};
struct IoFailure : Error {
  using Error::Error;
};

}  // namespace trolleyloc
