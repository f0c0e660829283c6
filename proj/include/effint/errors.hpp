#pragma once

#include <stdexcept>
#include <string>

namespace effint {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Raised when a generator-level question cannot be settled within the
// configured enumeration or recursion depth. Callers that expose tri-state
// verdicts catch this and report "unknown" instead.
class UndecidableAtDepth : public Error {
public:
  using Error::Error;
};

class ApproximationDepthExceeded : public Error {
public:
  using Error::Error;
};

class UndecidableDecomposition : public Error {
public:
  using Error::Error;
};

class NotAbsolutelyContinuous : public Error {
public:
  using Error::Error;
};

class TailBoundUnavailable : public Error {
public:
  using Error::Error;
};

class NotDense : public Error {
public:
  using Error::Error;
};

class StateSpaceMismatch : public Error {
public:
  using Error::Error;
};

class SpeedMismatch : public Error {
public:
  using Error::Error;
};

class InvalidPreMergingPoint : public Error {
public:
  using Error::Error;
};

class OverlappingPairs : public Error {
public:
  using Error::Error;
};

class UnrepresentableKernel : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

enum class Tri { False = 0, True = 1, Unknown = 2 };

inline Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

inline const char* tri_name(Tri t) {
  switch (t) {
    case Tri::False: return "false";
    case Tri::True: return "true";
    default: return "unknown";
  }
}

}  // namespace effint
