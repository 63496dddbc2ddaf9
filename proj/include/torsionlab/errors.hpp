#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

namespace torsionlab {

/// Base of every error raised by the toolkit. `name()` is the stable error
/// identifier printed by the CLI; `payload()` carries the numeric context.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& message, nlohmann::ordered_json payload = {})
      : std::runtime_error(message), name_(std::move(name)), payload_(std::move(payload)) {}

  const std::string& name() const noexcept { return name_; }
  const nlohmann::ordered_json& payload() const noexcept { return payload_; }

 private:
  std::string name_;
  nlohmann::ordered_json payload_;
};

#define TORSIONLAB_ERROR(Type)                                                      \
  class Type : public Error {                                                       \
   public:                                                                          \
    explicit Type(const std::string& message, nlohmann::ordered_json payload = {}) \
        : Error(#Type, message, std::move(payload)) {}                              \
  }

// Input and precondition failures.
TORSIONLAB_ERROR(InvalidArgument);
TORSIONLAB_ERROR(UnknownIdentifier);
TORSIONLAB_ERROR(UnknownFixture);
TORSIONLAB_ERROR(SchemaError);

// expr
TORSIONLAB_ERROR(DomainError);

// geom
TORSIONLAB_ERROR(ZeroVector);
TORSIONLAB_ERROR(RefinementExhausted);
TORSIONLAB_ERROR(NotClosed);
TORSIONLAB_ERROR(NonIntegralWinding);
TORSIONLAB_ERROR(NotALift);
TORSIONLAB_ERROR(OriginNotInCover);

// genfunc
TORSIONLAB_ERROR(SolverDiverged);
TORSIONLAB_ERROR(TwistBoundViolated);

// foliate
TORSIONLAB_ERROR(StartsSingular);
TORSIONLAB_ERROR(AllStationary);
TORSIONLAB_ERROR(SingularOnCircle);

// indices
TORSIONLAB_ERROR(NotIdentityAtZero);
TORSIONLAB_ERROR(FixedPointOnCurve);
TORSIONLAB_ERROR(CenterNotFixed);
TORSIONLAB_ERROR(TrajectoryCollision);
TORSIONLAB_ERROR(NotFixed);

// rotation
TORSIONLAB_ERROR(NotOrientationPreserving);
TORSIONLAB_ERROR(NoSamples);

#undef TORSIONLAB_ERROR

/// Parse failure with the byte offset of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t offset)
      : Error("SyntaxError", message + " at offset " + std::to_string(offset),
              {{"offset", offset}}),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace torsionlab
