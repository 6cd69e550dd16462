#pragma once

#include <stdexcept>
#include <string>

namespace ssg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SSG_DECLARE_ERROR(Name)                 \
  class Name : public Error {                   \
   public:                                      \
    explicit Name(const std::string& what)      \
        : Error(std::string(#Name ": ") + what) {} \
  }

SSG_DECLARE_ERROR(NonComposable);
SSG_DECLARE_ERROR(BadRange);
SSG_DECLARE_ERROR(InvalidGraph);
SSG_DECLARE_ERROR(ClosureExceeded);
SSG_DECLARE_ERROR(PreconditionViolated);
SSG_DECLARE_ERROR(BoxClosureViolation);
SSG_DECLARE_ERROR(NotStronglyConnected);
SSG_DECLARE_ERROR(NoConvergence);
SSG_DECLARE_ERROR(NotPeriodic);
SSG_DECLARE_ERROR(WitnessIncomplete);
SSG_DECLARE_ERROR(SimplexEmpty);
SSG_DECLARE_ERROR(NotInLattice);
SSG_DECLARE_ERROR(DomainError);
SSG_DECLARE_ERROR(NotBalanced);
SSG_DECLARE_ERROR(SpecViolation);
SSG_DECLARE_ERROR(ParseError);
SSG_DECLARE_ERROR(ValidationError);

#undef SSG_DECLARE_ERROR

}  // namespace ssg
