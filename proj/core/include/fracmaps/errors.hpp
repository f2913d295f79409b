#pragma once

#include <stdexcept>
#include <string>

namespace fracmaps {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FRACMAPS_DEFINE_ERROR(Name)        \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

FRACMAPS_DEFINE_ERROR(InvalidArgument);
FRACMAPS_DEFINE_ERROR(OverlappingIntervals);
FRACMAPS_DEFINE_ERROR(NoConvergence);
FRACMAPS_DEFINE_ERROR(AmbiguousProjection);
FRACMAPS_DEFINE_ERROR(NotOnManifold);
FRACMAPS_DEFINE_ERROR(GridMismatch);
FRACMAPS_DEFINE_ERROR(MisalignedSubwindow);
FRACMAPS_DEFINE_ERROR(ProjectionFailure);
FRACMAPS_DEFINE_ERROR(WrongTarget);
FRACMAPS_DEFINE_ERROR(GridTooCoarse);
FRACMAPS_DEFINE_ERROR(RegionNotCovered);
FRACMAPS_DEFINE_ERROR(BadRadii);
FRACMAPS_DEFINE_ERROR(CoverageExceeded);
FRACMAPS_DEFINE_ERROR(InsufficientRadii);

#undef FRACMAPS_DEFINE_ERROR

}  // namespace fracmaps
