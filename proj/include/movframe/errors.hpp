#pragma once

#include <stdexcept>
#include <string>

namespace movframe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// geometry-curves
class DegenerateCurve : public Error { using Error::Error; };
class VanishingCurvature : public Error { using Error::Error; };
class MissingTorsion : public Error { using Error::Error; };

// frames-connections
class FocalPointInStrip : public Error { using Error::Error; };

// spectral
class GridTooSmall : public Error { using Error::Error; };
class ConvergenceFailure : public Error { using Error::Error; };
class NonSymmetricOperator : public Error { using Error::Error; };

// dirac-reduction
class FocalPoint : public Error { using Error::Error; };

// surfaces
class DegeneratePatch : public Error { using Error::Error; };
class NonOrthogonalPatch : public Error { using Error::Error; };

// input loading
class ParseError : public Error { using Error::Error; };
class SchemaError : public Error { using Error::Error; };
class ConstraintError : public Error { using Error::Error; };

}  // namespace movframe
