#pragma once

#include <stdexcept>
#include <string>

namespace shockspec {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An equilibrium matrix has an eigenvalue at (or numerically at) zero.
struct NonHyperbolicError : Error { using Error::Error; };

/// A coefficient matrix fails the symmetry requirement.
struct SymmetryError : Error { using Error::Error; };

/// Model geometry is inconsistent (equilibrium outside its region,
/// crossing point off its hyperplane, non-unit normal, ...).
struct ModelGeometryError : Error { using Error::Error; };

/// Normal flux at a crossing is not strictly positive on both sides.
struct TransversalityError : Error { using Error::Error; };

/// A trajectory segment does not reach the prescribed next interface.
struct NoConnectionError : Error { using Error::Error; };

/// Operation requires a different number of crossings than the input has.
struct WrongTopologyError : Error { using Error::Error; };

/// A scalar field coefficient h is zero where a nonzero value is required.
struct DegenerateFieldError : Error { using Error::Error; };

/// Spectral parameter outside the admissible half-plane.
struct OutOfDomainError : Error { using Error::Error; };

/// Query point lies on the boundary parabola of the root-count regions.
struct BoundaryError : Error { using Error::Error; };

/// Matrix pencil became defective where a diagonalization was required.
struct DegenerateError : Error { using Error::Error; };

/// The function is (numerically) zero somewhere on a winding contour.
struct ContourHitsRootError : Error { using Error::Error; };

/// Mollifier layers of two interfaces overlap for the requested width.
struct LayerOverlapError : Error { using Error::Error; };

/// Step-size control underflowed during a smoothed integration.
struct StiffnessError : Error { using Error::Error; };

/// A convergence fit could not be performed on the measured data.
struct FitFailedError : Error { using Error::Error; };

/// Exponential overflow that automatic rescaling could not absorb.
struct OverflowError : Error { using Error::Error; };

/// Branch continuation failed beyond the reach of step halving.
struct TraceLostError : Error { using Error::Error; };

/// Malformed input file or configuration.
struct FormatError : Error { using Error::Error; };

} // namespace shockspec
