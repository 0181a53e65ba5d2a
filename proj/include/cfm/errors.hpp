#pragma once

#include <stdexcept>
#include <string>

namespace cfm {

/// Base class for all solver errors so callers can catch the whole family.
struct CfmError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// frame_at() was asked for a frame at a non-differentiable curve parameter.
struct CornerPoint : CfmError {
    double theta;
    explicit CornerPoint(double th)
        : CfmError("interface frame requested at corner parameter " + std::to_string(th)), theta(th) {}
};

/// A region square is too small to contain every opposite-side stencil tap.
struct CoverageFailure : CfmError {
    int node;
    CoverageFailure(int node_, const std::string& what_) : CfmError(what_), node(node_) {}
};

/// A correction value is missing for a tap that needs one.
struct MissingCorrection : CfmError {
    int node;
    MissingCorrection(int node_, const std::string& what_) : CfmError(what_), node(node_) {}
};

/// Interpolant evaluated outside its region box beyond the extrapolation margin.
struct OutOfBox : CfmError {
    using CfmError::CfmError;
};

/// Derivative order beyond the cubic tensor basis.
struct UnsupportedOrder : CfmError {
    using CfmError::CfmError;
};

/// A region owns no piece of the interface; the tiling is inconsistent.
struct EmptyInterface : CfmError {
    using CfmError::CfmError;
};

/// Normal-equations matrix condition number exceeded the configured limit.
struct IllConditioned : CfmError {
    double cond;
    int node;
    IllConditioned(double cond_, int node_, const std::string& what_)
        : CfmError(what_), cond(cond_), node(node_) {}
};

/// Non-finite field values appeared during time stepping.
struct SimulationUnstable : CfmError {
    int step;
    SimulationUnstable(int step_, const std::string& what_) : CfmError(what_), step(step_) {}
};

/// Bad run configuration (rejected before any work starts).
struct ConfigError : CfmError {
    using CfmError::CfmError;
};

}  // namespace cfm
