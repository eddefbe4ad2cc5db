#pragma once

#include <stdexcept>
#include <string>

namespace hfsys
{
// Invalid inputs.
struct NonPositivePotential : std::invalid_argument
{
	using std::invalid_argument::invalid_argument;
};
struct ZeroState : std::invalid_argument
{
	using std::invalid_argument::invalid_argument;
};
struct MissingGradientFields : std::invalid_argument
{
	using std::invalid_argument::invalid_argument;
};
struct NotApplicable : std::invalid_argument
{
	using std::invalid_argument::invalid_argument;
};
struct NoPositivePower : std::invalid_argument
{
	using std::invalid_argument::invalid_argument;
};
struct BoxTooSmall : std::invalid_argument
{
	using std::invalid_argument::invalid_argument;
};
struct ConfigError : std::invalid_argument
{
	using std::invalid_argument::invalid_argument;
};

// Failures of numerical procedures.
struct RootAbsent : std::runtime_error
{
	using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error
{
	using std::runtime_error::runtime_error;
};
struct Diverged : std::runtime_error
{
	using std::runtime_error::runtime_error;
};
struct NotASolution : std::runtime_error
{
	using std::runtime_error::runtime_error;
};
struct GuardViolation : std::runtime_error
{
	using std::runtime_error::runtime_error;
};
}  // namespace hfsys
