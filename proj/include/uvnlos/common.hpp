// SPDX-License-Identifier: Apache-2.0
//! \file uvnlos/common.hpp
//! Shared vector alias, constants and the exception hierarchy.
#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace uvnlos
{
using Vec3 = Eigen::Vector3d;

inline constexpr double pi = std::numbers::pi;

//! Base class for every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! An argument lies outside the mathematical domain of an operation.
class DomainError : public Error
{
  public:
    using Error::Error;
};

//! cot(alpha) is undefined at working precision (alpha = 0 or pi).
class DegenerateAzimuth : public Error
{
  public:
    using Error::Error;
};

//! Rotating-plane normal has vanishing Y/Z components.
class DegenerateFrame : public Error
{
  public:
    using Error::Error;
};

//! A NaN reached the case/condition comparison.
class UnorderedFrame : public Error
{
  public:
    using Error::Error;
};

//! Total scattering coefficient is zero.
class ZeroScattering : public Error
{
  public:
    using Error::Error;
};

//! Scene fails the constraints required by the selected evaluator.
class InvalidGeometry : public Error
{
  public:
    using Error::Error;
};

//! Configuration document could not be parsed.
class ParseError : public Error
{
  public:
    using Error::Error;
};

//! Configuration parsed but violates one or more invariants.
class ValidationError : public Error
{
  public:
    using Error::Error;
};

inline constexpr double deg_to_rad(double deg) { return deg * pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / pi; }

}  // namespace uvnlos
