#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <vector>

namespace spags {

template <typename S> using Vec2 = Eigen::Matrix<S, 2, 1>;
template <typename S> using Vec3 = Eigen::Matrix<S, 3, 1>;
template <typename S> using Vec4 = Eigen::Matrix<S, 4, 1>;
template <typename S> using Mat2 = Eigen::Matrix<S, 2, 2>;
template <typename S> using Mat3 = Eigen::Matrix<S, 3, 3>;
template <typename S> using Quat = Eigen::Quaternion<S>;

// Pipeline scalar. Core geometry stays templated; modules instantiate double.
using Scalar = double;
using Vec2d = Vec2<Scalar>;
using Vec3d = Vec3<Scalar>;
using Vec4d = Vec4<Scalar>;
using Mat2d = Mat2<Scalar>;
using Mat3d = Mat3<Scalar>;
using Quatd = Quat<Scalar>;
using VecXd = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using ArrXd = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

}  // namespace spags
