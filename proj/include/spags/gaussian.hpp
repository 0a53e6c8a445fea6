#pragma once

#include "spags/types.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace spags {

// One anisotropic splat. Stored values are the *activated* ones: `scales`
// are positive lengths (exp of the optimizer's log-scales) and `opacity`
// is post-sigmoid in (0,1). `reliability` tracks exp(-potential) for the
// view planner; `part_probs` holds per-part membership evidence in [0,1].
struct GaussianPrimitive {
  Vec3d position = Vec3d::Zero();
  Quatd rotation = Quatd::Identity();  // unit, w first
  Vec3d scales = Vec3d::Ones();
  Scalar opacity = 0.5;
  Vec3d color = Vec3d::Constant(0.5);  // SH degree 0, RGB in [0,1]
  Scalar reliability = 1.0;            // P_i = exp(-E_i)
  Scalar potential = 0.0;              // E_i >= 0
  VecXd part_probs;                    // length = cloud part_count
};

struct GaussianCloud {
  std::vector<GaussianPrimitive> primitives;
  int part_count = 1;
  // Part id per primitive once assigned; -1 = unassigned. Parallel to
  // `primitives`, empty until assign_parts has run.
  std::vector<int> part_ids;

  std::size_t size() const { return primitives.size(); }
  bool empty() const { return primitives.empty(); }

  GaussianPrimitive& operator[](std::size_t i) { return primitives[i]; }
  const GaussianPrimitive& operator[](std::size_t i) const { return primitives[i]; }
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Checks the documented invariants (unit quaternion, positive scales,
// opacity in (0,1), P = exp(-E), part_probs length). Throws ValidationError.
void validate(const GaussianPrimitive& g, int part_count);
void validate(const GaussianCloud& cloud);

// Axis-aligned bounds over primitive centers.
struct Aabb {
  Vec3d lo = Vec3d::Constant(std::numeric_limits<Scalar>::max());
  Vec3d hi = Vec3d::Constant(std::numeric_limits<Scalar>::lowest());
  void expand(const Vec3d& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  Vec3d extent() const { return hi - lo; }
  Vec3d center() const { return 0.5 * (lo + hi); }
  bool valid() const { return (hi.array() >= lo.array()).all(); }
};

Aabb bounds(const GaussianCloud& cloud);

}  // namespace spags
