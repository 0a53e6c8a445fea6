#include "spags/gaussian.hpp"

#include <cmath>

namespace spags {

void validate(const GaussianPrimitive& g, int part_count) {
  if (std::abs(g.rotation.norm() - 1.0) > 1e-6)
    throw ValidationError("quaternion norm deviates from 1 beyond 1e-6");
  if (!(g.scales.array() > 0).all())
    throw ValidationError("scales must be positive");
  if (!(g.opacity > 0.0 && g.opacity < 1.0))
    throw ValidationError("opacity must lie in (0,1)");
  if (g.potential < 0.0)
    throw ValidationError("potential must be non-negative");
  if (std::abs(g.reliability - std::exp(-g.potential)) > 1e-9)
    throw ValidationError("reliability != exp(-potential)");
  if (g.part_probs.size() != 0 && g.part_probs.size() != part_count)
    throw ValidationError("part_probs length != part_count");
}

void validate(const GaussianCloud& cloud) {
  if (cloud.part_count < 1) throw ValidationError("part_count must be >= 1");
  for (const auto& g : cloud.primitives) validate(g, cloud.part_count);
  if (!cloud.part_ids.empty() && cloud.part_ids.size() != cloud.primitives.size())
    throw ValidationError("part_ids length != primitive count");
}

Aabb bounds(const GaussianCloud& cloud) {
  Aabb box;
  for (const auto& g : cloud.primitives) box.expand(g.position);
  return box;
}

}  // namespace spags
