#pragma once

#include "spags/render.hpp"

#include <cstdint>
#include <string>

namespace spags {

// Scalar functionals of the render buffers used for finite-difference
// verification: a fixed random projection of one output channel.
enum class RenderFunctional { Color, Alpha, Depth, Normal };

struct GradCheckReport {
  Scalar max_err_position = 0;
  Scalar max_err_rotation = 0;
  Scalar max_err_scales = 0;
  Scalar max_err_opacity = 0;
  Scalar max_err_color = 0;
  Scalar max_err() const;
  std::string summary() const;
};

// Compares render_backward against central finite differences for every
// parameter of every primitive. For the depth functional the valid-pixel
// mask is frozen from the unperturbed render. Relative error uses
// |a - f| / max(|a|, |f|, floor).
GradCheckReport gradcheck(const GaussianCloud& cloud, const Camera& cam,
                          RenderFunctional functional, const RenderConfig& config = {},
                          Scalar step = 1e-4, std::uint64_t seed = 17,
                          Scalar denom_floor = 1e-6);

}  // namespace spags
