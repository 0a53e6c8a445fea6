#pragma once

#include "spags/types.hpp"

#include <string>

namespace spags {

// Dense row-major image, `channels` interleaved doubles per pixel.
// Values are conventionally in [0,1] for color and world units for depth.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;
  ArrXd data;  // size = width * height * channels

  Image() = default;
  Image(int w, int h, int c, Scalar fill = 0.0)
      : width(w), height(h), channels(c), data(ArrXd::Constant(std::ptrdiff_t(w) * h * c, fill)) {}

  Scalar& at(int x, int y, int c = 0) {
    return data[(std::ptrdiff_t(y) * width + x) * channels + c];
  }
  Scalar at(int x, int y, int c = 0) const {
    return data[(std::ptrdiff_t(y) * width + x) * channels + c];
  }
  Vec3d rgb(int x, int y) const { return {at(x, y, 0), at(x, y, 1), at(x, y, 2)}; }
  void set_rgb(int x, int y, const Vec3d& v) {
    at(x, y, 0) = v[0];
    at(x, y, 1) = v[1];
    at(x, y, 2) = v[2];
  }

  std::ptrdiff_t size() const { return data.size(); }
  bool same_shape(const Image& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }

  // Bilinear sample at continuous pixel coordinates (pixel centers at
  // integer+0.5). Clamps to the border.
  Scalar sample_bilinear(Scalar px, Scalar py, int c = 0) const;

  // Rec.601 luminance; identity for single-channel images.
  Image luminance() const;

  // Box 2x downsample (odd trailing row/column folded into the last cell).
  Image downsample_2x() const;
};

// 8-bit PNG, gray or RGB. Values clamped to [0,1] on write.
void save_png(const std::string& path, const Image& img);
Image load_png(const std::string& path);

// 32-bit float PFM ("Pf" gray / "PF" rgb), little-endian, top-down negative
// scale convention.
void save_pfm(const std::string& path, const Image& img);
Image load_pfm(const std::string& path);

}  // namespace spags
