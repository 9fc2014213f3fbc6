#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qrt/vec3.hpp"

namespace qrt {

// Linear-radiance image. Gamma is applied only when encoding to PPM.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<Vec3> pixels;

    Image() = default;
    Image(int w, int h) : width(w), height(h), pixels(size_t(w) * h) {}

    Vec3& at(int x, int y) { return pixels[size_t(y) * width + x]; }
    const Vec3& at(int x, int y) const { return pixels[size_t(y) * width + x]; }
};

// Binary PPM (P6), 8 bits per channel, gamma 2.2 encoding at write time.
void write_ppm(std::ostream& os, const Image& img);
void write_ppm(const std::string& path, const Image& img);
std::string encode_ppm(const Image& img);

// Raw linear means, one row per pixel: x,y,r,g,b (header included).
void write_linear_csv(std::ostream& os, const Image& img);
void write_linear_csv(const std::string& path, const Image& img);

// Per-channel RMSE between two same-sized images, pooled over pixels and channels.
double image_rmse(const Image& a, const Image& b);

}  // namespace qrt
