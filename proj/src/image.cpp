#include "qrt/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qrt/errors.hpp"

namespace qrt {

namespace {

uint8_t encode_channel(double v) {
    const double clamped = std::clamp(v, 0.0, 1.0);
    const double encoded = std::pow(clamped, 1.0 / 2.2);
    return uint8_t(std::lround(encoded * 255.0));
}

}  // namespace

void write_ppm(std::ostream& os, const Image& img) {
    os << "P6\n" << img.width << " " << img.height << "\n255\n";
    for (const Vec3& p : img.pixels) {
        const uint8_t rgb[3] = {encode_channel(p.x), encode_channel(p.y), encode_channel(p.z)};
        os.write(reinterpret_cast<const char*>(rgb), 3);
    }
}

void write_ppm(const std::string& path, const Image& img) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_ppm(os, img);
    if (!os) throw IoError("write failed: " + path);
}

std::string encode_ppm(const Image& img) {
    std::ostringstream os;
    write_ppm(os, img);
    return os.str();
}

void write_linear_csv(std::ostream& os, const Image& img) {
    os << "x,y,r,g,b\n";
    os.precision(17);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const Vec3& p = img.at(x, y);
            os << x << "," << y << "," << p.x << "," << p.y << "," << p.z << "\n";
        }
    }
}

void write_linear_csv(const std::string& path, const Image& img) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_linear_csv(os, img);
    if (!os) throw IoError("write failed: " + path);
}

double image_rmse(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height)
        throw ConfigError("image_rmse: size mismatch");
    double sum = 0.0;
    for (size_t i = 0; i < a.pixels.size(); ++i) {
        const Vec3 d = a.pixels[i] - b.pixels[i];
        sum += dot(d, d);
    }
    return std::sqrt(sum / (3.0 * double(a.pixels.size())));
}

}  // namespace qrt
