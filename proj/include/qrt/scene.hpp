#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "qrt/vec3.hpp"

namespace qrt {

// Rays re-shot from a surface ignore hits closer than this, so secondary rays
// can start exactly at the hit position without self-intersecting.
constexpr double kRayEpsilon = 1e-4;

struct Ray {
    Vec3 origin;
    Vec3 direction;  // unit length
};

struct Triangle {
    Vec3 v0, v1, v2;
    int material_id = 0;
};

struct Material {
    Vec3 albedo;    // per-channel in [0,1]
    Vec3 emission;  // per-channel >= 0
};

// Hit record. A miss is the canonical null record: distance at the max
// sentinel so a plain min-fold over primitives needs no special case.
struct Intersection {
    bool exists = false;
    double distance = std::numeric_limits<double>::max();
    Vec3 position{};
    Vec3 normal{};
    int material_id = -1;

    static Intersection none() { return Intersection{}; }
};

// Pinhole camera. forward = cross(right, up); the frame must be orthonormal.
// Pixel (0,0) is the top-left corner, y grows downward.
struct Camera {
    Vec3 position;
    Vec3 right{1, 0, 0};
    Vec3 up{0, 1, 0};
    Vec3 forward{0, 0, 1};
    double vertical_fov = 1.0471975511965976;  // radians
    int width = 1;
    int height = 1;
};

struct Scene {
    std::vector<Triangle> triangles;
    std::vector<Material> materials;
    Camera camera;
    Vec3 background_emission{};
};

// Moller-Trumbore test, boundary inclusive, hits only at t > kRayEpsilon.
// The returned normal is the geometric normal flipped against the ray
// (materials are two-sided).
Intersection intersect_triangle(const Ray& ray, const Triangle& tri);

// Sequential fold over the primitive list keeping the nearer intersection.
Intersection nearest_chain(const Ray& ray, const Scene& scene);

// Line-oriented scene format, '#' starts a comment:
//   camera px py pz  rx ry rz  ux uy uz  fov_degrees width height
//   background r g b
//   material albedo_r albedo_g albedo_b emission_r emission_g emission_b
//   triangle v0x v0y v0z v1x v1y v1z v2x v2y v2z material_index
// Material indices are zero-based in file order. Parse and validation
// errors carry the offending line number; missing files raise IoError.
Scene load_scene(const std::string& path);
Scene load_scene(std::istream& is, const std::string& name = "<stream>");

// Ray through the continuous screen position (px + ju, py + jv).
Ray primary_ray(const Camera& cam, int px, int py, double ju, double jv);

struct Basis {
    Vec3 tangent;
    Vec3 bitangent;
    Vec3 normal;
};

// Deterministic right-handed orthonormal frame around a unit normal
// (branchless construction of Duff et al. 2017).
Basis orthonormal_basis(const Vec3& n);

}  // namespace qrt
