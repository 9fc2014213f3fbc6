#include "qrt/scene.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qrt/errors.hpp"

namespace qrt {

Intersection intersect_triangle(const Ray& ray, const Triangle& tri) {
    const Vec3 e1 = tri.v1 - tri.v0;
    const Vec3 e2 = tri.v2 - tri.v0;
    const Vec3 pvec = cross(ray.direction, e2);
    const double det = dot(e1, pvec);
    if (std::abs(det) < 1e-12) return Intersection::none();  // parallel or degenerate

    const double inv_det = 1.0 / det;
    const Vec3 tvec = ray.origin - tri.v0;
    const double u = dot(tvec, pvec) * inv_det;
    if (u < 0.0 || u > 1.0) return Intersection::none();

    const Vec3 qvec = cross(tvec, e1);
    const double v = dot(ray.direction, qvec) * inv_det;
    if (v < 0.0 || u + v > 1.0) return Intersection::none();

    const double t = dot(e2, qvec) * inv_det;
    if (t <= kRayEpsilon) return Intersection::none();

    Intersection hit;
    hit.exists = true;
    hit.distance = t;
    hit.position = ray.origin + t * ray.direction;
    Vec3 n = normalize(cross(e1, e2));
    if (dot(n, ray.direction) > 0.0) n = -n;  // face the incoming ray
    hit.normal = n;
    hit.material_id = tri.material_id;
    return hit;
}

Intersection nearest_chain(const Ray& ray, const Scene& scene) {
    Intersection nearest = Intersection::none();
    for (const Triangle& tri : scene.triangles) {
        const Intersection hit = intersect_triangle(ray, tri);
        if (hit.exists && hit.distance < nearest.distance) nearest = hit;
    }
    return nearest;
}

Ray primary_ray(const Camera& cam, int px, int py, double ju, double jv) {
    const double tan_half = std::tan(cam.vertical_fov * 0.5);
    const double aspect = double(cam.width) / double(cam.height);
    const double sx = ((px + ju) / cam.width * 2.0 - 1.0) * tan_half * aspect;
    const double sy = (1.0 - (py + jv) / cam.height * 2.0) * tan_half;
    return {cam.position, normalize(cam.right * sx + cam.up * sy + cam.forward)};
}

Basis orthonormal_basis(const Vec3& n) {
    const double sign = std::copysign(1.0, n.z);
    const double a = -1.0 / (sign + n.z);
    const double b = n.x * n.y * a;
    const Vec3 tangent{1.0 + sign * n.x * n.x * a, sign * b, -sign * n.x};
    const Vec3 bitangent{b, sign + n.y * n.y * a, -n.y};
    return {tangent, bitangent, n};
}

namespace {

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
    throw ConfigError(name + ":" + std::to_string(line) + ": " + msg);
}

struct LineParser {
    std::istringstream in;
    const std::string& name;
    int line;

    LineParser(const std::string& text, const std::string& name_, int line_)
        : in(text), name(name_), line(line_) {}

    double number(const char* what) {
        double v;
        if (!(in >> v)) fail(name, line, std::string("expected number for ") + what);
        return v;
    }
    int integer(const char* what) {
        int v;
        if (!(in >> v)) fail(name, line, std::string("expected integer for ") + what);
        return v;
    }
    Vec3 vec(const char* what) {
        const double x = number(what), y = number(what), z = number(what);
        return {x, y, z};
    }
    void done() {
        std::string extra;
        if (in >> extra) fail(name, line, "unexpected trailing token '" + extra + "'");
    }
};

constexpr double kFrameTolerance = 1e-9;

}  // namespace

Scene load_scene(std::istream& is, const std::string& name) {
    Scene scene;
    bool have_camera = false;
    std::vector<int> triangle_lines;  // for material-index validation after the pass

    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        if (const size_t hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream probe(raw);
        std::string keyword;
        if (!(probe >> keyword)) continue;  // blank or comment-only

        LineParser p(raw.substr(raw.find(keyword) + keyword.size()), name, line);
        if (keyword == "camera") {
            if (have_camera) fail(name, line, "duplicate camera line");
            Camera cam;
            cam.position = p.vec("camera position");
            cam.right = p.vec("camera right");
            cam.up = p.vec("camera up");
            const double fov_deg = p.number("fov");
            cam.width = p.integer("width");
            cam.height = p.integer("height");
            p.done();
            if (std::abs(length(cam.right) - 1.0) > kFrameTolerance ||
                std::abs(length(cam.up) - 1.0) > kFrameTolerance ||
                std::abs(dot(cam.right, cam.up)) > kFrameTolerance)
                fail(name, line, "camera frame is not orthonormal");
            if (!(fov_deg > 0.0 && fov_deg < 180.0))
                fail(name, line, "fov must be in (0, 180) degrees");
            if (cam.width < 1 || cam.height < 1) fail(name, line, "resolution must be positive");
            cam.forward = cross(cam.right, cam.up);
            cam.vertical_fov = fov_deg * std::numbers::pi / 180.0;
            scene.camera = cam;
            have_camera = true;
        } else if (keyword == "background") {
            scene.background_emission = p.vec("background");
            p.done();
            if (min_component(scene.background_emission) < 0.0)
                fail(name, line, "background emission must be non-negative");
        } else if (keyword == "material") {
            Material m;
            m.albedo = p.vec("albedo");
            m.emission = p.vec("emission");
            p.done();
            if (min_component(m.albedo) < 0.0 || max_component(m.albedo) > 1.0)
                fail(name, line, "albedo channels must be in [0,1]");
            if (min_component(m.emission) < 0.0)
                fail(name, line, "emission channels must be non-negative");
            scene.materials.push_back(m);
        } else if (keyword == "triangle") {
            Triangle t;
            t.v0 = p.vec("v0");
            t.v1 = p.vec("v1");
            t.v2 = p.vec("v2");
            t.material_id = p.integer("material index");
            p.done();
            if (length(cross(t.v1 - t.v0, t.v2 - t.v0)) <= 1e-12)
                fail(name, line, "degenerate triangle");
            if (t.material_id < 0) fail(name, line, "material index must be non-negative");
            scene.triangles.push_back(t);
            triangle_lines.push_back(line);
        } else {
            fail(name, line, "unknown keyword '" + keyword + "'");
        }
    }

    if (!have_camera) fail(name, line, "missing camera line");
    for (size_t i = 0; i < scene.triangles.size(); ++i) {
        const int id = scene.triangles[i].material_id;
        if (id >= int(scene.materials.size()))
            fail(name, triangle_lines[i],
                 "material index " + std::to_string(id) + " out of range (" +
                     std::to_string(scene.materials.size()) + " materials)");
    }
    return scene;
}

Scene load_scene(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open scene file: " + path);
    return load_scene(is, path);
}

}  // namespace qrt
