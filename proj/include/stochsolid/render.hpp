#pragma once

#include "stochsolid/attenuation.hpp"
#include "stochsolid/math.hpp"
#include "stochsolid/scattering.hpp"
#include "stochsolid/transport.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace stochsolid {

/// Pinhole camera with its image plane at unit distance along the view axis.
class Camera {
public:
    Camera(Vec3 position, Vec3 look_at, Vec3 up, double fov_degrees, int width, int height);

    /// Ray through the continuous image coordinates (px, py), y pointing down.
    Ray generate(double px, double py, double t_far) const;

    struct Projection {
        int x;
        int y;
        double importance;  // We = 1 / (A_pixel cos³θ), θ the angle to the view axis
        double distance;
    };
    /// Pixel seeing point p, or nullopt when p is behind or outside the frustum.
    std::optional<Projection> project(const Vec3 &p) const;

    const Vec3 &position() const { return m_position; }
    int width() const { return m_width; }
    int height() const { return m_height; }
    double fov_degrees() const { return m_fov_degrees; }
    const Vec3 &look_at() const { return m_look_at; }
    const Vec3 &up() const { return m_up; }

private:
    Vec3 m_position, m_look_at, m_up;
    Vec3 m_forward, m_right, m_down;
    double m_fov_degrees;
    int m_width, m_height;
    double m_pixel_size;
};

struct PointLight {
    Vec3 position = Vec3(4.0, 2.0, 2.0);
    double intensity = 10.0;
};

struct RenderSettings {
    int spp = 16;
    int coarse = 64;
    int fine = 48;
    std::uint64_t seed = 1;
    double exposure = 1.0;
};

/// Scene for single-scattering renders under a point light.
struct RenderScene {
    AttenuationModel model;
    Camera camera;
    PointLight light;
    double albedo = 0.8;
    /// Region outside which the medium is treated as empty.
    Bounds bounds;
};

/// Single-channel linear image, row-major with y pointing down.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    Image() = default;
    Image(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, 0.0) {}

    double &at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double mean() const;
};

/// Camera rays sample one scattering distance from the discretized free-flight
/// masses and gather the point light through a shadow-ray transmittance.
Image path_trace(const RenderScene &scene, const RenderSettings &settings);

/// Photons leave the light towards the bounds, scatter once at a distance
/// drawn from the discretized free-flight masses and connect to the camera.
/// spp × width × height photons are traced.
Image light_trace(const RenderScene &scene, const RenderSettings &settings);

double rmse(const Image &a, const Image &b);

/// Binary P6 with 8 bits per channel, gamma 2.2 after scaling by `exposure`.
void write_ppm(const std::filesystem::path &path, const Image &image, double exposure);

/// Linear single-channel PFM.
void write_pfm(const std::filesystem::path &path, const Image &image);

}  // namespace stochsolid
