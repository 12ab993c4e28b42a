#include "stochsolid/render.hpp"

#include "stochsolid/errors.hpp"
#include "stochsolid/parallel.hpp"
#include "stochsolid/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace stochsolid {

Camera::Camera(Vec3 position, Vec3 look_at, Vec3 up, double fov_degrees, int width, int height)
    : m_position(std::move(position)), m_look_at(std::move(look_at)), m_up(std::move(up)),
      m_fov_degrees(fov_degrees), m_width(width), m_height(height) {
    if (width < 1 || height < 1) throw ConfigError("image size must be at least 1x1");
    if (!(fov_degrees > 0.0 && fov_degrees < 180.0)) throw ConfigError("camera fov must lie in (0, 180) degrees");
    const Vec3 forward = m_look_at - m_position;
    if (!(forward.norm() > 0.0)) throw ConfigError("camera position and look-at coincide");
    m_forward = forward.normalized();
    const Vec3 right = m_forward.cross(m_up);
    if (!(right.norm() > 1e-12)) throw ConfigError("camera up vector is parallel to the view direction");
    m_right = right.normalized();
    m_down = m_forward.cross(m_right);
    const double fov = fov_degrees * kPi / 180.0;
    m_pixel_size = 2.0 * std::tan(0.5 * fov) / height;
}

Ray Camera::generate(double px, double py, double t_far) const {
    const Vec3 dir = m_forward + (px - 0.5 * m_width) * m_pixel_size * m_right +
                     (py - 0.5 * m_height) * m_pixel_size * m_down;
    return Ray(m_position, dir, 0.0, t_far);
}

std::optional<Camera::Projection> Camera::project(const Vec3 &p) const {
    const Vec3 d = p - m_position;
    const double z = d.dot(m_forward);
    if (!(z > 0.0)) return std::nullopt;
    const double px = d.dot(m_right) / z / m_pixel_size + 0.5 * m_width;
    const double py = d.dot(m_down) / z / m_pixel_size + 0.5 * m_height;
    if (!(px >= 0.0 && px < m_width && py >= 0.0 && py < m_height)) return std::nullopt;
    const double distance = d.norm();
    const double cos_theta = z / distance;
    const double importance = 1.0 / (m_pixel_size * m_pixel_size * cos_theta * cos_theta * cos_theta);
    return Projection{static_cast<int>(px), static_cast<int>(py), importance, distance};
}

double Image::mean() const {
    if (pixels.empty()) return 0.0;
    return std::accumulate(pixels.begin(), pixels.end(), 0.0) / static_cast<double>(pixels.size());
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kLightStreamBase = 1ULL << 40;
constexpr std::size_t kPhaseSamples = 8;

struct Scatter {
    Vec3 position;
};

void validate(const RenderScene &scene, const RenderSettings &settings) {
    if (settings.spp < 1) throw ConfigError("spp must be at least 1");
    if (settings.coarse < 3 || settings.fine < 3) throw ConfigError("comb sample counts must be at least 3");
    if (!(scene.bounds.radius > 0.0)) throw ConfigError("render bounds must have positive radius");
    if (!scene.model.has_field()) throw ConfigError("rendering needs an attenuation model with an implicit field");
}

/// Picks a scattering distance with probability F_n per segment, uniformly inside it.
std::optional<Scatter> sample_scatter(const Ray &ray, const SampleComb &comb, const Discretization &disc,
                                      double u) {
    double cumulative = 0.0;
    for (std::size_t n = 0; n < comb.size(); ++n) {
        const double next = cumulative + disc.mass[n];
        if (u < next && disc.mass[n] > 0.0) {
            const double frac = std::clamp((u - cumulative) / disc.mass[n], 0.0, 1.0);
            return Scatter{ray.at(comb.bounds[n] + frac * comb.segment_length(n))};
        }
        cumulative = next;
    }
    return std::nullopt;
}

/// Transmittance between two points through the medium, from the comb quadrature.
double segment_transmittance(const RenderScene &scene, const RenderSettings &settings, const Vec3 &from,
                             const Vec3 &to, Rng &rng) {
    const Vec3 d = to - from;
    const double distance = d.norm();
    if (!(distance > 0.0)) return 1.0;
    const auto clipped = clip_to_sphere(Ray(from, d, 0.0, distance), scene.bounds.center, scene.bounds.radius);
    if (!clipped) return 1.0;
    const SampleComb comb = sample_comb(scene.model.field(), *clipped, settings.coarse, settings.fine, rng);
    return discretize(scene.model, *clipped, comb).residual;
}

}  // namespace

Image path_trace(const RenderScene &scene, const RenderSettings &settings) {
    validate(scene, settings);
    const Camera &camera = scene.camera;
    const PhaseFunction phase = PhaseFunction::for_model(scene.model);
    Image image(camera.width(), camera.height());
    const double far = (camera.position() - scene.bounds.center).norm() + scene.bounds.radius;

    parallel_for(static_cast<std::size_t>(camera.height()), [&](std::size_t row) {
        const int y = static_cast<int>(row);
        for (int x = 0; x < camera.width(); ++x) {
            Rng rng(settings.seed, static_cast<std::uint64_t>(y) * camera.width() + x);
            double sum = 0.0;
            for (int s = 0; s < settings.spp; ++s) {
                const double jx = rng.uniform(), jy = rng.uniform(), choose = rng.uniform();
                const auto ray = clip_to_sphere(camera.generate(x + jx, y + jy, far), scene.bounds.center,
                                                scene.bounds.radius);
                if (!ray) continue;
                const SampleComb comb = sample_comb(scene.model.field(), *ray, settings.coarse, settings.fine, rng);
                const Discretization disc = discretize(scene.model, *ray, comb);
                const auto scatter = sample_scatter(*ray, comb, disc, choose);
                if (!scatter) continue;
                const Vec3 to_light = scene.light.position - scatter->position;
                const double dist2 = to_light.squaredNorm();
                const Vec3 omega_l = to_light / std::sqrt(dist2);
                const double fp = phase.evaluate(scatter->position, ray->direction, omega_l, kPhaseSamples, rng);
                if (fp == 0.0) continue;
                const double visibility =
                    segment_transmittance(scene, settings, scatter->position, scene.light.position, rng);
                sum += scene.albedo * fp * visibility * scene.light.intensity / dist2;
            }
            image.at(x, y) = sum / settings.spp;
        }
    });
    return image;
}

Image light_trace(const RenderScene &scene, const RenderSettings &settings) {
    validate(scene, settings);
    const Camera &camera = scene.camera;
    const PhaseFunction phase = PhaseFunction::for_model(scene.model);
    const std::size_t photons =
        static_cast<std::size_t>(settings.spp) * static_cast<std::size_t>(camera.width()) * camera.height();
    const std::size_t chunks = std::min<std::size_t>(photons, 64);

    const Vec3 to_center = scene.bounds.center - scene.light.position;
    const double center_distance = to_center.norm();
    const bool inside = center_distance <= scene.bounds.radius;
    const double cos_max =
        inside ? -1.0
               : std::sqrt(std::max(0.0, 1.0 - std::pow(scene.bounds.radius / center_distance, 2)));
    const double direction_pdf = 1.0 / (2.0 * kPi * (1.0 - cos_max));
    const Frame frame(inside ? Vec3::UnitZ() : Vec3(to_center / center_distance));
    const double far = center_distance + scene.bounds.radius;

    std::vector<Image> films(chunks, Image(camera.width(), camera.height()));
    parallel_for(chunks, [&](std::size_t chunk) {
        Rng rng(settings.seed, kLightStreamBase + chunk);
        Image &film = films[chunk];
        const std::size_t begin = photons * chunk / chunks, end = photons * (chunk + 1) / chunks;
        for (std::size_t p = begin; p < end; ++p) {
            const double u1 = rng.uniform(), u2 = rng.uniform(), choose = rng.uniform();
            const Vec3 direction = frame.to_world(uniform_cone(u1, u2, cos_max));
            const auto ray = clip_to_sphere(Ray(scene.light.position, direction, 0.0, far), scene.bounds.center,
                                            scene.bounds.radius);
            if (!ray) continue;
            const SampleComb comb = sample_comb(scene.model.field(), *ray, settings.coarse, settings.fine, rng);
            const Discretization disc = discretize(scene.model, *ray, comb);
            const auto scatter = sample_scatter(*ray, comb, disc, choose);
            if (!scatter) continue;
            const auto pixel = camera.project(scatter->position);
            if (!pixel) continue;
            const Vec3 omega_c = (camera.position() - scatter->position) / pixel->distance;
            const double fp = phase.evaluate(scatter->position, ray->direction, omega_c, kPhaseSamples, rng);
            if (fp == 0.0) continue;
            const double visibility = segment_transmittance(scene, settings, scatter->position, camera.position(), rng);
            film.at(pixel->x, pixel->y) += scene.light.intensity / direction_pdf * scene.albedo * fp * visibility *
                                           pixel->importance / (pixel->distance * pixel->distance);
        }
    });

    Image image(camera.width(), camera.height());
    for (const Image &film : films)
        for (std::size_t i = 0; i < image.pixels.size(); ++i) image.pixels[i] += film.pixels[i];
    for (double &v : image.pixels) v /= static_cast<double>(photons);
    return image;
}

double rmse(const Image &a, const Image &b) {
    if (a.width != b.width || a.height != b.height) throw std::invalid_argument("image sizes differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = a.pixels[i] - b.pixels[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(a.pixels.size()));
}

void write_ppm(const std::filesystem::path &path, const Image &image, double exposure) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
    std::vector<unsigned char> bytes;
    bytes.reserve(image.pixels.size() * 3);
    for (const double v : image.pixels) {
        const double encoded = std::pow(std::clamp(v * exposure, 0.0, 1.0), 1.0 / 2.2);
        const auto byte = static_cast<unsigned char>(std::lround(encoded * 255.0));
        bytes.insert(bytes.end(), {byte, byte, byte});
    }
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void write_pfm(const std::filesystem::path &path, const Image &image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << "Pf\n" << image.width << ' ' << image.height << "\n-1.0\n";
    for (int y = image.height - 1; y >= 0; --y)
        for (int x = 0; x < image.width; ++x) {
            const auto v = static_cast<float>(image.at(x, y));
            out.write(reinterpret_cast<const char *>(&v), sizeof v);
        }
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace stochsolid
