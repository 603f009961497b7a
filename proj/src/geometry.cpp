#include "mmrelay/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mmrelay/quadrature.hpp"

namespace mmrelay {

namespace {
constexpr double kPi = std::numbers::pi;
}

double Window::area() const {
    if (kind == Kind::Disc) return kPi * radius * radius;
    return (x1 - x0) * (y1 - y0);
}

bool Window::contains(const Eigen::Vector2d& p) const {
    if (kind == Kind::Disc) return p.squaredNorm() <= radius * radius;
    return p.x() >= x0 && p.x() <= x1 && p.y() >= y0 && p.y() <= y1;
}

void ObstacleLaw::validate() const {
    if (intensity < 0) throw std::invalid_argument("obstacle intensity < 0");
    if (r_min < 0 || r_max < r_min) throw std::invalid_argument("obstacle radius range invalid");
    if (h_min < 0 || h_max < h_min) throw std::invalid_argument("obstacle height range invalid");
    if (shape == ObstacleShape::Rectangle &&
        (len_min <= 0 || len_max < len_min || wid_min <= 0 || wid_max < wid_min))
        throw std::invalid_argument("obstacle length/width range invalid");
}

double ObstacleLaw::mean_footprint_area() const {
    if (shape == ObstacleShape::Cylinder) return kPi * mean_radius_sq();
    return 0.5 * (len_min + len_max) * 0.5 * (wid_min + wid_max);
}

double ObstacleLaw::mean_footprint_perimeter() const {
    if (shape == ObstacleShape::Cylinder) return 2.0 * kPi * mean_radius();
    return 2.0 * (0.5 * (len_min + len_max) + 0.5 * (wid_min + wid_max));
}

bool Obstacle::contains(const Eigen::Vector2d& p) const {
    switch (shape) {
        case Shape::Disc:
            return (p - center).squaredNorm() <= radius * radius;
        case Shape::Rect: {
            const Eigen::Vector2d d = p - center;
            const double lx = cos_a * d.x() + sin_a * d.y();
            const double ly = -sin_a * d.x() + cos_a * d.y();
            return std::abs(lx) <= half_len && std::abs(ly) <= half_wid;
        }
        case Shape::Polygon: {
            bool in = false;
            const std::size_t n = poly.size();
            for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
                const auto& a = poly[i];
                const auto& b = poly[j];
                if ((a.y() > p.y()) != (b.y() > p.y()) &&
                    p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x())
                    in = !in;
            }
            return in;
        }
    }
    return false;
}

PointSet sample_ppp(double intensity, const Window& window, std::mt19937_64& rng) {
    if (intensity < 0) throw std::invalid_argument("sample_ppp: intensity < 0");
    const double area = window.area();
    if (!(area > 0)) throw std::invalid_argument("sample_ppp: degenerate window");
    PointSet out;
    out.intensity = intensity;
    out.window = window;
    std::poisson_distribution<long> count(intensity * area);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const long n = intensity > 0 ? count(rng) : 0;
    out.points.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        if (window.kind == Window::Kind::Disc) {
            const double r = window.radius * std::sqrt(u(rng));
            const double th = 2.0 * kPi * u(rng);
            out.points.emplace_back(r * std::cos(th), r * std::sin(th));
        } else {
            out.points.emplace_back(window.x0 + (window.x1 - window.x0) * u(rng),
                                    window.y0 + (window.y1 - window.y0) * u(rng));
        }
    }
    return out;
}

ObstacleField sample_obstacles(const ObstacleLaw& law, const Window& window,
                               std::mt19937_64& rng) {
    law.validate();
    PointSet centers = sample_ppp(law.intensity, window, rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ObstacleField field;
    field.obstacles.reserve(centers.points.size());
    for (const auto& c : centers.points) {
        Obstacle o;
        o.center = c;
        o.height = law.h_min + (law.h_max - law.h_min) * u(rng);
        if (law.shape == ObstacleShape::Cylinder) {
            o.shape = Obstacle::Shape::Disc;
            o.radius = law.r_min + (law.r_max - law.r_min) * u(rng);
        } else {
            o.shape = Obstacle::Shape::Rect;
            o.half_len = 0.5 * (law.len_min + (law.len_max - law.len_min) * u(rng));
            o.half_wid = 0.5 * (law.wid_min + (law.wid_max - law.wid_min) * u(rng));
            const double a = 2.0 * kPi * u(rng);
            o.cos_a = std::cos(a);
            o.sin_a = std::sin(a);
        }
        field.obstacles.push_back(o);
    }
    return field;
}

double thinning_factor(double h_tx, double h_rx, const ObstacleLaw& law) {
    law.validate();
    if (h_tx < 0 || h_rx < 0) throw std::invalid_argument("thinning_factor: negative height");
    const double span = law.h_max - law.h_min;
    auto cdf = [&](double h) {
        if (h <= law.h_min) return 0.0;
        if (h >= law.h_max) return 1.0;
        return (h - law.h_min) / span;  // span > 0 here by the clamps above
    };
    auto f = [&](double s) { return cdf(h_tx + (h_rx - h_tx) * s); };
    const double mass = integrate_adaptive(f, 0.0, 1.0, 1e-12, 1e-14).value;
    return std::clamp(1.0 - mass, 0.0, 1.0);
}

LosModel make_los_model(const ObstacleLaw& law, double h_tx, double h_rx,
                        std::optional<double> eta_override) {
    law.validate();
    LosModel m;
    m.h_tx = h_tx;
    m.h_rx = h_rx;
    m.eta = eta_override ? *eta_override : thinning_factor(h_tx, h_rx, law);
    if (m.eta < 0 || m.eta > 1) throw std::invalid_argument("eta outside [0,1]");
    m.c = std::exp(-m.eta * law.intensity * law.mean_footprint_area());
    m.beta = m.eta * law.intensity * law.mean_footprint_perimeter() / kPi;
    return m;
}

double los_probability(double d, const LosModel& model) {
    return model.c * std::exp(-model.beta * d);
}

namespace {
// 1 - (1+x)e^{-x}, stable for small x.
double one_minus_1px_expmx(double x) {
    if (x < 1e-3)
        return x * x * (0.5 - x / 3.0 + x * x / 8.0 - x * x * x / 30.0);
    return 1.0 - (1.0 + x) * std::exp(-x);
}
}  // namespace

double expected_los_count(double d, double lambda, const LosModel& model) {
    if (d < 0 || lambda < 0) throw std::invalid_argument("expected_los_count: negative input");
    if (model.beta <= 0.0) return kPi * lambda * model.c * d * d;
    return 2.0 * kPi * lambda * model.c / (model.beta * model.beta) *
           one_minus_1px_expmx(model.beta * d);
}

double pdf_nearest_los(double d, double lambda, const LosModel& model) {
    return 2.0 * kPi * lambda * d * model.c *
           std::exp(-expected_los_count(d, lambda, model) - model.beta * d);
}

double pdf_nearest_nlos(double d, double lambda, const LosModel& model) {
    const double lam_d = expected_los_count(d, lambda, model);
    return 2.0 * kPi * lambda * d * (1.0 - model.c * std::exp(-model.beta * d)) *
           std::exp(lam_d - kPi * lambda * d * d);
}

double cdf_nearest_los(double d, double lambda, const LosModel& model) {
    return -std::expm1(-expected_los_count(d, lambda, model));
}

double cdf_nearest_nlos(double d, double lambda, const LosModel& model) {
    return -std::expm1(expected_los_count(d, lambda, model) - kPi * lambda * d * d);
}

namespace {

// Parameter interval [t0,t1] of segment p+t(q-p) covered by the footprint.
std::optional<std::pair<double, double>> footprint_cover(const Obstacle& o,
                                                         const Eigen::Vector2d& p,
                                                         const Eigen::Vector2d& q) {
    const Eigen::Vector2d d = q - p;
    switch (o.shape) {
        case Obstacle::Shape::Disc: {
            const Eigen::Vector2d m = p - o.center;
            const double a = d.squaredNorm();
            const double b = 2.0 * d.dot(m);
            const double c = m.squaredNorm() - o.radius * o.radius;
            if (a == 0.0) return c <= 0 ? std::make_optional(std::pair{0.0, 1.0}) : std::nullopt;
            const double disc = b * b - 4 * a * c;
            if (disc < 0) return std::nullopt;
            const double s = std::sqrt(disc);
            double t0 = std::max((-b - s) / (2 * a), 0.0);
            double t1 = std::min((-b + s) / (2 * a), 1.0);
            if (t0 > t1) return std::nullopt;
            return std::pair{t0, t1};
        }
        case Obstacle::Shape::Rect: {
            // slab clipping in the obstacle frame
            const Eigen::Vector2d m = p - o.center;
            const double px = o.cos_a * m.x() + o.sin_a * m.y();
            const double py = -o.sin_a * m.x() + o.cos_a * m.y();
            const double dx = o.cos_a * d.x() + o.sin_a * d.y();
            const double dy = -o.sin_a * d.x() + o.cos_a * d.y();
            double t0 = 0.0, t1 = 1.0;
            const double pp[2] = {px, py}, dd[2] = {dx, dy};
            const double hh[2] = {o.half_len, o.half_wid};
            for (int k = 0; k < 2; ++k) {
                if (dd[k] == 0.0) {
                    if (std::abs(pp[k]) > hh[k]) return std::nullopt;
                    continue;
                }
                double ta = (-hh[k] - pp[k]) / dd[k];
                double tb = (hh[k] - pp[k]) / dd[k];
                if (ta > tb) std::swap(ta, tb);
                t0 = std::max(t0, ta);
                t1 = std::min(t1, tb);
                if (t0 > t1) return std::nullopt;
            }
            return std::pair{t0, t1};
        }
        case Obstacle::Shape::Polygon: {
            double t0 = 2.0, t1 = -1.0;
            if (o.contains(p)) { t0 = 0.0; t1 = 0.0; }
            if (o.contains(q)) { t0 = std::min(t0, 1.0); t1 = 1.0; }
            const std::size_t n = o.poly.size();
            for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
                const Eigen::Vector2d e = o.poly[i] - o.poly[j];
                const double denom = d.x() * e.y() - d.y() * e.x();
                if (denom == 0.0) continue;
                const Eigen::Vector2d w = o.poly[j] - p;
                const double t = (w.x() * e.y() - w.y() * e.x()) / denom;
                const double s = (w.x() * d.y() - w.y() * d.x()) / denom;
                if (t < 0 || t > 1 || s < 0 || s > 1) continue;
                t0 = std::min(t0, t);
                t1 = std::max(t1, t);
            }
            if (t1 < t0) return std::nullopt;
            return std::pair{t0, t1};
        }
    }
    return std::nullopt;
}

bool blocks(const Obstacle& o, const Eigen::Vector2d& tx, double h_tx,
            const Eigen::Vector2d& rx, double h_rx) {
    auto cover = footprint_cover(o, tx, rx);
    if (!cover) return false;
    if (o.contains(tx) || o.contains(rx)) return true;
    const auto [t0, t1] = *cover;
    const double line_min = std::min(h_tx + (h_rx - h_tx) * t0, h_tx + (h_rx - h_tx) * t1);
    return o.height >= line_min;
}

}  // namespace

bool is_los(const Eigen::Vector2d& tx, double h_tx, const Eigen::Vector2d& rx,
            double h_rx, const ObstacleField& field) {
    for (const auto& o : field.obstacles)
        if (blocks(o, tx, h_tx, rx, h_rx)) return false;
    return true;
}

ObstacleIndex::ObstacleIndex(const ObstacleField& field) : field_(field) {
    if (field.obstacles.empty()) return;
    double xmin = 1e300, ymin = 1e300, xmax = -1e300, ymax = -1e300, rmax = 0;
    for (const auto& o : field.obstacles) {
        double r = o.radius;
        if (o.shape == Obstacle::Shape::Rect) r = std::hypot(o.half_len, o.half_wid);
        if (o.shape == Obstacle::Shape::Polygon) {
            for (const auto& v : o.poly) r = std::max(r, (v - o.center).norm());
        }
        rmax = std::max(rmax, r);
        xmin = std::min(xmin, o.center.x());
        xmax = std::max(xmax, o.center.x());
        ymin = std::min(ymin, o.center.y());
        ymax = std::max(ymax, o.center.y());
    }
    reach_ = rmax;
    cell_ = std::max(2.0 * rmax, (xmax - xmin + ymax - ymin) / 512.0 + 1e-9);
    x0_ = xmin;
    y0_ = ymin;
    nx_ = static_cast<int>((xmax - xmin) / cell_) + 1;
    ny_ = static_cast<int>((ymax - ymin) / cell_) + 1;
    cells_.resize(static_cast<std::size_t>(nx_) * ny_);
    for (std::uint32_t i = 0; i < field.obstacles.size(); ++i) {
        const auto& c = field.obstacles[i].center;
        const int ix = std::clamp(static_cast<int>((c.x() - x0_) / cell_), 0, nx_ - 1);
        const int iy = std::clamp(static_cast<int>((c.y() - y0_) / cell_), 0, ny_ - 1);
        cells_[static_cast<std::size_t>(iy) * nx_ + ix].push_back(i);
    }
}

bool ObstacleIndex::is_los(const Eigen::Vector2d& tx, double h_tx,
                           const Eigen::Vector2d& rx, double h_rx) const {
    if (cells_.empty()) return true;
    const double m = reach_ + 1e-9;
    const int ix0 = std::clamp(static_cast<int>((std::min(tx.x(), rx.x()) - m - x0_) / cell_), 0, nx_ - 1);
    const int ix1 = std::clamp(static_cast<int>((std::max(tx.x(), rx.x()) + m - x0_) / cell_), 0, nx_ - 1);
    const int iy0 = std::clamp(static_cast<int>((std::min(tx.y(), rx.y()) - m - y0_) / cell_), 0, ny_ - 1);
    const int iy1 = std::clamp(static_cast<int>((std::max(tx.y(), rx.y()) + m - y0_) / cell_), 0, ny_ - 1);
    const Eigen::Vector2d d = rx - tx;
    const double len2 = d.squaredNorm();
    for (int iy = iy0; iy <= iy1; ++iy) {
        for (int ix = ix0; ix <= ix1; ++ix) {
            // skip cells whose center is far from the segment
            const double cx = x0_ + (ix + 0.5) * cell_;
            const double cy = y0_ + (iy + 0.5) * cell_;
            Eigen::Vector2d cc(cx, cy);
            double t = len2 > 0 ? std::clamp((cc - tx).dot(d) / len2, 0.0, 1.0) : 0.0;
            const double dist2 = (cc - (tx + t * d)).squaredNorm();
            const double margin = reach_ + 0.7072 * cell_;
            if (dist2 > margin * margin) continue;
            for (std::uint32_t i : cells_[static_cast<std::size_t>(iy) * nx_ + ix])
                if (blocks(field_.obstacles[i], tx, h_tx, rx, h_rx)) return false;
        }
    }
    return true;
}

ObstacleField load_footprints(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open footprint file: " + path);
    ObstacleField field;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::size_t n = 0;
        if (!(ss >> n) || n < 3)
            throw IoError("footprint line " + std::to_string(lineno) + ": bad vertex count");
        Obstacle o;
        o.shape = Obstacle::Shape::Polygon;
        o.height = 1e30;  // building data carries no heights: always blocking
        o.poly.reserve(n);
        Eigen::Vector2d sum(0, 0);
        for (std::size_t i = 0; i < n; ++i) {
            double x, y;
            if (!(ss >> x >> y))
                throw IoError("footprint line " + std::to_string(lineno) + ": expected " +
                              std::to_string(n) + " vertices");
            o.poly.emplace_back(x, y);
            sum += o.poly.back();
        }
        o.center = sum / static_cast<double>(n);
        field.obstacles.push_back(std::move(o));
    }
    return field;
}

}  // namespace mmrelay
