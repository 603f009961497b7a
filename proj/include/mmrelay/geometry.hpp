#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmrelay {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sampling window: disc centered at the origin, or an axis-aligned rectangle.
struct Window {
    enum class Kind { Disc, Rect };
    Kind kind = Kind::Disc;
    double radius = 0.0;                    // disc
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // rect

    static Window disc(double r) {
        Window w;
        w.kind = Kind::Disc;
        w.radius = r;
        return w;
    }
    static Window rect(double x0, double y0, double x1, double y1) {
        Window w;
        w.kind = Kind::Rect;
        w.x0 = x0;
        w.y0 = y0;
        w.x1 = x1;
        w.y1 = y1;
        return w;
    }
    double area() const;
    bool contains(const Eigen::Vector2d& p) const;
};

struct PointSet {
    std::vector<Eigen::Vector2d> points;
    double intensity = 0.0;
    Window window;
};

enum class ObstacleShape { Cylinder, Rectangle };

// Marked-PPP obstacle law: footprint size and height distributions are
// uniform on the given ranges.
struct ObstacleLaw {
    double intensity = 0.0;  // per m^2
    double r_min = 0.0, r_max = 0.0;
    double h_min = 0.0, h_max = 0.0;
    ObstacleShape shape = ObstacleShape::Cylinder;
    double len_min = 0.0, len_max = 0.0;  // rectangle footprints
    double wid_min = 0.0, wid_max = 0.0;

    void validate() const;
    double mean_radius() const { return 0.5 * (r_min + r_max); }
    double mean_radius_sq() const {
        return (r_min * r_min + r_min * r_max + r_max * r_max) / 3.0;
    }
    double mean_footprint_area() const;
    double mean_footprint_perimeter() const;
};

struct Obstacle {
    enum class Shape { Disc, Rect, Polygon };
    Shape shape = Shape::Disc;
    Eigen::Vector2d center{0, 0};
    double radius = 0.0;                  // disc
    double half_len = 0, half_wid = 0;    // rect, local x/y half extents
    double cos_a = 1, sin_a = 0;          // rect orientation
    double height = 0.0;
    std::vector<Eigen::Vector2d> poly;    // imported footprints

    bool contains(const Eigen::Vector2d& p) const;
};

struct ObstacleField {
    std::vector<Obstacle> obstacles;
};

// LOS law p_L(d) = c exp(-beta d) for a link between heights h_tx / h_rx.
struct LosModel {
    double c = 1.0;
    double beta = 0.0;
    double eta = 0.0;
    double h_tx = 0.0, h_rx = 0.0;
};

PointSet sample_ppp(double intensity, const Window& window, std::mt19937_64& rng);
ObstacleField sample_obstacles(const ObstacleLaw& law, const Window& window,
                               std::mt19937_64& rng);

// Fraction of obstacles tall enough to cut the Tx-Rx line, averaged along the
// path, for height ~ U[h_min, h_max].
double thinning_factor(double h_tx, double h_rx, const ObstacleLaw& law);

LosModel make_los_model(const ObstacleLaw& law, double h_tx, double h_rx,
                        std::optional<double> eta_override = std::nullopt);

double los_probability(double d, const LosModel& model);

// Mean number of LOS points of a PPP(lambda) within distance d of the origin.
double expected_los_count(double d, double lambda, const LosModel& model);

// Distance laws of the nearest LOS / nearest NLOS point (defective densities).
double pdf_nearest_los(double d, double lambda, const LosModel& model);
double pdf_nearest_nlos(double d, double lambda, const LosModel& model);
double cdf_nearest_los(double d, double lambda, const LosModel& model);
double cdf_nearest_nlos(double d, double lambda, const LosModel& model);

bool is_los(const Eigen::Vector2d& tx, double h_tx, const Eigen::Vector2d& rx,
            double h_rx, const ObstacleField& field);

// Uniform-grid spatial index over an obstacle field for repeated LOS queries.
class ObstacleIndex {
  public:
    explicit ObstacleIndex(const ObstacleField& field);
    bool is_los(const Eigen::Vector2d& tx, double h_tx,
                const Eigen::Vector2d& rx, double h_rx) const;

  private:
    const ObstacleField& field_;
    double x0_ = 0, y0_ = 0, cell_ = 1.0, reach_ = 0.0;
    int nx_ = 0, ny_ = 0;
    std::vector<std::vector<std::uint32_t>> cells_;
};

// One polygon per line: vertex count followed by x,y pairs (meters).
ObstacleField load_footprints(const std::string& path);

}  // namespace mmrelay
