#include "mmrelay/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <thread>

#include "mmrelay/radio.hpp"
#include "mmrelay/rng.hpp"

namespace mmrelay {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double los_limited_radius(double lambda, const LosModel& m) {
    if (!(lambda > 0)) return 1.0;
    const double r_nn = 5.0 / (2.0 * std::sqrt(lambda));
    if (m.beta > 0)
        return std::max(std::log(std::max(m.c, 1e-3) / 1e-4) / m.beta, r_nn);
    return std::max(30.0 / std::sqrt(kPi * lambda), r_nn);
}

double far_interference_radius(double lambda, double alpha) {
    // truncated mean interference below 1e-3 of the near-field part
    if (!(lambda > 0)) return 1.0;
    const double r1 = 1.0 / (2.0 * std::sqrt(lambda));
    if (alpha <= 2.0) return 100.0 * r1;
    return r1 * std::pow(10.0, 3.0 / (alpha - 2.0));
}

struct Radii {
    double cell = 0, relay = 0, d2d_int = 0, uw_int = 0;
};

Radii window_radii(const Scenario& s, const SimOptions& opts) {
    Radii r;
    const auto& an = s.an;
    r.cell = los_limited_radius(an.lambda_b, s.los_cell);
    r.relay = std::max(los_limited_radius(an.lambda_r, s.los_d2d),
                       an.lambda_r > 0 ? 8.0 / std::sqrt(kPi * an.lambda_r) : 1.0);
    r.d2d_int = los_limited_radius(an.rho * an.lambda_b, s.los_d2d);
    r.uw_int = far_interference_radius(an.rho * an.lambda_b, an.pl_uw_nlos.alpha);
    if (opts.window_radius_m > 0)
        r.cell = r.relay = r.d2d_int = r.uw_int = opts.window_radius_m;
    return r;
}

struct GeomWorld {
    std::unique_ptr<ObstacleField> field;
    std::unique_ptr<ObstacleIndex> index;
};

// Obstacle realization shared by all links of one drop (geometric mode).
GeomWorld make_geom_world(const Scenario& s, double radius, std::uint64_t seed,
                          std::uint64_t drop) {
    GeomWorld w;
    auto rng = make_stream(seed, drop, StreamClass::Obstacles);
    w.field = std::make_unique<ObstacleField>(
        sample_obstacles(s.law, Window::disc(radius + s.law.r_max), rng));
    w.index = std::make_unique<ObstacleIndex>(*w.field);
    return w;
}

// Distances from rx to the points of one tier, each with its LOS mark.
struct MarkedTier {
    std::vector<double> dist;
    std::vector<bool> los;
};

MarkedTier sample_tier(double lambda, const LosModel& los_model, double radius,
                       const Eigen::Vector2d& rx, double h_rx, double h_tx,
                       std::uint64_t seed, std::uint64_t drop, StreamClass pts_cls,
                       StreamClass blk_cls, BlockageMode mode,
                       const GeomWorld* world) {
    MarkedTier t;
    auto rng = make_stream(seed, drop, pts_cls);
    PointSet ps = sample_ppp(lambda, Window::disc(radius), rng);
    auto blk = make_stream(seed, drop, blk_cls);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    t.dist.reserve(ps.points.size());
    t.los.reserve(ps.points.size());
    for (const auto& p : ps.points) {
        const Eigen::Vector2d q = rx + p;  // tier sampled relative to the receiver
        const double d = p.norm();
        t.dist.push_back(d);
        if (mode == BlockageMode::Bernoulli) {
            t.los.push_back(u(blk) < los_probability(d, los_model));
        } else {
            t.los.push_back(world->index->is_los(q, h_tx, rx, h_rx));
        }
    }
    return t;
}

double sum_mm_interference(const MarkedTier& t, std::size_t serving,
                           const GainMixture& mix, double a, double alpha,
                           std::mt19937_64& gains) {
    double acc = 0.0;
    for (std::size_t i = 0; i < t.dist.size(); ++i) {
        if (i == serving || !t.los[i]) continue;
        acc += sample_interferer_gain(mix, gains) /
               (a * std::pow(t.dist[i], alpha));
    }
    return acc;
}

std::size_t nearest_index(const MarkedTier& t, bool want_los) {
    std::size_t best = t.dist.size();
    for (std::size_t i = 0; i < t.dist.size(); ++i) {
        if (t.los[i] != want_los) continue;
        if (best == t.dist.size() || t.dist[i] < t.dist[best]) best = i;
    }
    return best;
}

std::vector<Eigen::Vector2d> hex_sites(double isd) {
    std::vector<Eigen::Vector2d> sites;
    const Eigen::Vector2d a1(isd, 0.0), a2(0.5 * isd, 0.5 * std::sqrt(3.0) * isd);
    for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j)
            if (std::abs(i + j) <= 2) sites.push_back(i * a1 + j * a2);
    return sites;
}

std::vector<Eigen::Vector2d> ind_sites(const Layout& lay) {
    std::vector<Eigen::Vector2d> sites;
    const double cw = lay.ind_w_m / 6.0, ch = lay.ind_h_m / 2.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 6; ++j)
            sites.emplace_back((j + 0.5) * cw, (i + 0.5) * ch);
    return sites;
}

// Downlink SINR of a cellular link toward a receiver with the UE pattern.
// ctx selects the stream family (0 = destination link, 1 = relay hop).
double sim_cell_sinr(const Scenario& s, const Layout& lay, double radius,
                     std::uint64_t seed, std::uint64_t drop, std::uint64_t ctx,
                     BlockageMode mode, const GeomWorld* world) {
    const auto& an = s.an;
    const double a = an.pl_mm.intercept, alpha = an.pl_mm.alpha;
    const auto mix = gain_mixture(an.bs, an.ue);
    auto cls = [&](StreamClass c) { return offset_class(c, ctx); };

    MarkedTier tier;
    if (lay.kind == LayoutKind::Ppp) {
        tier = sample_tier(an.lambda_b, s.los_cell, radius, Eigen::Vector2d(0, 0),
                           s.cfg.ue_height_m, s.cfg.bs_height_m, seed, drop,
                           cls(StreamClass::BaseStations), cls(StreamClass::Blockage),
                           mode, world);
    } else {
        auto sites = lay.kind == LayoutKind::HexGrid ? hex_sites(lay.isd_m)
                                                     : ind_sites(lay);
        auto rng = make_stream(seed, drop, cls(StreamClass::UserDrop));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Eigen::Vector2d ue;
        if (lay.kind == LayoutKind::HexGrid) {
            // uniform in the center cell: rejection on the Voronoi condition
            for (;;) {
                ue = Eigen::Vector2d(lay.isd_m * (u(rng) - 0.5),
                                     lay.isd_m * (u(rng) - 0.5));
                std::size_t nearest = 0;
                for (std::size_t k = 1; k < sites.size(); ++k)
                    if ((sites[k] - ue).squaredNorm() <
                        (sites[nearest] - ue).squaredNorm())
                        nearest = k;
                if (sites[nearest].squaredNorm() == 0.0) break;
            }
        } else {
            ue = Eigen::Vector2d(lay.ind_w_m * u(rng), lay.ind_h_m * u(rng));
        }
        auto blk = make_stream(seed, drop, cls(StreamClass::Blockage));
        for (const auto& site : sites) {
            const double d = std::max((site - ue).norm(), 1e-6);
            tier.dist.push_back(d);
            tier.los.push_back(u(blk) < los_probability(d, s.los_cell));
        }
    }

    const std::size_t serving = nearest_index(tier, true);
    if (serving == tier.dist.size()) return 0.0;
    auto gains = make_stream(seed, drop, cls(StreamClass::Gains));
    const double interference = sum_mm_interference(tier, serving, mix, a, alpha, gains);
    const double signal = an.g0_cell / (a * std::pow(tier.dist[serving], alpha));
    return signal / (an.sigma2_cell + interference);
}

double sim_d2d_mm_sinr(const Scenario& s, const Radii& radii, std::uint64_t seed,
                       std::uint64_t drop, BlockageMode mode, const GeomWorld* world) {
    const auto& an = s.an;
    const double a = an.pl_mm.intercept, alpha = an.pl_mm.alpha;
    const auto mix = gain_mixture(an.ue, an.ue);
    auto cls = [&](StreamClass c) { return offset_class(c, 2); };
    const Eigen::Vector2d origin(0, 0);
    const double hu = s.cfg.ue_height_m;

    MarkedTier relays = sample_tier(an.lambda_r, s.los_d2d, radii.relay, origin, hu,
                                    hu, seed, drop, cls(StreamClass::Relays),
                                    cls(StreamClass::Blockage), mode, world);
    const std::size_t serving = nearest_index(relays, true);
    if (serving == relays.dist.size()) return 0.0;

    MarkedTier interferers = sample_tier(
        an.rho * an.lambda_b, s.los_d2d, radii.d2d_int, origin, hu, hu, seed, drop,
        cls(StreamClass::Interferers), cls(StreamClass::Fading), mode, world);
    auto gains = make_stream(seed, drop, cls(StreamClass::Gains));
    const double interference =
        sum_mm_interference(interferers, interferers.dist.size(), mix, a, alpha, gains);
    const double signal = an.g0_d2d / (a * std::pow(relays.dist[serving], alpha));
    return signal / (an.sigma2_d2d_mm + interference);
}

struct UwSample {
    double sinr = 0.0;
    int assoc = -1;  // 0 = LOS, 1 = NLOS, -1 = none
};

UwSample sim_d2d_uw(const Scenario& s, const Radii& radii, std::uint64_t seed,
                    std::uint64_t drop, BlockageMode mode, const GeomWorld* world) {
    const auto& an = s.an;
    auto cls = [&](StreamClass c) { return offset_class(c, 2); };
    const Eigen::Vector2d origin(0, 0);
    const double hu = s.cfg.ue_height_m;

    MarkedTier relays = sample_tier(an.lambda_r, s.los_d2d, radii.relay, origin, hu,
                                    hu, seed, drop, cls(StreamClass::Relays),
                                    cls(StreamClass::Blockage), mode, world);
    const std::size_t i_los = nearest_index(relays, true);
    const std::size_t i_nlos = nearest_index(relays, false);
    const double pl_los = i_los < relays.dist.size()
                              ? an.pl_uw_los.path_loss_linear(relays.dist[i_los])
                              : std::numeric_limits<double>::infinity();
    const double pl_nlos = i_nlos < relays.dist.size()
                               ? an.pl_uw_nlos.path_loss_linear(relays.dist[i_nlos])
                               : std::numeric_limits<double>::infinity();
    UwSample out;
    if (std::isinf(pl_los) && std::isinf(pl_nlos)) return out;
    out.assoc = pl_nlos < pl_los ? 1 : 0;
    const double pl0 = std::min(pl_los, pl_nlos);

    auto fad = make_stream(seed, drop, cls(StreamClass::Fading));
    std::exponential_distribution<double> exp_mu(an.mu);
    const double h0 = exp_mu(fad);
    auto rng = make_stream(seed, drop, cls(StreamClass::Interferers));
    PointSet intf = sample_ppp(an.rho * an.lambda_b, Window::disc(radii.uw_int), rng);
    double interference = 0.0;
    for (const auto& p : intf.points) {
        const double d = std::max(p.norm(), 1e-3);
        interference += exp_mu(fad) / an.pl_uw_nlos.path_loss_linear(d);
    }
    out.sinr = (h0 / pl0) / (an.sigma2_d2d_uw + interference);
    return out;
}

}  // namespace

double wilson_halfwidth(std::uint64_t successes, std::uint64_t n, double z) {
    if (n == 0) return 1.0;
    const double p = static_cast<double>(successes) / n;
    const double z2n = z * z / n;
    return z * std::sqrt(p * (1 - p) / n + z * z / (4.0 * n * n)) / (1.0 + z2n);
}

double certified_window_radius(const Scenario& scn, LinkCurve curve) {
    SimOptions opts;
    const Radii r = window_radii(scn, opts);
    switch (curve) {
        case LinkCurve::Cellular:
            return r.cell;
        case LinkCurve::D2DMm:
            return std::max(r.relay, r.d2d_int);
        case LinkCurve::D2DUw:
            return std::max(r.relay, r.uw_int);
        default:
            return std::max({r.cell, r.relay, r.d2d_int, r.uw_int});
    }
}

CoverageCurve estimate_coverage(const Scenario& scn, const Layout& layout,
                                LinkCurve curve, const std::vector<double>& taus,
                                const SimOptions& opts) {
    if (opts.n_drops < 1) throw std::invalid_argument("estimate_coverage: n_drops < 1");
    if (opts.blockage == BlockageMode::Geometric && layout.kind != LayoutKind::Ppp)
        throw std::invalid_argument("geometric blockage requires the ppp layout");
    const Radii radii = window_radii(scn, opts);
    const bool needs_cell = curve == LinkCurve::Cellular ||
                            curve == LinkCurve::OverallMm ||
                            curve == LinkCurve::OverallUw;

    std::vector<std::uint64_t> counts(taus.size(), 0);
    const int n_threads = opts.threads > 0
                              ? opts.threads
                              : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::vector<std::uint64_t>> partial(
        n_threads, std::vector<std::uint64_t>(taus.size(), 0));

    auto worker = [&](int t) {
        for (std::uint64_t drop = t; drop < opts.n_drops;
             drop += static_cast<std::uint64_t>(n_threads)) {
            GeomWorld world;
            const GeomWorld* wp = nullptr;
            if (opts.blockage == BlockageMode::Geometric) {
                const double r_max = std::max({radii.cell, radii.relay, radii.d2d_int,
                                               radii.uw_int});
                world = make_geom_world(scn, r_max, opts.seed, drop);
                wp = &world;
            }
            double sinr_direct = 0.0, sinr_hop1 = 0.0, sinr_d2d = 0.0;
            if (needs_cell)
                sinr_direct = sim_cell_sinr(scn, layout, radii.cell, opts.seed, drop,
                                            0, opts.blockage, wp);
            if (curve == LinkCurve::OverallMm || curve == LinkCurve::OverallUw)
                sinr_hop1 = sim_cell_sinr(scn, layout, radii.cell, opts.seed, drop, 1,
                                          opts.blockage, wp);
            if (curve == LinkCurve::D2DMm || curve == LinkCurve::OverallMm)
                sinr_d2d = sim_d2d_mm_sinr(scn, radii, opts.seed, drop,
                                           opts.blockage, wp);
            if (curve == LinkCurve::D2DUw || curve == LinkCurve::OverallUw)
                sinr_d2d = sim_d2d_uw(scn, radii, opts.seed, drop, opts.blockage, wp)
                               .sinr;
            for (std::size_t k = 0; k < taus.size(); ++k) {
                bool covered;
                if (curve == LinkCurve::Cellular)
                    covered = sinr_direct > taus[k];
                else if (!needs_cell)
                    covered = sinr_d2d > taus[k];
                else
                    covered = sinr_direct > taus[k] ||
                              (sinr_d2d > taus[k] && sinr_hop1 > taus[k]);
                if (covered) ++partial[t][k];
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker, t);
    worker(0);
    for (auto& th : pool) th.join();
    for (const auto& part : partial)
        for (std::size_t k = 0; k < taus.size(); ++k) counts[k] += part[k];

    CoverageCurve out;
    out.x = taus;
    out.n_drops = opts.n_drops;
    out.seed = opts.seed;
    out.value.resize(taus.size());
    out.ci.resize(taus.size());
    for (std::size_t k = 0; k < taus.size(); ++k) {
        out.value[k] = static_cast<double>(counts[k]) / opts.n_drops;
        out.ci[k] = wilson_halfwidth(counts[k], opts.n_drops);
    }
    return out;
}

std::pair<double, double> association_frequency_microwave(const Scenario& scn,
                                                          const SimOptions& opts) {
    const Radii radii = window_radii(scn, opts);
    std::uint64_t n_los = 0, n_any = 0;
    for (std::uint64_t drop = 0; drop < opts.n_drops; ++drop) {
        const auto s = sim_d2d_uw(scn, radii, opts.seed, drop, opts.blockage, nullptr);
        if (s.assoc < 0) continue;
        ++n_any;
        if (s.assoc == 0) ++n_los;
    }
    if (n_any == 0) return {0.0, 0.0};
    const double p_los = static_cast<double>(n_los) / opts.n_drops;
    return {p_los, static_cast<double>(n_any - n_los) / opts.n_drops};
}

void sample_nearest_distances(double lambda, const LosModel& los,
                              std::uint64_t n_drops, std::uint64_t seed,
                              std::vector<double>& nearest_los,
                              std::vector<double>& nearest_nlos) {
    const double radius =
        std::max(los_limited_radius(lambda, los), 8.0 / std::sqrt(kPi * lambda));
    nearest_los.assign(n_drops, kNaN);
    nearest_nlos.assign(n_drops, kNaN);
    for (std::uint64_t drop = 0; drop < n_drops; ++drop) {
        MarkedTier t = sample_tier(lambda, los, radius, Eigen::Vector2d(0, 0), 0, 0,
                                   seed, drop, StreamClass::BaseStations,
                                   StreamClass::Blockage, BlockageMode::Bernoulli,
                                   nullptr);
        const std::size_t i_l = nearest_index(t, true);
        const std::size_t i_n = nearest_index(t, false);
        if (i_l < t.dist.size()) nearest_los[drop] = t.dist[i_l];
        if (i_n < t.dist.size()) nearest_nlos[drop] = t.dist[i_n];
    }
}

namespace {

LosCurve los_curve_impl(const ObstacleLaw* law, const ObstacleField* fixed,
                        double h_tx, double h_rx,
                        const std::vector<double>& distances, std::size_t n_pairs,
                        std::uint64_t seed) {
    if (n_pairs < 1) throw std::invalid_argument("empirical_los_curve: n_pairs < 1");
    const double d_max =
        *std::max_element(distances.begin(), distances.end());
    LosCurve out;
    out.n_pairs = n_pairs;
    out.distance = distances;
    out.p_los.resize(distances.size());
    out.ci.resize(distances.size());

    if (fixed) {
        ObstacleIndex index(*fixed);
        double xmin = 1e300, ymin = 1e300, xmax = -1e300, ymax = -1e300;
        for (const auto& o : fixed->obstacles)
            for (const auto& v : o.poly.empty()
                                     ? std::vector<Eigen::Vector2d>{o.center}
                                     : o.poly) {
                xmin = std::min(xmin, v.x());
                xmax = std::max(xmax, v.x());
                ymin = std::min(ymin, v.y());
                ymax = std::max(ymax, v.y());
            }
        for (std::size_t i = 0; i < distances.size(); ++i) {
            auto rng = make_stream(seed, i, StreamClass::Pairs);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            std::uint64_t hits = 0;
            for (std::size_t k = 0; k < n_pairs; ++k) {
                const Eigen::Vector2d mid(xmin + (xmax - xmin) * u(rng),
                                          ymin + (ymax - ymin) * u(rng));
                const double a = 2 * kPi * u(rng);
                const Eigen::Vector2d half(0.5 * distances[i] * std::cos(a),
                                           0.5 * distances[i] * std::sin(a));
                if (index.is_los(mid - half, h_tx, mid + half, h_rx)) ++hits;
            }
            out.p_los[i] = static_cast<double>(hits) / n_pairs;
            out.ci[i] = wilson_halfwidth(hits, n_pairs);
        }
        return out;
    }

    law->validate();
    double reach = law->r_max;
    if (law->shape == ObstacleShape::Rectangle)
        reach = 0.5 * std::hypot(law->len_max, law->wid_max);
    const double extent = std::max({3.0 * d_max, 200.0 * reach, 50.0});
    const Window win = Window::rect(-0.5 * extent, -0.5 * extent, 0.5 * extent,
                                    0.5 * extent);
    const double inset = 0.5 * d_max + reach;
    const std::size_t pairs_per_field = 250;
    const std::size_t n_fields = (n_pairs + pairs_per_field - 1) / pairs_per_field;

    std::vector<std::uint64_t> hits(distances.size(), 0);
    for (std::size_t f = 0; f < n_fields; ++f) {
        auto orng = make_stream(seed, f, StreamClass::Obstacles);
        const ObstacleField field = sample_obstacles(*law, win, orng);
        ObstacleIndex index(field);
        auto rng = make_stream(seed, f, StreamClass::Pairs);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const std::size_t batch =
            std::min(pairs_per_field, n_pairs - f * pairs_per_field);
        for (std::size_t i = 0; i < distances.size(); ++i) {
            for (std::size_t k = 0; k < batch; ++k) {
                const double hw = 0.5 * extent - inset;
                const Eigen::Vector2d mid(hw * (2 * u(rng) - 1), hw * (2 * u(rng) - 1));
                const double a = 2 * kPi * u(rng);
                const Eigen::Vector2d half(0.5 * distances[i] * std::cos(a),
                                           0.5 * distances[i] * std::sin(a));
                if (index.is_los(mid - half, h_tx, mid + half, h_rx)) ++hits[i];
            }
        }
    }
    for (std::size_t i = 0; i < distances.size(); ++i) {
        out.p_los[i] = static_cast<double>(hits[i]) / n_pairs;
        out.ci[i] = wilson_halfwidth(hits[i], n_pairs);
    }
    return out;
}

}  // namespace

LosCurve empirical_los_curve(const ObstacleLaw& law, double h_tx, double h_rx,
                             const std::vector<double>& distances,
                             std::size_t n_pairs, std::uint64_t seed) {
    return los_curve_impl(&law, nullptr, h_tx, h_rx, distances, n_pairs, seed);
}

LosCurve empirical_los_curve(const ObstacleField& field, double h_tx, double h_rx,
                             const std::vector<double>& distances,
                             std::size_t n_pairs, std::uint64_t seed) {
    return los_curve_impl(nullptr, &field, h_tx, h_rx, distances, n_pairs, seed);
}

}  // namespace mmrelay
