#include "semtag/geo.hpp"
#include "semtag/error.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <vector>

namespace semtag::geo {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
// Half-width of the projected square: pi * R.
constexpr double kMercatorExtent = std::numbers::pi * kEarthRadius;

double triangle_area(PixelPoint p, PixelPoint q, PixelPoint r) {
    return 0.5 * std::abs((q.x - p.x) * (r.y - p.y) - (r.x - p.x) * (q.y - p.y));
}

// Largest triangle spanned by any three pixels.
double max_triangle_area(std::span<const ControlPoint> pts) {
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            for (std::size_t k = j + 1; k < pts.size(); ++k)
                best = std::max(best, triangle_area(pts[i].pixel, pts[j].pixel, pts[k].pixel));
    return best;
}

} // namespace

MercatorPoint lonlat_to_mercator(GeoPoint p) {
    if (!std::isfinite(p.lon) || !std::isfinite(p.lat) || std::abs(p.lat) >= kMaxLatitude ||
        std::abs(p.lon) > 180.0) {
        throw Error(ErrorCode::OutOfRange, "coordinate outside Web Mercator validity");
    }
    const double lam = p.lon * kDegToRad;
    const double phi = p.lat * kDegToRad;
    return {kEarthRadius * lam, kEarthRadius * std::log(std::tan(std::numbers::pi / 4.0 + phi / 2.0))};
}

GeoPoint mercator_to_lonlat(MercatorPoint m) {
    const double lon = m.x / kEarthRadius * kRadToDeg;
    const double lat = (2.0 * std::atan(std::exp(m.y / kEarthRadius)) - std::numbers::pi / 2.0) * kRadToDeg;
    return {lon, lat};
}

GeoTransform fit_transform(std::span<const ControlPoint> points) {
    if (points.size() < 3) {
        throw Error(ErrorCode::InsufficientData, "at least 3 control points are required");
    }
    if (max_triangle_area(points) <= 1e-6) {
        throw Error(ErrorCode::DegenerateGeometry, "control point pixels are collinear");
    }

    // Centre both frames first: Mercator values near 1e7 m would otherwise cost
    // a few ulps (about 2e-9 m each) in the solve and in the residual.
    const auto n = static_cast<Eigen::Index>(points.size());
    std::vector<MercatorPoint> merc;
    merc.reserve(points.size());
    double px = 0, py = 0, mx = 0, my = 0;
    for (const auto& cp : points) {
        merc.push_back(lonlat_to_mercator(cp.geo));
        px += cp.pixel.x;
        py += cp.pixel.y;
        mx += merc.back().x;
        my += merc.back().y;
    }
    px /= static_cast<double>(n);
    py /= static_cast<double>(n);
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    Eigen::MatrixXd design(n, 2);
    Eigen::MatrixXd rhs(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        design(i, 0) = points[k].pixel.x - px;
        design(i, 1) = points[k].pixel.y - py;
        rhs(i, 0) = merc[k].x - mx;
        rhs(i, 1) = merc[k].y - my;
    }
    const Eigen::MatrixXd coef = design.colPivHouseholderQr().solve(rhs);

    GeoTransform t;
    t.a = coef(0, 0);
    t.b = coef(1, 0);
    t.d = coef(0, 1);
    t.e = coef(1, 1);
    t.c = mx - t.a * px - t.b * py;
    t.f = my - t.d * px - t.e * py;
    if (!std::isfinite(t.determinant()) || std::abs(t.determinant()) <= 1e-12) {
        throw Error(ErrorCode::DegenerateGeometry, "fitted transform is singular");
    }

    long double sq = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const long double rx = static_cast<long double>(t.a) * design(i, 0) + static_cast<long double>(t.b) * design(i, 1) - rhs(i, 0);
        const long double ry = static_cast<long double>(t.d) * design(i, 0) + static_cast<long double>(t.e) * design(i, 1) - rhs(i, 1);
        sq += rx * rx + ry * ry;
    }
    t.rms_residual = static_cast<double>(std::sqrt(sq / n));
    return t;
}

GeoPoint pixel_to_geo(const GeoTransform& t, PixelPoint p) {
    const auto m = t.apply(p);
    constexpr double slack = 1e-6;
    if (!std::isfinite(m.x) || !std::isfinite(m.y) || std::abs(m.x) > kMercatorExtent + slack ||
        std::abs(m.y) > kMercatorExtent + slack) {
        throw Error(ErrorCode::OutOfRange, "pixel maps outside the Mercator square");
    }
    return mercator_to_lonlat(m);
}

double polygon_area(std::span<const PixelPoint> shape) {
    double twice = 0.0;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        const auto& p = shape[i];
        const auto& q = shape[(i + 1) % shape.size()];
        twice += p.x * q.y - q.x * p.y;
    }
    return std::abs(twice) / 2.0;
}

GeoBBox shape_geo_bbox(std::span<const PixelPoint> shape, const GeoTransform& t) {
    if (shape.size() < 3 || polygon_area(shape) <= 0.0) {
        throw Error(ErrorCode::Validation, "shape needs at least 3 vertices enclosing a non-zero area");
    }
    const auto first = pixel_to_geo(t, shape.front());
    GeoBBox box{first.lon, first.lat, first.lon, first.lat};
    for (const auto& v : shape.subspan(1)) {
        const auto g = pixel_to_geo(t, v);
        box.min_lon = std::min(box.min_lon, g.lon);
        box.max_lon = std::max(box.max_lon, g.lon);
        box.min_lat = std::min(box.min_lat, g.lat);
        box.max_lat = std::max(box.max_lat, g.lat);
    }
    return box;
}

std::vector<ControlPointRecord> read_control_points(std::istream& in) {
    std::vector<ControlPointRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            ControlPointRecord rec;
            rec.map_id = j.value("map_id", std::string{});
            rec.point.pixel = {j.at("px").get<double>(), j.at("py").get<double>()};
            rec.point.geo = {j.at("lon").get<double>(), j.at("lat").get<double>()};
            if (j.contains("label") && j["label"].is_string()) rec.point.label = j["label"].get<std::string>();
            if (std::abs(rec.point.geo.lon) > 180.0 || std::abs(rec.point.geo.lat) >= 90.0) {
                throw Error(ErrorCode::Validation, "geo coordinate out of range");
            }
            out.push_back(std::move(rec));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::Validation,
                        "control point line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void write_control_points(std::ostream& out, std::span<const ControlPointRecord> records) {
    for (const auto& r : records) {
        nlohmann::json j{{"map_id", r.map_id},
                         {"px", r.point.pixel.x},
                         {"py", r.point.pixel.y},
                         {"lon", r.point.geo.lon},
                         {"lat", r.point.geo.lat}};
        if (r.point.label) j["label"] = *r.point.label;
        out << j.dump() << '\n';
    }
}

} // namespace semtag::geo
