#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace semtag::geo {

/// Spherical Mercator sphere radius in meters.
inline constexpr double kEarthRadius = 6378137.0;
/// Latitude bound (degrees) beyond which projection is refused.
inline constexpr double kMaxLatitude = 85.06;

/// Image coordinates: x grows rightward, y grows downward.
struct PixelPoint {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

struct GeoPoint {
    double lon = 0.0;
    double lat = 0.0;
    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct MercatorPoint {
    double x = 0.0;
    double y = 0.0;
};

struct ControlPoint {
    PixelPoint pixel;
    GeoPoint geo;
    std::optional<std::string> label;
    friend bool operator==(const ControlPoint&, const ControlPoint&) = default;
};

/// Affine pixel -> Mercator map: X = a*x + b*y + c, Y = d*x + e*y + f.
struct GeoTransform {
    double a = 1.0, b = 0.0, c = 0.0;
    double d = 0.0, e = 1.0, f = 0.0;
    double rms_residual = 0.0;

    MercatorPoint apply(PixelPoint p) const { return {a * p.x + b * p.y + c, d * p.x + e * p.y + f}; }
    double determinant() const { return a * e - b * d; }
};

struct GeoBBox {
    double min_lon = 0.0, min_lat = 0.0, max_lon = 0.0, max_lat = 0.0;

    bool contains(GeoPoint p) const {
        return p.lon >= min_lon && p.lon <= max_lon && p.lat >= min_lat && p.lat <= max_lat;
    }
    friend bool operator==(const GeoBBox&, const GeoBBox&) = default;
};

/// Throws Error(OutOfRange) when |lat| >= kMaxLatitude or lon is outside [-180, 180].
MercatorPoint lonlat_to_mercator(GeoPoint p);
GeoPoint mercator_to_lonlat(MercatorPoint m);

/// Least-squares affine fit in Mercator meters.
///
/// Requires at least three control points whose pixels span a triangle of area
/// greater than 1e-6 px^2; otherwise throws InsufficientData or DegenerateGeometry.
GeoTransform fit_transform(std::span<const ControlPoint> points);

/// Affine step followed by the inverse projection. Throws OutOfRange when the
/// Mercator image lies outside the projection's square.
GeoPoint pixel_to_geo(const GeoTransform& t, PixelPoint p);

/// Absolute shoelace area of a closed polygon.
double polygon_area(std::span<const PixelPoint> shape);

/// Bounding box of the per-vertex images. Shapes with fewer than three vertices
/// or zero area are rejected with Validation.
GeoBBox shape_geo_bbox(std::span<const PixelPoint> shape, const GeoTransform& t);

/// One line of a control-point file.
struct ControlPointRecord {
    std::string map_id;
    ControlPoint point;
};

/// Reads newline-delimited JSON control-point records; blank lines are skipped.
std::vector<ControlPointRecord> read_control_points(std::istream& in);
void write_control_points(std::ostream& out, std::span<const ControlPointRecord> records);

} // namespace semtag::geo
