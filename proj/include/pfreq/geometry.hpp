#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace pfreq {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
double norm(Vec2 a);

enum class ShapeKind { Mask, Rectangle, Disk, Polygon };

// What the mask was rasterized from. Bounds that need exact continuum data
// (known Cheeger constants) read it; everything else only uses the mask.
struct ShapeInfo {
    ShapeKind kind = ShapeKind::Mask;
    double width = 0.0;
    double height = 0.0;
    double radius = 0.0;
    std::vector<Vec2> vertices;
    std::string label;
};

// Nodes sit at origin + (i*h, j*h), 0 <= i < nx, 0 <= j < ny. The outermost
// ring of nodes is always exterior so every interior node has four in-range
// neighbours. Interior nodes are numbered row by row (j outer, i inner).
//
// Faces: an x-face joins (i,j) and (i+1,j), a y-face joins (i,j) and (i,j+1).
// Only faces with at least one interior endpoint are stored; the gradient of
// a field lives on them (staggered layout).
class GridDomain {
public:
    GridDomain(double h, Vec2 origin, int nx, int ny, std::vector<std::uint8_t> mask, bool convex,
               ShapeInfo shape = {});

    double h() const { return h_; }
    Vec2 origin() const { return origin_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    bool convex() const { return convex_; }
    const ShapeInfo& shape() const { return shape_; }
    const std::vector<std::uint8_t>& mask() const { return mask_; }

    std::size_t size() const { return node_i_.size(); }
    bool interior(int i, int j) const;
    // -1 when (i,j) is exterior or out of range.
    int node_index(int i, int j) const;
    int node_i(std::size_t k) const { return node_i_[k]; }
    int node_j(std::size_t k) const { return node_j_[k]; }
    Vec2 position(std::size_t k) const;

    // Interior neighbour indices, -1 for an exterior neighbour.
    int west(std::size_t k) const { return nbr_[4 * k + 0]; }
    int east(std::size_t k) const { return nbr_[4 * k + 1]; }
    int south(std::size_t k) const { return nbr_[4 * k + 2]; }
    int north(std::size_t k) const { return nbr_[4 * k + 3]; }

    std::size_t x_face_count() const { return xf_lo_.size(); }
    std::size_t y_face_count() const { return yf_lo_.size(); }
    // Endpoints of a face (lo = west/south, hi = east/north), -1 if exterior.
    int x_face_lo(std::size_t e) const { return xf_lo_[e]; }
    int x_face_hi(std::size_t e) const { return xf_hi_[e]; }
    int y_face_lo(std::size_t e) const { return yf_lo_[e]; }
    int y_face_hi(std::size_t e) const { return yf_hi_[e]; }
    // Faces around interior node k.
    std::size_t face_w(std::size_t k) const { return fc_[4 * k + 0]; }
    std::size_t face_e(std::size_t k) const { return fc_[4 * k + 1]; }
    std::size_t face_s(std::size_t k) const { return fc_[4 * k + 2]; }
    std::size_t face_n(std::size_t k) const { return fc_[4 * k + 3]; }

    // Euclidean distance from each interior node to the nearest exterior node.
    const std::vector<double>& boundary_distance() const { return dist_; }
    // 4-neighbour layer count: 1 for nodes touching the exterior, 2 next, ...
    const std::vector<int>& boundary_layer() const { return layer_; }

private:
    double h_;
    Vec2 origin_;
    int nx_, ny_;
    std::vector<std::uint8_t> mask_;
    bool convex_;
    ShapeInfo shape_;

    std::vector<int> index_;
    std::vector<int> node_i_, node_j_;
    std::vector<int> nbr_;
    std::vector<int> xf_lo_, xf_hi_, yf_lo_, yf_hi_;
    std::vector<std::size_t> fc_;
    std::vector<double> dist_;
    std::vector<int> layer_;
};

using DomainPtr = std::shared_ptr<const GridDomain>;

struct GeometricSummary {
    double area = 0.0;
    double perimeter = 0.0;
    double inradius = 0.0;
    Vec2 centroid;
    double circumradius = 0.0;
};

DomainPtr build_rectangle(double width, double height, double h);
// Disk centred at the origin.
DomainPtr build_disk(double radius, double h);
DomainPtr build_polygon(const std::vector<Vec2>& vertices, double h);
// Wrap an explicit mask (outer ring must be exterior).
DomainPtr build_from_mask(double h, Vec2 origin, int nx, int ny, std::vector<std::uint8_t> mask,
                          bool convex);

GeometricSummary summarize(const GridDomain& dom);
double mask_perimeter(const GridDomain& dom);
double min_enclosing_radius(const std::vector<Vec2>& pts, Vec2* center = nullptr);

double moment(const GridDomain& dom, double p, Vec2 x0);
std::pair<double, Vec2> min_moment(const GridDomain& dom, double p);

// Domain files and shape literals.
DomainPtr read_domain(std::istream& in);
DomainPtr load_domain_file(const std::string& path);
void write_domain(std::ostream& out, const GridDomain& dom);
// "disk:r=1", "rect:w=8,h=1", "poly:x1,y1;x2,y2;..." or a path to a domain file
// (for which h is ignored).
DomainPtr parse_domain_spec(const std::string& spec, double h);

bool polygon_is_convex(const std::vector<Vec2>& vertices);
bool polygon_is_simple(const std::vector<Vec2>& vertices);

}  // namespace pfreq
