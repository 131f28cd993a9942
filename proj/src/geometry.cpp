#include "pfreq/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <sstream>

#include "pfreq/errors.hpp"

namespace pfreq {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

namespace {

// Felzenszwalb-Huttenlocher 1-D squared distance transform, in place. Large
// finite values stand in for "no site"; every row and column of the grid has
// exterior sites at its ends so the result is always finite.
void edt_1d(std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
            std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    const double inf = std::numeric_limits<double>::infinity();
    int k = 0;
    v[0] = 0;
    z[0] = -inf;
    z[1] = inf;
    for (int q = 1; q < n; ++q) {
        double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
        while (s <= z[k]) {
            --k;
            s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = inf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = double(q) - v[k];
        d[q] = dq * dq + f[v[k]];
    }
    f = d;
}

}  // namespace

GridDomain::GridDomain(double h, Vec2 origin, int nx, int ny, std::vector<std::uint8_t> mask,
                       bool convex, ShapeInfo shape)
    : h_(h), origin_(origin), nx_(nx), ny_(ny), mask_(std::move(mask)), convex_(convex),
      shape_(std::move(shape)) {
    if (!(h_ > 0.0) || !std::isfinite(h_)) throw DomainError("grid spacing must be positive");
    if (nx_ < 3 || ny_ < 3) throw DomainError("grid needs at least 3x3 nodes");
    if (mask_.size() != std::size_t(nx_) * std::size_t(ny_))
        throw DomainError("mask size does not match nx*ny");
    for (auto& m : mask_) m = m ? 1 : 0;
    for (int i = 0; i < nx_; ++i)
        if (mask_[i] || mask_[std::size_t(ny_ - 1) * nx_ + i])
            throw DomainError("interior node on the bounding-box edge");
    for (int j = 0; j < ny_; ++j)
        if (mask_[std::size_t(j) * nx_] || mask_[std::size_t(j) * nx_ + nx_ - 1])
            throw DomainError("interior node on the bounding-box edge");

    index_.assign(mask_.size(), -1);
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i)
            if (mask_[std::size_t(j) * nx_ + i]) {
                index_[std::size_t(j) * nx_ + i] = static_cast<int>(node_i_.size());
                node_i_.push_back(i);
                node_j_.push_back(j);
            }
    if (node_i_.empty()) throw DomainError("domain has no interior node");

    const std::size_t n = node_i_.size();
    nbr_.resize(4 * n);
    for (std::size_t k = 0; k < n; ++k) {
        const int i = node_i_[k], j = node_j_[k];
        nbr_[4 * k + 0] = node_index(i - 1, j);
        nbr_[4 * k + 1] = node_index(i + 1, j);
        nbr_[4 * k + 2] = node_index(i, j - 1);
        nbr_[4 * k + 3] = node_index(i, j + 1);
    }

    // Faces in lexicographic order; x-face (i,j) joins (i,j)-(i+1,j).
    fc_.resize(4 * n);
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i + 1 < nx_; ++i) {
            const int a = node_index(i, j), b = node_index(i + 1, j);
            if (a < 0 && b < 0) continue;
            const std::size_t e = xf_lo_.size();
            xf_lo_.push_back(a);
            xf_hi_.push_back(b);
            if (a >= 0) fc_[4 * std::size_t(a) + 1] = e;
            if (b >= 0) fc_[4 * std::size_t(b) + 0] = e;
        }
    for (int j = 0; j + 1 < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
            const int a = node_index(i, j), b = node_index(i, j + 1);
            if (a < 0 && b < 0) continue;
            const std::size_t e = yf_lo_.size();
            yf_lo_.push_back(a);
            yf_hi_.push_back(b);
            if (a >= 0) fc_[4 * std::size_t(a) + 3] = e;
            if (b >= 0) fc_[4 * std::size_t(b) + 2] = e;
        }

    // Exact Euclidean distance to the nearest exterior node, two separable passes.
    {
        const double far = 1e30;
        std::vector<double> g(mask_.size());
        for (std::size_t t = 0; t < mask_.size(); ++t) g[t] = mask_[t] ? far : 0.0;
        const int m = std::max(nx_, ny_);
        std::vector<double> f, d(m);
        std::vector<int> v(m);
        std::vector<double> z(m + 1);
        for (int j = 0; j < ny_; ++j) {
            f.assign(g.begin() + std::size_t(j) * nx_, g.begin() + std::size_t(j + 1) * nx_);
            d.resize(nx_);
            edt_1d(f, d, v, z);
            std::copy(f.begin(), f.end(), g.begin() + std::size_t(j) * nx_);
        }
        for (int i = 0; i < nx_; ++i) {
            f.resize(ny_);
            for (int j = 0; j < ny_; ++j) f[j] = g[std::size_t(j) * nx_ + i];
            d.resize(ny_);
            edt_1d(f, d, v, z);
            for (int j = 0; j < ny_; ++j) g[std::size_t(j) * nx_ + i] = f[j];
        }
        dist_.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            dist_[k] = std::sqrt(g[std::size_t(node_j_[k]) * nx_ + node_i_[k]]) * h_;
    }

    // Taxicab layer index by multi-source BFS from the exterior.
    layer_.assign(n, 0);
    std::deque<std::size_t> queue;
    for (std::size_t k = 0; k < n; ++k)
        for (int s = 0; s < 4; ++s)
            if (nbr_[4 * k + s] < 0) {
                layer_[k] = 1;
                queue.push_back(k);
                break;
            }
    while (!queue.empty()) {
        const std::size_t k = queue.front();
        queue.pop_front();
        for (int s = 0; s < 4; ++s) {
            const int b = nbr_[4 * k + s];
            if (b >= 0 && layer_[b] == 0) {
                layer_[b] = layer_[k] + 1;
                queue.push_back(std::size_t(b));
            }
        }
    }
}

bool GridDomain::interior(int i, int j) const { return node_index(i, j) >= 0; }

int GridDomain::node_index(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return -1;
    return index_[std::size_t(j) * nx_ + i];
}

Vec2 GridDomain::position(std::size_t k) const {
    return {origin_.x + node_i_[k] * h_, origin_.y + node_j_[k] * h_};
}

namespace {

struct Lattice {
    int i0, j0, nx, ny;
};

// Nodes live on the global lattice h*Z^2; the box gets one ring of padding.
Lattice lattice_for(double xmin, double xmax, double ymin, double ymax, double h) {
    Lattice L;
    L.i0 = static_cast<int>(std::floor(xmin / h)) - 1;
    L.j0 = static_cast<int>(std::floor(ymin / h)) - 1;
    const int i1 = static_cast<int>(std::ceil(xmax / h)) + 1;
    const int j1 = static_cast<int>(std::ceil(ymax / h)) + 1;
    L.nx = i1 - L.i0 + 1;
    L.ny = j1 - L.j0 + 1;
    return L;
}

template <class Inside>
DomainPtr rasterize(const Lattice& L, double h, Inside inside, bool convex, ShapeInfo shape) {
    std::vector<std::uint8_t> mask(std::size_t(L.nx) * L.ny, 0);
    for (int j = 1; j + 1 < L.ny; ++j)
        for (int i = 1; i + 1 < L.nx; ++i) {
            const double x = double(L.i0 + i) * h;
            const double y = double(L.j0 + j) * h;
            mask[std::size_t(j) * L.nx + i] = inside(x, y) ? 1 : 0;
        }
    bool any = false;
    for (auto m : mask) any = any || m;
    if (!any) throw DomainError("rasterization produced no interior node");
    return std::make_shared<const GridDomain>(h, Vec2{L.i0 * h, L.j0 * h}, L.nx, L.ny, std::move(mask),
                                              convex, std::move(shape));
}

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a, ap = p - a;
    const double len2 = ab.x * ab.x + ab.y * ab.y;
    double t = len2 > 0 ? (ap.x * ab.x + ap.y * ab.y) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + t * ab));
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    auto orient = [](Vec2 p, Vec2 q, Vec2 r) {
        const double v = cross(q - p, r - p);
        return (v > 0) - (v < 0);
    };
    auto on_segment = [](Vec2 p, Vec2 q, Vec2 r) {
        return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) && std::min(p.y, r.y) <= q.y &&
               q.y <= std::max(p.y, r.y);
    };
    const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, c, b)) return true;
    if (o2 == 0 && on_segment(a, d, b)) return true;
    if (o3 == 0 && on_segment(c, a, d)) return true;
    if (o4 == 0 && on_segment(c, b, d)) return true;
    return false;
}

}  // namespace

DomainPtr build_rectangle(double width, double height, double h) {
    if (!(width > 0) || !(height > 0) || !(h > 0))
        throw DomainError("rectangle dimensions and spacing must be positive");
    if (h > std::min(width, height) / 8.0)
        throw DomainError("spacing too coarse: need h <= min(width, height)/8");
    const double eps = 1e-9 * h;
    ShapeInfo s;
    s.kind = ShapeKind::Rectangle;
    s.width = width;
    s.height = height;
    std::ostringstream lab;
    lab.precision(17);
    lab << "rect:w=" << width << ",h=" << height;
    s.label = lab.str();
    return rasterize(
        lattice_for(0.0, width, 0.0, height, h), h,
        [&](double x, double y) { return x > eps && x < width - eps && y > eps && y < height - eps; },
        true, std::move(s));
}

DomainPtr build_disk(double radius, double h) {
    if (!(radius > 0) || !(h > 0)) throw DomainError("disk radius and spacing must be positive");
    if (h > radius / 4.0) throw DomainError("spacing too coarse: need h <= radius/4");
    const double eps = 1e-9 * h;
    ShapeInfo s;
    s.kind = ShapeKind::Disk;
    s.radius = radius;
    std::ostringstream lab;
    lab.precision(17);
    lab << "disk:r=" << radius;
    s.label = lab.str();
    return rasterize(
        lattice_for(-radius, radius, -radius, radius, h), h,
        [&](double x, double y) { return std::hypot(x, y) < radius - eps; }, true, std::move(s));
}

bool polygon_is_simple(const std::vector<Vec2>& v) {
    const std::size_t n = v.size();
    if (n < 3) return false;
    double area2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) area2 += cross(v[i], v[(i + 1) % n]);
    if (std::abs(area2) <= 0.0) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = v[i], b = v[(i + 1) % n];
        if (a.x == b.x && a.y == b.y) return false;
        for (std::size_t j = i + 1; j < n; ++j) {
            // Adjacent edges share a vertex and are allowed to touch there.
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(a, b, v[j], v[(j + 1) % n])) return false;
        }
    }
    return true;
}

bool polygon_is_convex(const std::vector<Vec2>& v) {
    const std::size_t n = v.size();
    int sign = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = cross(v[(i + 1) % n] - v[i], v[(i + 2) % n] - v[(i + 1) % n]);
        const int s = (c > 0) - (c < 0);
        if (s == 0) continue;
        if (sign == 0) sign = s;
        else if (s != sign) return false;
    }
    return true;
}

DomainPtr build_polygon(const std::vector<Vec2>& vertices, double h) {
    if (vertices.size() < 3) throw DomainError("polygon needs at least 3 vertices");
    if (!(h > 0)) throw DomainError("spacing must be positive");
    for (const auto& p : vertices)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DomainError("non-finite polygon vertex");
    if (!polygon_is_simple(vertices)) throw DomainError("polygon is degenerate or self-intersecting");
    double xmin = vertices[0].x, xmax = xmin, ymin = vertices[0].y, ymax = ymin;
    for (const auto& p : vertices) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    if (h > std::min(xmax - xmin, ymax - ymin) / 8.0)
        throw DomainError("spacing too coarse: need h <= min bounding-box side/8");
    const double eps = 1e-9 * h;
    const std::size_t n = vertices.size();
    auto inside = [&](double x, double y) {
        const Vec2 p{x, y};
        bool in = false;
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Vec2 a = vertices[i], b = vertices[j];
            if (segment_distance(p, a, b) <= eps) return false;
            if ((a.y > y) != (b.y > y) && x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x) in = !in;
        }
        return in;
    };
    ShapeInfo s;
    s.kind = ShapeKind::Polygon;
    s.vertices = vertices;
    std::ostringstream lab;
    lab.precision(17);
    lab << "poly:";
    for (std::size_t i = 0; i < n; ++i) lab << (i ? ";" : "") << vertices[i].x << "," << vertices[i].y;
    s.label = lab.str();
    return rasterize(lattice_for(xmin, xmax, ymin, ymax, h), h, inside, polygon_is_convex(vertices),
                     std::move(s));
}

DomainPtr build_from_mask(double h, Vec2 origin, int nx, int ny, std::vector<std::uint8_t> mask,
                          bool convex) {
    ShapeInfo s;
    s.label = "mask";
    return std::make_shared<const GridDomain>(h, origin, nx, ny, std::move(mask), convex, std::move(s));
}

// Marching squares on the 0/1 mask, iso-level 1/2, crossings at edge midpoints.
double mask_perimeter(const GridDomain& dom) {
    const double h = dom.h();
    const double diag = h / std::sqrt(2.0);
    double total = 0.0;
    for (int j = 0; j + 1 < dom.ny(); ++j)
        for (int i = 0; i + 1 < dom.nx(); ++i) {
            const bool a = dom.interior(i, j), b = dom.interior(i + 1, j);
            const bool c = dom.interior(i + 1, j + 1), d = dom.interior(i, j + 1);
            const int count = a + b + c + d;
            if (count == 1 || count == 3) total += diag;
            else if (count == 2) total += (a == c) ? 2.0 * diag : h;
        }
    return total;
}

double min_enclosing_radius(const std::vector<Vec2>& input, Vec2* center) {
    if (input.empty()) throw DomainError("no points");
    std::vector<Vec2> pts(input);
    std::mt19937_64 rng(0x5eed);
    std::shuffle(pts.begin(), pts.end(), rng);

    auto contains = [](Vec2 c, double r, Vec2 p) { return norm(p - c) <= r * (1.0 + 1e-12) + 1e-15; };
    auto circle2 = [](Vec2 a, Vec2 b, Vec2& c, double& r) {
        c = 0.5 * (a + b);
        r = 0.5 * norm(a - b);
    };
    auto circle3 = [&](Vec2 a, Vec2 b, Vec2 p, Vec2& c, double& r) {
        const Vec2 ab = b - a, ap = p - a;
        const double d = 2.0 * cross(ab, ap);
        if (std::abs(d) < 1e-14 * (ab.x * ab.x + ab.y * ab.y + ap.x * ap.x + ap.y * ap.y)) {
            // Collinear: the circle on the farthest pair.
            Vec2 c1, c2, c3;
            double r1, r2, r3;
            circle2(a, b, c1, r1);
            circle2(a, p, c2, r2);
            circle2(b, p, c3, r3);
            if (r1 >= r2 && r1 >= r3) c = c1, r = r1;
            else if (r2 >= r3) c = c2, r = r2;
            else c = c3, r = r3;
            return;
        }
        const double b2 = ab.x * ab.x + ab.y * ab.y, c2 = ap.x * ap.x + ap.y * ap.y;
        const Vec2 off{(ap.y * b2 - ab.y * c2) / d, (ab.x * c2 - ap.x * b2) / d};
        c = a + off;
        r = norm(off);
    };

    Vec2 c = pts[0];
    double r = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (contains(c, r, pts[i])) continue;
        c = pts[i];
        r = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            if (contains(c, r, pts[j])) continue;
            circle2(pts[i], pts[j], c, r);
            for (std::size_t k = 0; k < j; ++k)
                if (!contains(c, r, pts[k])) circle3(pts[i], pts[j], pts[k], c, r);
        }
    }
    if (center) *center = c;
    return r;
}

GeometricSummary summarize(const GridDomain& dom) {
    GeometricSummary s;
    const std::size_t n = dom.size();
    const double h2 = dom.h() * dom.h();
    s.area = double(n) * h2;
    s.perimeter = mask_perimeter(dom);
    const auto& d = dom.boundary_distance();
    s.inradius = *std::max_element(d.begin(), d.end());
    double sx = 0.0, sy = 0.0;
    std::vector<Vec2> rim;
    for (std::size_t k = 0; k < n; ++k) {
        const Vec2 p = dom.position(k);
        sx += p.x;
        sy += p.y;
        // Hull vertices of the node set always touch the exterior.
        if (dom.boundary_layer()[k] == 1) rim.push_back(p);
    }
    s.centroid = {sx / double(n), sy / double(n)};
    s.circumradius = min_enclosing_radius(rim);
    return s;
}

double moment(const GridDomain& dom, double p, Vec2 x0) {
    if (!std::isfinite(p)) throw DomainError("moment exponent must be finite");
    double sum = 0.0;
    const std::size_t n = dom.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Vec2 v = dom.position(k) - x0;
        const double r2 = v.x * v.x + v.y * v.y;
        if (p == 2.0) sum += r2;
        else if (r2 > 0.0) sum += std::pow(r2, 0.5 * p);
        else if (p == 0.0) sum += 1.0;
    }
    return sum * dom.h() * dom.h();
}

// Compass search from the centroid; the moment is convex in x0 for p >= 1.
std::pair<double, Vec2> min_moment(const GridDomain& dom, double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("min_moment needs finite p >= 1");
    double sx = 0.0, sy = 0.0;
    int imin = dom.nx(), imax = 0, jmin = dom.ny(), jmax = 0;
    for (std::size_t k = 0; k < dom.size(); ++k) {
        const Vec2 q = dom.position(k);
        sx += q.x;
        sy += q.y;
        imin = std::min(imin, dom.node_i(k));
        imax = std::max(imax, dom.node_i(k));
        jmin = std::min(jmin, dom.node_j(k));
        jmax = std::max(jmax, dom.node_j(k));
    }
    Vec2 x{sx / double(dom.size()), sy / double(dom.size())};
    double fx = moment(dom, p, x);
    double step = 0.25 * std::max(imax - imin + 1, jmax - jmin + 1) * dom.h();
    const double stop = 1e-4 * dom.h();
    std::vector<std::string> trace;
    const int cap = 4000;
    for (int it = 0; it < cap; ++it) {
        if (step < stop) return {fx, x};
        const Vec2 dirs[4] = {{step, 0}, {-step, 0}, {0, step}, {0, -step}};
        double best = fx;
        Vec2 bx = x;
        for (const auto& d : dirs) {
            const Vec2 y = x + d;
            const double fy = moment(dom, p, y);
            if (fy < best) {
                best = fy;
                bx = y;
            }
        }
        if (best < fx) {
            x = bx;
            fx = best;
        } else {
            step *= 0.5;
        }
        std::ostringstream line;
        line.precision(17);
        line << "it=" << it << " x=(" << x.x << "," << x.y << ") f=" << fx << " step=" << step;
        trace.push_back(line.str());
        if (trace.size() > 20) trace.erase(trace.begin());
    }
    throw ConvergenceError("min_moment: compass search did not converge", step, trace);
}

}  // namespace pfreq
